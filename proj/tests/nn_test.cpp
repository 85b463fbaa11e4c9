#include <cmath>
#include <cstring>
#include <limits>
#include <map>
#include <vector>

#include "doctest.h"
#include "grad_check.hpp"
#include "herman/errors.hpp"
#include "herman/kernels.hpp"
#include "herman/layers.hpp"
#include "herman/optim.hpp"
#include "herman/parallel.hpp"
#include "herman/rng.hpp"
#include "herman/tape.hpp"
#include "herman/tensor.hpp"

using namespace herman;
using herman::testing::check_gradients;
using herman::testing::GradCheckResult;

namespace {

Tensor random_tensor(std::vector<std::size_t> shape, std::uint64_t seed) {
  Tensor t = Tensor::zeros(std::move(shape));
  Rng rng(seed);
  for (double& x : t.data) x = rng.uniform(-1.0, 1.0);
  return t;
}

bool bitwise_equal(const Tensor& a, const Tensor& b) {
  return a.shape == b.shape &&
         std::memcmp(a.data.data(), b.data.data(), a.data.size() * sizeof(double)) == 0;
}

struct ThreadCapGuard {
  int saved;
  explicit ThreadCapGuard(int n) : saved(max_threads()) { set_max_threads(n); }
  ~ThreadCapGuard() { set_max_threads(saved); }
};

void require_grads_ok(const GradCheckResult& res) {
  CAPTURE(res.worst_param);
  CAPTURE(res.worst_index);
  CAPTURE(res.analytic);
  CAPTURE(res.numeric);
  CAPTURE(res.worst_rel);
  REQUIRE(res.checked > 0);
  CHECK(res.ok);
}

}  // namespace

TEST_CASE("tensor shapes and element access") {
  Tensor v = Tensor::vec(3);
  CHECK(v.rank() == 1);
  CHECK(v.size() == 3);
  v(1) = 2.5;
  CHECK(v(1) == 2.5);

  Tensor m = Tensor::mat(2, 3);
  CHECK(m.rank() == 2);
  m(1, 2) = 7.0;
  CHECK(m.data[5] == 7.0);

  Tensor s = Tensor::scalar(4.0);
  CHECK(s.size() == 1);
  CHECK(s(0) == 4.0);

  Tensor w = Tensor::vec(3);
  w.fill(1.0);
  v.add_in_place(w);
  CHECK(v(1) == 3.5);
  v.scale_in_place(2.0);
  CHECK(v(0) == 2.0);

  Tensor bad = Tensor::vec(4);
  CHECK_THROWS_AS(v.add_in_place(bad), NumericError);
}

TEST_CASE("param store registration and gradients") {
  ParamStore store;
  store.add("a", Tensor::vec(3));
  store.add("b", Tensor::mat(2, 2));
  CHECK(store.total_size() == 7);
  CHECK(store.has("a"));
  CHECK_FALSE(store.has("c"));
  CHECK_THROWS_AS(store.add("a", Tensor::vec(1)), ConfigError);
  CHECK_THROWS_AS(store.get("missing"), ConfigError);

  store.grad("a")(0) = 5.0;
  store.zero_grads();
  CHECK(store.grad("a")(0) == 0.0);
}

TEST_CASE("threads_for stays serial for small work") {
  ThreadCapGuard cap(8);
  CHECK(threads_for(1, 1000000) == 1);
  CHECK(threads_for(100, 1) == 1);
  CHECK(threads_for(100000, 1000) > 1);
  CHECK(threads_for(100000, 1000) <= 8);

  set_max_threads(1);
  CHECK(threads_for(100000, 1000) == 1);
}

TEST_CASE("kernel dispatch is bit-identical to the serial reference") {
  // Large enough that threads_for picks the parallel path.
  Tensor w = random_tensor({300, 200}, 11);
  Tensor x = random_tensor({200}, 12);
  Tensor g = random_tensor({300}, 13);

  Tensor mv_ref = Tensor::vec(300);
  Tensor mvt_ref = Tensor::vec(200);
  Tensor outer_ref = random_tensor({300, 200}, 14);
  serial::matvec(w, x, mv_ref);
  serial::matvec_t(w, g, mvt_ref);
  Tensor outer_base = outer_ref;
  serial::outer_add(g, x, outer_ref);

  for (int threads : {1, 2, 3, 8}) {
    CAPTURE(threads);
    ThreadCapGuard cap(threads);
    Tensor mv = Tensor::vec(300);
    Tensor mvt = Tensor::vec(200);
    Tensor outer = outer_base;
    matvec(w, x, mv);
    matvec_t(w, g, mvt);
    outer_add(g, x, outer);
    CHECK(bitwise_equal(mv, mv_ref));
    CHECK(bitwise_equal(mvt, mvt_ref));
    CHECK(bitwise_equal(outer, outer_ref));
  }
}

TEST_CASE("kernels reject mismatched shapes") {
  Tensor w = Tensor::mat(3, 2);
  Tensor x = Tensor::vec(3);
  Tensor out = Tensor::vec(3);
  CHECK_THROWS_AS(matvec(w, x, out), NumericError);
  Tensor g = Tensor::vec(2);
  CHECK_THROWS_AS(matvec_t(w, g, out), NumericError);
  Tensor acc = Tensor::mat(2, 2);
  CHECK_THROWS_AS(outer_add(g, x, acc), NumericError);
}

TEST_CASE("tape forward values match direct computation") {
  ParamStore store;
  Tape t(&store);

  Tensor av = random_tensor({4}, 21);
  Tensor bv = random_tensor({4}, 22);
  Tape::NodeId a = t.input(av);
  Tape::NodeId b = t.input(bv);

  Tape::NodeId sum = t.add(a, b);
  Tape::NodeId prod = t.mul(a, b);
  for (std::size_t i = 0; i < 4; ++i) {
    CHECK(t.value(sum)(i) == av(i) + bv(i));
    CHECK(t.value(prod)(i) == av(i) * bv(i));
    CHECK(t.value(t.sub(a, b))(i) == av(i) - bv(i));
    CHECK(t.value(t.scale(a, 2.5))(i) == 2.5 * av(i));
  }

  Tape::NodeId cat = t.concat({a, b});
  CHECK(t.value(cat).size() == 8);
  CHECK(t.value(cat)(6) == bv(2));
  Tape::NodeId sl = t.slice(cat, 2, 6);
  CHECK(t.value(sl)(0) == av(2));
  CHECK(t.value(sl)(3) == bv(1));

  Tensor wm = random_tensor({3, 4}, 23);
  Tape::NodeId w = t.input(wm);
  Tape::NodeId mv = t.matvec(w, a);
  for (std::size_t r = 0; r < 3; ++r) {
    double want = 0.0;
    for (std::size_t c = 0; c < 4; ++c) want += wm(r, c) * av(c);
    CHECK(t.value(mv)(r) == doctest::Approx(want).epsilon(1e-15));
  }

  Tensor gv = random_tensor({3}, 24);
  Tape::NodeId gnode = t.input(gv);
  Tape::NodeId mvt = t.matvec_t(w, gnode);
  for (std::size_t c = 0; c < 4; ++c) {
    double want = 0.0;
    for (std::size_t r = 0; r < 3; ++r) want += wm(r, c) * gv(r);
    CHECK(t.value(mvt)(c) == doctest::Approx(want).epsilon(1e-15));
  }

  double dots = 0.0;
  for (std::size_t i = 0; i < 4; ++i) dots += av(i) * bv(i);
  CHECK(t.value(t.dot(a, b))(0) == doctest::Approx(dots).epsilon(1e-15));

  CHECK(t.value(t.index(a, 2))(0) == av(2));
  CHECK(t.value(t.index2(w, 1, 3))(0) == wm(1, 3));
  CHECK(t.value(t.col(w, 1))(2) == wm(2, 1));
  CHECK(t.value(t.row(w, 2))(1) == wm(2, 1));

  Tape::NodeId stacked = t.stack_rows({a, b});
  CHECK(t.value(stacked).rows() == 2);
  CHECK(t.value(stacked)(1, 3) == bv(3));

  Tape::NodeId avg = t.average({a, b});
  CHECK(t.value(avg)(1) == doctest::Approx(0.5 * (av(1) + bv(1))).epsilon(1e-15));
}

TEST_CASE("tape nonlinearities match closed forms") {
  ParamStore store;
  Tape t(&store);
  Tensor xv = random_tensor({5}, 31);
  xv(0) = 3.0;
  xv(1) = -3.0;
  Tape::NodeId x = t.input(xv);

  Tape::NodeId th = t.tanh_(x);
  Tape::NodeId sg = t.sigmoid_(x);
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(t.value(th)(i) == doctest::Approx(std::tanh(xv(i))).epsilon(1e-15));
    CHECK(t.value(sg)(i) == doctest::Approx(1.0 / (1.0 + std::exp(-xv(i)))).epsilon(1e-15));
  }

  Tape::NodeId sm = t.softmax(x);
  double mx = xv(0);
  for (std::size_t i = 1; i < 5; ++i) mx = std::max(mx, xv(i));
  double z = 0.0;
  for (std::size_t i = 0; i < 5; ++i) z += std::exp(xv(i) - mx);
  double total = 0.0;
  for (std::size_t i = 0; i < 5; ++i) {
    CHECK(t.value(sm)(i) == doctest::Approx(std::exp(xv(i) - mx) / z).epsilon(1e-14));
    total += t.value(sm)(i);
  }
  CHECK(total == doctest::Approx(1.0).epsilon(1e-14));
  CHECK(t.value(t.logsumexp(x))(0) == doctest::Approx(mx + std::log(z)).epsilon(1e-14));

  // Large magnitudes must not overflow the max-shifted forms.
  Tensor big = Tensor::vec(3);
  big(0) = 1000.0;
  big(1) = 999.0;
  big(2) = -1000.0;
  Tape::NodeId bnode = t.input(big);
  CHECK(std::isfinite(t.value(t.logsumexp(bnode))(0)));
  CHECK(t.value(t.softmax(bnode))(0) == doctest::Approx(1.0 / (1.0 + std::exp(-1.0))).epsilon(1e-12));

  double logit = 0.7, target = 1.0;
  double p = 1.0 / (1.0 + std::exp(-logit));
  Tensor lv = Tensor::scalar(logit);
  Tape::NodeId ln = t.input(lv);
  CHECK(t.value(t.bce_with_logit(ln, target))(0) == doctest::Approx(-std::log(p)).epsilon(1e-14));
  CHECK(t.value(t.bce_with_logit(ln, 0.0))(0) == doctest::Approx(-std::log(1.0 - p)).epsilon(1e-14));
  Tensor hv = Tensor::scalar(40.0);
  CHECK(std::isfinite(t.value(t.bce_with_logit(t.input(hv), 0.0))(0)));
}

TEST_CASE("attention scores match the unfused form") {
  ParamStore store;
  Tape t(&store);
  std::size_t att = 3, qd = 4, T = 5;
  Tensor wq = random_tensor({att, qd}, 41);
  Tensor q = random_tensor({qd}, 42);
  Tensor v = random_tensor({att}, 43);
  Tensor p = random_tensor({T, att}, 44);

  Tape::NodeId scores =
      t.attention_scores(t.input(p), t.input(wq), t.input(q), t.input(v));
  REQUIRE(t.value(scores).size() == T);
  for (std::size_t i = 0; i < T; ++i) {
    double s = 0.0;
    for (std::size_t a = 0; a < att; ++a) {
      double u = 0.0;
      for (std::size_t c = 0; c < qd; ++c) u += wq(a, c) * q(c);
      s += v(a) * std::tanh(u + p(i, a));
    }
    CHECK(t.value(scores)(i) == doctest::Approx(s).epsilon(1e-14));
  }
}

TEST_CASE("gradients for elementwise and linear ops") {
  ParamStore store;
  store.add("a", random_tensor({4}, 51));
  store.add("b", random_tensor({4}, 52));
  store.add("W", random_tensor({3, 4}, 53));
  Tensor weight = random_tensor({3}, 54);
  Tensor weight4 = random_tensor({4}, 55);
  Tensor weight8 = random_tensor({8}, 56);

  SUBCASE("add mul scale slice concat") {
    require_grads_ok(check_gradients(store, [&](Tape& t) {
      Tape::NodeId a = t.param("a");
      Tape::NodeId b = t.param("b");
      Tape::NodeId y = t.concat({t.add(a, b), t.mul(a, t.scale(b, 1.5))});
      Tape::NodeId s = t.slice(y, 1, 5);
      return t.dot(t.slice(t.input(weight8), 0, 4), s);
    }));
  }

  SUBCASE("matvec and matvec_t") {
    require_grads_ok(check_gradients(store, [&](Tape& t) {
      Tape::NodeId mv = t.matvec(t.param("W"), t.param("a"));
      Tape::NodeId mvt = t.matvec_t(t.param("W"), t.input(weight));
      return t.add(t.dot(t.input(weight), mv), t.dot(t.input(weight4), mvt));
    }));
  }

  SUBCASE("row col index picks") {
    require_grads_ok(check_gradients(store, [&](Tape& t) {
      Tape::NodeId w = t.param("W");
      std::vector<Tape::NodeId> parts = {
          t.dot(t.input(weight4), t.row(w, 1)),
          t.dot(t.input(weight), t.col(w, 2)),
          t.index2(w, 0, 3),
          t.index(t.param("a"), 1),
      };
      return t.sum_scalars(parts);
    }));
  }

  SUBCASE("stack average sum") {
    require_grads_ok(check_gradients(store, [&](Tape& t) {
      Tape::NodeId a = t.param("a");
      Tape::NodeId b = t.param("b");
      Tape::NodeId m = t.stack_rows({a, b, t.mul(a, b)});
      Tape::NodeId avg = t.average({t.row(m, 0), t.row(m, 2)});
      Tape::NodeId vs = t.vec_from_scalars({t.index(avg, 0), t.index(b, 2)});
      return t.sum_scalars({t.dot(avg, t.input(weight4)), t.index(vs, 0), t.index(vs, 1)});
    }));
  }
}

TEST_CASE("gradients for nonlinearities") {
  ParamStore store;
  store.add("x", random_tensor({5}, 61));
  store.add("logit", random_tensor({1}, 62));
  Tensor weight = random_tensor({5}, 63);

  SUBCASE("tanh sigmoid") {
    require_grads_ok(check_gradients(store, [&](Tape& t) {
      Tape::NodeId x = t.param("x");
      return t.add(t.dot(t.input(weight), t.tanh_(x)),
                   t.dot(t.input(weight), t.sigmoid_(x)));
    }));
  }

  SUBCASE("softmax") {
    require_grads_ok(check_gradients(store, [&](Tape& t) {
      return t.dot(t.input(weight), t.softmax(t.param("x")));
    }));
  }

  SUBCASE("logsumexp") {
    require_grads_ok(check_gradients(store, [&](Tape& t) {
      return t.logsumexp(t.param("x"));
    }));
  }

  SUBCASE("bce with logit") {
    for (double target : {0.0, 1.0}) {
      CAPTURE(target);
      require_grads_ok(check_gradients(store, [&, target](Tape& t) {
        return t.bce_with_logit(t.index(t.param("logit"), 0), target);
      }));
    }
  }
}

TEST_CASE("gradients flow through fused attention scores") {
  ParamStore store;
  store.add("Wq", random_tensor({3, 4}, 71));
  store.add("q", random_tensor({4}, 72));
  store.add("v", random_tensor({3}, 73));
  store.add("P", random_tensor({5, 3}, 74));
  Tensor weight = random_tensor({5}, 75);

  require_grads_ok(check_gradients(store, [&](Tape& t) {
    Tape::NodeId scores =
        t.attention_scores(t.param("P"), t.param("Wq"), t.param("q"), t.param("v"));
    return t.dot(t.input(weight), t.softmax(scores));
  }));
}

TEST_CASE("embedding rows accumulate sparse gradients") {
  ParamStore store;
  store.add("embed", random_tensor({6, 3}, 81));
  Tensor weight = random_tensor({3}, 82);

  store.zero_grads();
  {
    Tape t(&store);
    // Row 2 used twice through the memoized cache, row 4 once.
    Tape::NodeId r2 = t.param_row("embed", 2);
    Tape::NodeId again = t.param_row("embed", 2);
    CHECK(r2 == again);
    Tape::NodeId loss =
        t.sum_scalars({t.dot(t.input(weight), r2), t.dot(t.input(weight), again),
                       t.dot(t.input(weight), t.param_row("embed", 4))});
    t.backward(loss);
    t.accumulate_into(store);
  }
  const Tensor& g = store.grad("embed");
  for (std::size_t c = 0; c < 3; ++c) {
    CHECK(g(2, c) == doctest::Approx(2.0 * weight(c)).epsilon(1e-15));
    CHECK(g(4, c) == doctest::Approx(weight(c)).epsilon(1e-15));
    CHECK(g(0, c) == 0.0);
    CHECK(g(5, c) == 0.0);
  }

  require_grads_ok(check_gradients(store, [&](Tape& t) {
    return t.sum_scalars({t.dot(t.input(weight), t.param_row("embed", 2)),
                          t.dot(t.input(weight), t.param_row("embed", 2)),
                          t.dot(t.input(weight), t.param_row("embed", 4))});
  }));
}

TEST_CASE("lstm step and bilstm gradients") {
  ParamStore store;
  add_bilstm_params(store, "enc", 3, 4, 99);
  std::vector<Tensor> xs;
  for (int i = 0; i < 3; ++i) xs.push_back(random_tensor({3}, 100 + i));
  Tensor weight = random_tensor({8}, 110);

  SUBCASE("single step") {
    require_grads_ok(check_gradients(store, [&](Tape& t) {
      LstmState st{t.input(Tensor::vec(4)), t.input(Tensor::vec(4))};
      st = lstm_step(t, "enc.fw", t.input(xs[0]), st);
      return t.add(t.dot(t.slice(t.input(weight), 0, 4), st.h),
                   t.dot(t.slice(t.input(weight), 4, 8), st.c));
    }));
  }

  SUBCASE("bidirectional sequence") {
    require_grads_ok(check_gradients(store, [&](Tape& t) {
      std::vector<Tape::NodeId> inputs;
      for (const Tensor& x : xs) inputs.push_back(t.input(x));
      std::vector<Tape::NodeId> hs = bilstm(t, "enc", inputs);
      REQUIRE(t.value(hs[0]).size() == 8);
      return t.dot(t.input(weight), t.average(hs));
    }));
  }

  SUBCASE("forget gate bias starts at one") {
    const Tensor& b = store.get("enc.fw.b");
    CHECK(b(3) == 0.0);
    CHECK(b(4) == 1.0);
    CHECK(b(7) == 1.0);
    CHECK(b(8) == 0.0);
  }
}

TEST_CASE("attention layer and mlp head gradients") {
  ParamStore store;
  add_attention_params(store, "att", 3, 4, 4, 120);
  add_mlp_params(store, "z", 4, 3, 121);
  store.add("query", random_tensor({4}, 122));
  std::vector<Tensor> keys;
  for (int i = 0; i < 4; ++i) keys.push_back(random_tensor({4}, 130 + i));
  Tensor weight = random_tensor({4}, 140);

  require_grads_ok(check_gradients(store, [&](Tape& t) {
    std::vector<Tape::NodeId> key_nodes;
    for (const Tensor& k : keys) key_nodes.push_back(t.input(k));
    Tape::NodeId keys_matrix = t.stack_rows(key_nodes);
    Tape::NodeId projected = project_keys(t, "att", key_nodes);
    Attended got = attend(t, "att", t.param("query"), keys_matrix, projected);

    double wsum = 0.0;
    for (std::size_t i = 0; i < 4; ++i) wsum += t.value(got.weights)(i);
    CHECK(wsum == doctest::Approx(1.0).epsilon(1e-12));

    return t.bce_with_logit(mlp_logit(t, "z", got.context), 1.0);
  }));
}

TEST_CASE("parameter init is order-independent and bounded") {
  ParamStore a, b;
  add_matrix_param(a, "first", 4, 9, 7);
  add_matrix_param(a, "second", 3, 16, 7);
  add_matrix_param(b, "second", 3, 16, 7);
  add_matrix_param(b, "first", 4, 9, 7);
  CHECK(bitwise_equal(a.get("first"), b.get("first")));
  CHECK(bitwise_equal(a.get("second"), b.get("second")));

  for (double x : a.get("second").data) CHECK(std::fabs(x) <= 0.25);
  bool any_nonzero = false;
  for (double x : a.get("first").data) any_nonzero |= x != 0.0;
  CHECK(any_nonzero);
}

TEST_CASE("adam matches a scalar reference implementation") {
  AdamConfig cfg;
  ParamStore store;
  store.add("p", random_tensor({3}, 150));
  Tensor initial = store.get("p");
  Adam opt(cfg);

  // Reference: same recurrence element by element.
  std::vector<double> m(3, 0.0), v(3, 0.0), expect(initial.data.begin(), initial.data.end());
  Rng rng(151);
  for (int step = 1; step <= 4; ++step) {
    Tensor g = Tensor::vec(3);
    for (std::size_t i = 0; i < 3; ++i) g(i) = rng.uniform(-1.0, 1.0);
    store.grad("p") = g;
    for (std::size_t i = 0; i < 3; ++i) {
      m[i] = cfg.beta1 * m[i] + (1.0 - cfg.beta1) * g(i);
      v[i] = cfg.beta2 * v[i] + (1.0 - cfg.beta2) * g(i) * g(i);
      double mh = m[i] / (1.0 - std::pow(cfg.beta1, step));
      double vh = v[i] / (1.0 - std::pow(cfg.beta2, step));
      expect[i] -= cfg.lr * mh / (std::sqrt(vh) + cfg.eps);
    }
    opt.step(store);
    for (std::size_t i = 0; i < 3; ++i)
      CHECK(store.get("p")(i) == doctest::Approx(expect[i]).epsilon(1e-15));
  }
  CHECK(opt.steps_taken() == 4);
}

TEST_CASE("adam leaves parameters alone for zero gradients or zero lr") {
  ParamStore store;
  store.add("p", random_tensor({4}, 160));
  Tensor before = store.get("p");

  Adam opt{AdamConfig{}};
  store.zero_grads();
  opt.step(store);
  CHECK(bitwise_equal(store.get("p"), before));

  AdamConfig frozen;
  frozen.lr = 0.0;
  Adam opt2(frozen);
  store.grad("p").fill(0.3);
  opt2.step(store);
  CHECK(bitwise_equal(store.get("p"), before));
}

TEST_CASE("adam rejects non-finite gradients") {
  ParamStore store;
  store.add("p", random_tensor({2}, 170));
  store.grad("p")(0) = std::nan("");
  Adam opt{AdamConfig{}};
  CHECK_THROWS_AS(opt.step(store), NumericError);
}

TEST_CASE("global norm clipping") {
  ParamStore store;
  store.add("a", Tensor::vec(1));
  store.add("b", Tensor::vec(1));
  store.grad("a")(0) = 3.0;
  store.grad("b")(0) = 4.0;
  CHECK(clip_global_norm(store, 5.0) == doctest::Approx(5.0));
  CHECK(store.grad("a")(0) == 3.0);

  store.grad("a")(0) = 6.0;
  store.grad("b")(0) = 8.0;
  CHECK(clip_global_norm(store, 5.0) == doctest::Approx(10.0));
  CHECK(store.grad("a")(0) == doctest::Approx(3.0));
  CHECK(store.grad("b")(0) == doctest::Approx(4.0));

  store.grad("a")(0) = std::numeric_limits<double>::infinity();
  CHECK_THROWS_AS(clip_global_norm(store, 5.0), NumericError);
}

TEST_CASE("tape runs are deterministic across thread counts") {
  ParamStore store;
  add_bilstm_params(store, "enc", 4, 6, 200);
  add_attention_params(store, "att", 5, 12, 12, 201);
  std::vector<Tensor> xs;
  for (int i = 0; i < 5; ++i) xs.push_back(random_tensor({4}, 210 + i));

  auto run = [&](ParamStore& grads_into) {
    Tape t(&grads_into);
    std::vector<Tape::NodeId> inputs;
    for (const Tensor& x : xs) inputs.push_back(t.input(x));
    std::vector<Tape::NodeId> hs = bilstm(t, "enc", inputs);
    Tape::NodeId keys_matrix = t.stack_rows(hs);
    Tape::NodeId projected = project_keys(t, "att", hs);
    Attended got = attend(t, "att", hs[0], keys_matrix, projected);
    Tape::NodeId loss = t.logsumexp(got.context);
    t.backward(loss);
    grads_into.zero_grads();
    t.accumulate_into(grads_into);
    return t.value(loss)(0);
  };

  ThreadCapGuard outer(1);
  double serial_loss = run(store);
  std::map<std::string, Tensor> serial_grads = store.grads;
  {
    ThreadCapGuard cap(4);
    double parallel_loss = run(store);
    CHECK(parallel_loss == serial_loss);
    for (const auto& [name, g] : serial_grads) {
      CAPTURE(name);
      CHECK(bitwise_equal(g, store.grads.at(name)));
    }
  }
}
