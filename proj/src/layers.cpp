#include "herman/layers.hpp"

#include <cmath>
#include <cstddef>

#include "herman/errors.hpp"
#include "herman/rng.hpp"

namespace herman {

void add_matrix_param(ParamStore& store, const std::string& name, std::size_t rows,
                      std::size_t cols, std::uint64_t seed) {
  Tensor w = Tensor::mat(rows, cols);
  double bound = 1.0 / std::sqrt(static_cast<double>(cols));
  Rng rng = Rng::keyed(seed, "init/" + name, 0);
  for (double& x : w.data) x = rng.uniform(-bound, bound);
  store.add(name, std::move(w));
}

void add_vector_param(ParamStore& store, const std::string& name, std::size_t n,
                      std::uint64_t seed) {
  Tensor v = Tensor::vec(n);
  double bound = 1.0 / std::sqrt(static_cast<double>(n));
  Rng rng = Rng::keyed(seed, "init/" + name, 0);
  for (double& x : v.data) x = rng.uniform(-bound, bound);
  store.add(name, std::move(v));
}

void add_bias_param(ParamStore& store, const std::string& name, std::size_t n) {
  store.add(name, Tensor::vec(n));
}

void add_lstm_params(ParamStore& store, const std::string& prefix, std::size_t input,
                     std::size_t hidden, std::uint64_t seed) {
  add_matrix_param(store, prefix + ".W", 4 * hidden, input + hidden, seed);
  Tensor b = Tensor::vec(4 * hidden);
  for (std::size_t i = hidden; i < 2 * hidden; ++i) b(i) = 1.0;
  store.add(prefix + ".b", std::move(b));
}

LstmState lstm_step(Tape& t, const std::string& prefix, Tape::NodeId x, const LstmState& prev) {
  Tape::NodeId w = t.param(prefix + ".W");
  Tape::NodeId b = t.param(prefix + ".b");
  std::size_t hidden = t.value(w).rows() / 4;

  Tape::NodeId gates = t.add(t.matvec(w, t.concat({x, prev.h})), b);
  Tape::NodeId in_gate = t.sigmoid_(t.slice(gates, 0, hidden));
  Tape::NodeId forget_gate = t.sigmoid_(t.slice(gates, hidden, 2 * hidden));
  Tape::NodeId candidate = t.tanh_(t.slice(gates, 2 * hidden, 3 * hidden));
  Tape::NodeId out_gate = t.sigmoid_(t.slice(gates, 3 * hidden, 4 * hidden));

  LstmState next;
  next.c = t.add(t.mul(forget_gate, prev.c), t.mul(in_gate, candidate));
  next.h = t.mul(out_gate, t.tanh_(next.c));
  return next;
}

void add_bilstm_params(ParamStore& store, const std::string& prefix, std::size_t input,
                       std::size_t hidden, std::uint64_t seed) {
  add_lstm_params(store, prefix + ".fw", input, hidden, seed);
  add_lstm_params(store, prefix + ".bw", input, hidden, seed);
}

std::vector<Tape::NodeId> bilstm(Tape& t, const std::string& prefix,
                                 const std::vector<Tape::NodeId>& xs) {
  if (xs.empty()) throw DataError("bilstm: empty input sequence");
  std::size_t hidden = t.value(t.param(prefix + ".fw.W")).rows() / 4;
  std::size_t n = xs.size();

  LstmState state{t.input(Tensor::vec(hidden)), t.input(Tensor::vec(hidden))};
  std::vector<Tape::NodeId> fw(n);
  for (std::size_t i = 0; i < n; ++i) {
    state = lstm_step(t, prefix + ".fw", xs[i], state);
    fw[i] = state.h;
  }

  state = LstmState{t.input(Tensor::vec(hidden)), t.input(Tensor::vec(hidden))};
  std::vector<Tape::NodeId> out(n);
  for (std::size_t i = n; i-- > 0;) {
    state = lstm_step(t, prefix + ".bw", xs[i], state);
    out[i] = t.concat({fw[i], state.h});
  }
  return out;
}

void add_attention_params(ParamStore& store, const std::string& prefix, std::size_t att,
                          std::size_t query_dim, std::size_t key_dim, std::uint64_t seed) {
  add_matrix_param(store, prefix + ".Wq", att, query_dim, seed);
  add_matrix_param(store, prefix + ".Wk", att, key_dim, seed);
  add_vector_param(store, prefix + ".v", att, seed);
}

Tape::NodeId project_keys(Tape& t, const std::string& prefix,
                          const std::vector<Tape::NodeId>& keys) {
  if (keys.empty()) throw DataError("project_keys: empty key sequence");
  Tape::NodeId wk = t.param(prefix + ".Wk");
  std::vector<Tape::NodeId> rows(keys.size());
  for (std::size_t i = 0; i < keys.size(); ++i) rows[i] = t.matvec(wk, keys[i]);
  return t.stack_rows(rows);
}

Attended attend(Tape& t, const std::string& prefix, Tape::NodeId query, Tape::NodeId keys_matrix,
                Tape::NodeId projected_keys) {
  Tape::NodeId scores = t.attention_scores(projected_keys, t.param(prefix + ".Wq"), query,
                                           t.param(prefix + ".v"));
  Attended out;
  out.weights = t.softmax(scores);
  out.context = t.matvec_t(keys_matrix, out.weights);
  return out;
}

void add_mlp_params(ParamStore& store, const std::string& prefix, std::size_t input,
                    std::size_t hidden, std::uint64_t seed) {
  add_matrix_param(store, prefix + ".W1", hidden, input, seed);
  add_bias_param(store, prefix + ".b1", hidden);
  add_vector_param(store, prefix + ".w2", hidden, seed);
  add_bias_param(store, prefix + ".b2", 1);
}

Tape::NodeId mlp_logit(Tape& t, const std::string& prefix, Tape::NodeId x) {
  Tape::NodeId h = t.tanh_(
      t.add(t.matvec(t.param(prefix + ".W1"), x), t.param(prefix + ".b1")));
  Tape::NodeId logit = t.dot(t.param(prefix + ".w2"), h);
  return t.add(logit, t.index(t.param(prefix + ".b2"), 0));
}

}  // namespace herman
