// Times the serial reference kernels against the OpenMP dispatch path and
// verifies on the way that both produce identical bits. Sizes cover the
// shapes the model actually runs: LSTM gate products, attention projections
// and embedding-sized outer products.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <functional>
#include <string>
#include <vector>

#include "herman/kernels.hpp"
#include "herman/parallel.hpp"
#include "herman/rng.hpp"
#include "herman/tensor.hpp"

namespace {

using herman::Rng;
using herman::Tensor;

Tensor random_mat(std::size_t r, std::size_t c, Rng& rng) {
  Tensor t = Tensor::mat(r, c);
  for (double& v : t.data) v = rng.uniform(-1.0, 1.0);
  return t;
}

Tensor random_vec(std::size_t n, Rng& rng) {
  Tensor t = Tensor::vec(n);
  for (double& v : t.data) v = rng.uniform(-1.0, 1.0);
  return t;
}

double seconds_per_call(const std::function<void()>& fn, int reps) {
  fn();  // warm up
  auto t0 = std::chrono::steady_clock::now();
  for (int i = 0; i < reps; ++i) fn();
  auto t1 = std::chrono::steady_clock::now();
  return std::chrono::duration<double>(t1 - t0).count() / reps;
}

bool identical(const Tensor& a, const Tensor& b) {
  for (std::size_t i = 0; i < a.data.size(); ++i)
    if (a.data[i] != b.data[i]) return false;
  return true;
}

struct Shape {
  std::size_t rows, cols;
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"compare serial and OpenMP kernel implementations"};
  int reps = 50;
  int threads = herman::max_threads();
  app.add_option("--reps", reps, "timed repetitions per shape");
  app.add_option("--threads", threads, "thread cap for the parallel path");
  CLI11_PARSE(app, argc, argv);

  const Shape shapes[] = {
      {128, 164},    // small-model LSTM gates
      {1024, 1356},  // full-size LSTM gates (4*256 x (embed+hidden))
      {256, 512},    // attention key projection
      {2048, 2048},  // stress shape
  };

  std::printf("%-14s %12s %12s %9s  %s\n", "shape", "serial s", "parallel s", "speedup",
              "bit-identical");
  Rng rng(42);
  for (const Shape& s : shapes) {
    Tensor W = random_mat(s.rows, s.cols, rng);
    Tensor x = random_vec(s.cols, rng);
    Tensor g = random_vec(s.rows, rng);
    Tensor out_s = Tensor::vec(s.rows), out_p = Tensor::vec(s.rows);
    Tensor back_s = Tensor::vec(s.cols), back_p = Tensor::vec(s.cols);
    Tensor acc_s = Tensor::mat(s.rows, s.cols), acc_p = Tensor::mat(s.rows, s.cols);

    herman::set_max_threads(1);
    double t_mv_s = seconds_per_call([&] { herman::serial::matvec(W, x, out_s); }, reps);
    double t_mvt_s = seconds_per_call([&] { herman::serial::matvec_t(W, g, back_s); }, reps);
    double t_oa_s = seconds_per_call([&] { herman::serial::outer_add(g, x, acc_s); }, reps);

    herman::set_max_threads(threads);
    double t_mv_p = seconds_per_call([&] { herman::matvec(W, x, out_p); }, reps);
    double t_mvt_p = seconds_per_call([&] { herman::matvec_t(W, g, back_p); }, reps);
    double t_oa_p = seconds_per_call([&] { herman::outer_add(g, x, acc_p); }, reps);

    bool same = identical(out_s, out_p) && identical(back_s, back_p);
    // outer_add accumulates across timed reps; rerun both once from zero
    acc_s.fill(0.0);
    acc_p.fill(0.0);
    herman::set_max_threads(1);
    herman::serial::outer_add(g, x, acc_s);
    herman::set_max_threads(threads);
    herman::outer_add(g, x, acc_p);
    same = same && identical(acc_s, acc_p);

    char label[32];
    std::snprintf(label, sizeof(label), "%zux%zu", s.rows, s.cols);
    std::printf("%-14s %12.3e %12.3e %8.2fx  %s  (matvec)\n", label, t_mv_s, t_mv_p,
                t_mv_s / t_mv_p, same ? "yes" : "NO");
    std::printf("%-14s %12.3e %12.3e %8.2fx  %s  (matvec_t)\n", "", t_mvt_s, t_mvt_p,
                t_mvt_s / t_mvt_p, same ? "yes" : "NO");
    std::printf("%-14s %12.3e %12.3e %8.2fx  %s  (outer_add)\n", "", t_oa_s, t_oa_p,
                t_oa_s / t_oa_p, same ? "yes" : "NO");
    if (!same) return 1;
  }
  return 0;
}
