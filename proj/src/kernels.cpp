#include "herman/kernels.hpp"

#include "herman/errors.hpp"
#include "herman/parallel.hpp"

namespace herman {

namespace {

void check_matvec(const Tensor& W, const Tensor& x, const Tensor& out) {
  if (W.rank() != 2 || x.rank() != 1 || out.rank() != 1 || W.cols() != x.size() ||
      W.rows() != out.size())
    throw NumericError("matvec shape mismatch");
}

void check_matvec_t(const Tensor& W, const Tensor& g, const Tensor& out) {
  if (W.rank() != 2 || g.rank() != 1 || out.rank() != 1 || W.rows() != g.size() ||
      W.cols() != out.size())
    throw NumericError("matvec_t shape mismatch");
}

void check_outer(const Tensor& g, const Tensor& x, const Tensor& acc) {
  if (acc.rank() != 2 || g.rank() != 1 || x.rank() != 1 || acc.rows() != g.size() ||
      acc.cols() != x.size())
    throw NumericError("outer_add shape mismatch");
}

double row_dot(const Tensor& W, std::size_t r, const Tensor& x) {
  const double* row = W.data.data() + r * W.cols();
  double acc = 0.0;
  for (std::size_t c = 0; c < W.cols(); ++c) acc += row[c] * x.data[c];
  return acc;
}

double col_dot(const Tensor& W, std::size_t c, const Tensor& g) {
  double acc = 0.0;
  for (std::size_t r = 0; r < W.rows(); ++r) acc += W.data[r * W.cols() + c] * g.data[r];
  return acc;
}

}  // namespace

namespace serial {

void matvec(const Tensor& W, const Tensor& x, Tensor& out) {
  check_matvec(W, x, out);
  for (std::size_t r = 0; r < W.rows(); ++r) out.data[r] = row_dot(W, r, x);
}

void matvec_t(const Tensor& W, const Tensor& g, Tensor& out) {
  check_matvec_t(W, g, out);
  for (std::size_t c = 0; c < W.cols(); ++c) out.data[c] = col_dot(W, c, g);
}

void outer_add(const Tensor& g, const Tensor& x, Tensor& acc) {
  check_outer(g, x, acc);
  for (std::size_t r = 0; r < g.size(); ++r) {
    double* row = acc.data.data() + r * x.size();
    for (std::size_t c = 0; c < x.size(); ++c) row[c] += g.data[r] * x.data[c];
  }
}

}  // namespace serial

void matvec(const Tensor& W, const Tensor& x, Tensor& out) {
  check_matvec(W, x, out);
  int threads = threads_for(W.rows(), 2 * W.cols());
  if (threads <= 1) {
    serial::matvec(W, x, out);
    return;
  }
  const long rows = static_cast<long>(W.rows());
#pragma omp parallel for schedule(static) num_threads(threads)
  for (long r = 0; r < rows; ++r) out.data[r] = row_dot(W, r, x);
}

void matvec_t(const Tensor& W, const Tensor& g, Tensor& out) {
  check_matvec_t(W, g, out);
  int threads = threads_for(W.cols(), 2 * W.rows());
  if (threads <= 1) {
    serial::matvec_t(W, g, out);
    return;
  }
  const long cols = static_cast<long>(W.cols());
#pragma omp parallel for schedule(static) num_threads(threads)
  for (long c = 0; c < cols; ++c) out.data[c] = col_dot(W, c, g);
}

void outer_add(const Tensor& g, const Tensor& x, Tensor& acc) {
  check_outer(g, x, acc);
  int threads = threads_for(g.size(), 2 * x.size());
  if (threads <= 1) {
    serial::outer_add(g, x, acc);
    return;
  }
  const long rows = static_cast<long>(g.size());
#pragma omp parallel for schedule(static) num_threads(threads)
  for (long r = 0; r < rows; ++r) {
    double* row = acc.data.data() + r * x.size();
    for (std::size_t c = 0; c < x.size(); ++c) row[c] += g.data[r] * x.data[c];
  }
}

}  // namespace herman
