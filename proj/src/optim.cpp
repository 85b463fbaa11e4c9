#include "herman/optim.hpp"

#include <cmath>
#include <cstddef>

#include "herman/errors.hpp"
#include "herman/parallel.hpp"

namespace herman {

void Adam::step(ParamStore& store) {
  for (const auto& [name, g] : store.grads) {
    for (double x : g.data) {
      if (!std::isfinite(x)) throw NumericError("non-finite gradient in " + name);
    }
  }

  ++t_;
  double corr1 = 1.0 - std::pow(cfg_.beta1, static_cast<double>(t_));
  double corr2 = 1.0 - std::pow(cfg_.beta2, static_cast<double>(t_));

  for (auto& [name, p] : store.params) {
    const Tensor& g = store.grads.at(name);
    Tensor& m = m_.try_emplace(name, Tensor::zeros(p.shape)).first->second;
    Tensor& v = v_.try_emplace(name, Tensor::zeros(p.shape)).first->second;

    std::size_t n = p.size();
    int threads = threads_for(n, 16);
#pragma omp parallel for schedule(static) num_threads(threads)
    for (std::size_t i = 0; i < n; ++i) {
      double gi = g.data[i];
      m.data[i] = cfg_.beta1 * m.data[i] + (1.0 - cfg_.beta1) * gi;
      v.data[i] = cfg_.beta2 * v.data[i] + (1.0 - cfg_.beta2) * gi * gi;
      double m_hat = m.data[i] / corr1;
      double v_hat = v.data[i] / corr2;
      p.data[i] -= cfg_.lr * m_hat / (std::sqrt(v_hat) + cfg_.eps);
    }
  }
}

double clip_global_norm(ParamStore& store, double max_norm) {
  double sq = 0.0;
  for (const auto& [name, g] : store.grads) {
    for (double x : g.data) sq += x * x;
  }
  double norm = std::sqrt(sq);
  if (!std::isfinite(norm)) throw NumericError("non-finite gradient norm");
  if (norm > max_norm && norm > 0.0) {
    double s = max_norm / norm;
    for (auto& [name, g] : store.grads) g.scale_in_place(s);
  }
  return norm;
}

}  // namespace herman
