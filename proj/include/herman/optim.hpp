#ifndef HERMAN_OPTIM_HPP
#define HERMAN_OPTIM_HPP

#include <cstdint>
#include <map>
#include <string>

#include "herman/tensor.hpp"

namespace herman {

struct AdamConfig {
  double lr = 0.001;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
};

// Adam with bias-corrected moment estimates. Moment buffers live in the
// optimizer keyed by parameter name, so a fresh optimizer restarts the
// schedule; checkpoints deliberately exclude them.
class Adam {
 public:
  explicit Adam(const AdamConfig& cfg) : cfg_(cfg) {}

  // Applies one update from store.grads and leaves the gradients untouched;
  // callers zero them when starting the next accumulation. Throws
  // NumericError if any gradient element is not finite.
  void step(ParamStore& store);

  std::uint64_t steps_taken() const { return t_; }

 private:
  AdamConfig cfg_;
  std::map<std::string, Tensor> m_;
  std::map<std::string, Tensor> v_;
  std::uint64_t t_ = 0;
};

// Scales all gradients down so their joint L2 norm is at most max_norm.
// Returns the norm before clipping. Throws NumericError on a non-finite norm.
double clip_global_norm(ParamStore& store, double max_norm);

}  // namespace herman

#endif
