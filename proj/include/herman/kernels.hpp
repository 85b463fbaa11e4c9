#ifndef HERMAN_KERNELS_HPP
#define HERMAN_KERNELS_HPP

#include "herman/tensor.hpp"

namespace herman {

// Dense kernels behind the tape ops. Each has a serial reference
// implementation and an OpenMP version parallelized so that every output
// element is written by exactly one iteration with the same inner summation
// order as the serial code, making the two paths bit-identical. The
// unqualified entry points dispatch on problem size and the thread cap.
namespace serial {

void matvec(const Tensor& W, const Tensor& x, Tensor& out);    // out = W·x
void matvec_t(const Tensor& W, const Tensor& g, Tensor& out);  // out = Wᵀ·g
void outer_add(const Tensor& g, const Tensor& x, Tensor& acc);  // acc += g·xᵀ

}  // namespace serial

void matvec(const Tensor& W, const Tensor& x, Tensor& out);
void matvec_t(const Tensor& W, const Tensor& g, Tensor& out);
void outer_add(const Tensor& g, const Tensor& x, Tensor& acc);

}  // namespace herman

#endif
