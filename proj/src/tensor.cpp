#include "herman/tensor.hpp"

#include "herman/errors.hpp"

namespace herman {

Tensor Tensor::zeros(std::vector<std::size_t> shape) {
  Tensor t;
  std::size_t n = 1;
  for (std::size_t d : shape) n *= d;
  t.shape = std::move(shape);
  t.data.assign(n, 0.0);
  return t;
}

Tensor Tensor::scalar(double v) {
  Tensor t = zeros({1});
  t.data[0] = v;
  return t;
}

void Tensor::fill(double v) {
  for (double& x : data) x = v;
}

void Tensor::add_in_place(const Tensor& other) {
  if (!same_shape(other)) throw NumericError("tensor shape mismatch in accumulate");
  for (std::size_t i = 0; i < data.size(); ++i) data[i] += other.data[i];
}

void Tensor::scale_in_place(double s) {
  for (double& x : data) x *= s;
}

Tensor& ParamStore::add(const std::string& name, Tensor init) {
  if (params.count(name)) throw ConfigError("duplicate parameter name: " + name);
  grads[name] = Tensor::zeros(init.shape);
  return params[name] = std::move(init);
}

Tensor& ParamStore::get(const std::string& name) {
  auto it = params.find(name);
  if (it == params.end()) throw ConfigError("unknown parameter: " + name);
  return it->second;
}

const Tensor& ParamStore::get(const std::string& name) const {
  auto it = params.find(name);
  if (it == params.end()) throw ConfigError("unknown parameter: " + name);
  return it->second;
}

Tensor& ParamStore::grad(const std::string& name) {
  auto it = grads.find(name);
  if (it == grads.end()) throw ConfigError("unknown parameter: " + name);
  return it->second;
}

void ParamStore::zero_grads() {
  for (auto& [name, g] : grads) g.fill(0.0);
}

std::size_t ParamStore::total_size() const {
  std::size_t n = 0;
  for (const auto& [name, p] : params) n += p.size();
  return n;
}

}  // namespace herman
