#ifndef HERMAN_TENSOR_HPP
#define HERMAN_TENSOR_HPP

#include <cstddef>
#include <map>
#include <string>
#include <vector>

namespace herman {

// Dense row-major tensor of 64-bit floats. Rank 1 and 2 cover every shape the
// model uses; gradients live in separate tensors of the same shape.
struct Tensor {
  std::vector<std::size_t> shape;
  std::vector<double> data;

  Tensor() = default;

  static Tensor zeros(std::vector<std::size_t> shape);
  static Tensor vec(std::size_t n) { return zeros({n}); }
  static Tensor mat(std::size_t rows, std::size_t cols) { return zeros({rows, cols}); }
  static Tensor scalar(double v);

  std::size_t size() const { return data.size(); }
  std::size_t rank() const { return shape.size(); }
  std::size_t rows() const { return shape.at(0); }
  std::size_t cols() const { return shape.at(1); }
  bool same_shape(const Tensor& other) const { return shape == other.shape; }

  double& operator()(std::size_t i) { return data[i]; }
  double operator()(std::size_t i) const { return data[i]; }
  double& operator()(std::size_t i, std::size_t j) { return data[i * shape[1] + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data[i * shape[1] + j]; }

  void fill(double v);
  void add_in_place(const Tensor& other);  // shape-checked +=
  void scale_in_place(double s);
};

// Named parameters with matching gradient buffers. std::map keeps iteration
// order stable, which the optimizer and checkpoint writer rely on.
struct ParamStore {
  std::map<std::string, Tensor> params;
  std::map<std::string, Tensor> grads;

  Tensor& add(const std::string& name, Tensor init);  // throws on duplicates
  Tensor& get(const std::string& name);
  const Tensor& get(const std::string& name) const;
  Tensor& grad(const std::string& name);
  bool has(const std::string& name) const { return params.count(name) > 0; }
  void zero_grads();
  std::size_t total_size() const;
};

}  // namespace herman

#endif
