#include "herman/tape.hpp"

#include <cmath>

#include "herman/errors.hpp"
#include "herman/kernels.hpp"

namespace herman {

Tape::NodeId Tape::push(Tensor value) {
  Node n;
  n.owned = std::move(value);
  n.value = &n.owned;
  n.grad = Tensor::zeros(n.owned.shape);
  nodes_.push_back(std::move(n));
  // owned moved into the vector; repoint at its final address
  nodes_.back().value = &nodes_.back().owned;
  return nodes_.size() - 1;
}

Tape::NodeId Tape::input(Tensor value) { return push(std::move(value)); }

Tape::NodeId Tape::param(const std::string& name) {
  auto it = param_cache_.find(name);
  if (it != param_cache_.end()) return it->second;
  const Tensor& p = store_->get(name);
  Node n;
  n.value = &p;
  n.grad = Tensor::zeros(p.shape);
  n.param_kind = 1;
  n.param_name = name;
  nodes_.push_back(std::move(n));
  NodeId id = nodes_.size() - 1;
  param_cache_[name] = id;
  return id;
}

Tape::NodeId Tape::param_row(const std::string& name, std::size_t row) {
  auto key = std::make_pair(name, row);
  auto it = row_cache_.find(key);
  if (it != row_cache_.end()) return it->second;
  const Tensor& p = store_->get(name);
  if (p.rank() != 2 || row >= p.rows()) throw NumericError("param_row out of range: " + name);
  Node n;
  Tensor v = Tensor::vec(p.cols());
  for (std::size_t c = 0; c < p.cols(); ++c) v(c) = p(row, c);
  n.owned = std::move(v);
  n.grad = Tensor::zeros({p.cols()});
  n.param_kind = 2;
  n.param_name = name;
  n.row = row;
  nodes_.push_back(std::move(n));
  nodes_.back().value = &nodes_.back().owned;
  NodeId id = nodes_.size() - 1;
  row_cache_[key] = id;
  return id;
}

void Tape::check_vec(NodeId id, const char* op) const {
  if (value(id).rank() != 1) throw NumericError(std::string(op) + ": vector operand required");
}

void Tape::check_mat(NodeId id, const char* op) const {
  if (value(id).rank() != 2) throw NumericError(std::string(op) + ": matrix operand required");
}

void Tape::check_scalar(NodeId id, const char* op) const {
  if (value(id).size() != 1) throw NumericError(std::string(op) + ": scalar operand required");
}

Tape::NodeId Tape::add(NodeId a, NodeId b) {
  if (!value(a).same_shape(value(b))) throw NumericError("add: shape mismatch");
  Tensor out = *nodes_[a].value;
  out.add_in_place(value(b));
  NodeId id = push(std::move(out));
  nodes_[id].back = [this, id, a, b] {
    grad(a).add_in_place(grad(id));
    grad(b).add_in_place(grad(id));
  };
  return id;
}

Tape::NodeId Tape::sub(NodeId a, NodeId b) {
  if (!value(a).same_shape(value(b))) throw NumericError("sub: shape mismatch");
  Tensor out = *nodes_[a].value;
  for (std::size_t i = 0; i < out.size(); ++i) out.data[i] -= value(b).data[i];
  NodeId id = push(std::move(out));
  nodes_[id].back = [this, id, a, b] {
    grad(a).add_in_place(grad(id));
    const Tensor& g = grad(id);
    for (std::size_t i = 0; i < g.size(); ++i) grad(b).data[i] -= g.data[i];
  };
  return id;
}

Tape::NodeId Tape::mul(NodeId a, NodeId b) {
  if (!value(a).same_shape(value(b))) throw NumericError("mul: shape mismatch");
  Tensor out = Tensor::zeros(value(a).shape);
  for (std::size_t i = 0; i < out.size(); ++i) out.data[i] = value(a).data[i] * value(b).data[i];
  NodeId id = push(std::move(out));
  nodes_[id].back = [this, id, a, b] {
    const Tensor& g = grad(id);
    for (std::size_t i = 0; i < g.size(); ++i) {
      grad(a).data[i] += g.data[i] * value(b).data[i];
      grad(b).data[i] += g.data[i] * value(a).data[i];
    }
  };
  return id;
}

Tape::NodeId Tape::scale(NodeId a, double s) {
  Tensor out = *nodes_[a].value;
  out.scale_in_place(s);
  NodeId id = push(std::move(out));
  nodes_[id].back = [this, id, a, s] {
    const Tensor& g = grad(id);
    for (std::size_t i = 0; i < g.size(); ++i) grad(a).data[i] += s * g.data[i];
  };
  return id;
}

Tape::NodeId Tape::concat(const std::vector<NodeId>& parts) {
  if (parts.empty()) throw NumericError("concat: no operands");
  std::size_t total = 0;
  for (NodeId p : parts) {
    check_vec(p, "concat");
    total += value(p).size();
  }
  Tensor out = Tensor::vec(total);
  std::size_t at = 0;
  for (NodeId p : parts)
    for (std::size_t i = 0; i < value(p).size(); ++i) out(at++) = value(p)(i);
  NodeId id = push(std::move(out));
  nodes_[id].back = [this, id, parts] {
    const Tensor& g = grad(id);
    std::size_t at = 0;
    for (NodeId p : parts)
      for (std::size_t i = 0; i < value(p).size(); ++i) grad(p).data[i] += g.data[at++];
  };
  return id;
}

Tape::NodeId Tape::slice(NodeId a, std::size_t lo, std::size_t hi) {
  check_vec(a, "slice");
  if (lo >= hi || hi > value(a).size()) throw NumericError("slice: bad range");
  Tensor out = Tensor::vec(hi - lo);
  for (std::size_t i = lo; i < hi; ++i) out(i - lo) = value(a)(i);
  NodeId id = push(std::move(out));
  nodes_[id].back = [this, id, a, lo] {
    const Tensor& g = grad(id);
    for (std::size_t i = 0; i < g.size(); ++i) grad(a).data[lo + i] += g.data[i];
  };
  return id;
}

Tape::NodeId Tape::stack_rows(const std::vector<NodeId>& rows) {
  if (rows.empty()) throw NumericError("stack_rows: no operands");
  std::size_t d = value(rows[0]).size();
  for (NodeId r : rows) {
    check_vec(r, "stack_rows");
    if (value(r).size() != d) throw NumericError("stack_rows: ragged rows");
  }
  Tensor out = Tensor::mat(rows.size(), d);
  for (std::size_t r = 0; r < rows.size(); ++r)
    for (std::size_t c = 0; c < d; ++c) out(r, c) = value(rows[r])(c);
  NodeId id = push(std::move(out));
  nodes_[id].back = [this, id, rows, d] {
    const Tensor& g = grad(id);
    for (std::size_t r = 0; r < rows.size(); ++r)
      for (std::size_t c = 0; c < d; ++c) grad(rows[r]).data[c] += g.data[r * d + c];
  };
  return id;
}

Tape::NodeId Tape::vec_from_scalars(const std::vector<NodeId>& xs) {
  if (xs.empty()) throw NumericError("vec_from_scalars: no operands");
  Tensor out = Tensor::vec(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    check_scalar(xs[i], "vec_from_scalars");
    out(i) = value(xs[i])(0);
  }
  NodeId id = push(std::move(out));
  nodes_[id].back = [this, id, xs] {
    const Tensor& g = grad(id);
    for (std::size_t i = 0; i < xs.size(); ++i) grad(xs[i]).data[0] += g.data[i];
  };
  return id;
}

Tape::NodeId Tape::average(const std::vector<NodeId>& vecs) {
  if (vecs.empty()) throw NumericError("average: no operands");
  Tensor out = Tensor::zeros(value(vecs[0]).shape);
  for (NodeId v : vecs) {
    if (!value(v).same_shape(out)) throw NumericError("average: shape mismatch");
    out.add_in_place(value(v));
  }
  double inv = 1.0 / static_cast<double>(vecs.size());
  out.scale_in_place(inv);
  NodeId id = push(std::move(out));
  nodes_[id].back = [this, id, vecs, inv] {
    const Tensor& g = grad(id);
    for (NodeId v : vecs)
      for (std::size_t i = 0; i < g.size(); ++i) grad(v).data[i] += inv * g.data[i];
  };
  return id;
}

Tape::NodeId Tape::sum_scalars(const std::vector<NodeId>& xs) {
  if (xs.empty()) throw NumericError("sum_scalars: no operands");
  double total = 0.0;
  for (NodeId x : xs) {
    check_scalar(x, "sum_scalars");
    total += value(x)(0);
  }
  NodeId id = push(Tensor::scalar(total));
  nodes_[id].back = [this, id, xs] {
    double g = grad(id)(0);
    for (NodeId x : xs) grad(x).data[0] += g;
  };
  return id;
}

Tape::NodeId Tape::matvec(NodeId W, NodeId x) {
  check_mat(W, "matvec");
  check_vec(x, "matvec");
  Tensor out = Tensor::vec(value(W).rows());
  herman::matvec(value(W), value(x), out);
  NodeId id = push(std::move(out));
  nodes_[id].back = [this, id, W, x] {
    const Tensor& g = grad(id);
    herman::outer_add(g, value(x), grad(W));
    Tensor gx = Tensor::vec(value(x).size());
    herman::matvec_t(value(W), g, gx);
    grad(x).add_in_place(gx);
  };
  return id;
}

Tape::NodeId Tape::matvec_t(NodeId M, NodeId v) {
  check_mat(M, "matvec_t");
  check_vec(v, "matvec_t");
  Tensor out = Tensor::vec(value(M).cols());
  herman::matvec_t(value(M), value(v), out);
  NodeId id = push(std::move(out));
  nodes_[id].back = [this, id, M, v] {
    const Tensor& g = grad(id);
    herman::outer_add(value(v), g, grad(M));
    Tensor gv = Tensor::vec(value(v).size());
    herman::matvec(value(M), g, gv);
    grad(v).add_in_place(gv);
  };
  return id;
}

Tape::NodeId Tape::dot(NodeId a, NodeId b) {
  check_vec(a, "dot");
  if (!value(a).same_shape(value(b))) throw NumericError("dot: shape mismatch");
  double acc = 0.0;
  for (std::size_t i = 0; i < value(a).size(); ++i) acc += value(a)(i) * value(b)(i);
  NodeId id = push(Tensor::scalar(acc));
  nodes_[id].back = [this, id, a, b] {
    double g = grad(id)(0);
    for (std::size_t i = 0; i < value(a).size(); ++i) {
      grad(a).data[i] += g * value(b)(i);
      grad(b).data[i] += g * value(a)(i);
    }
  };
  return id;
}

Tape::NodeId Tape::index(NodeId a, std::size_t i) {
  check_vec(a, "index");
  if (i >= value(a).size()) throw NumericError("index: out of range");
  NodeId id = push(Tensor::scalar(value(a)(i)));
  nodes_[id].back = [this, id, a, i] { grad(a).data[i] += grad(id)(0); };
  return id;
}

Tape::NodeId Tape::index2(NodeId M, std::size_t i, std::size_t j) {
  check_mat(M, "index2");
  if (i >= value(M).rows() || j >= value(M).cols()) throw NumericError("index2: out of range");
  NodeId id = push(Tensor::scalar(value(M)(i, j)));
  std::size_t flat = i * value(M).cols() + j;
  nodes_[id].back = [this, id, M, flat] { grad(M).data[flat] += grad(id)(0); };
  return id;
}

Tape::NodeId Tape::col(NodeId M, std::size_t j) {
  check_mat(M, "col");
  if (j >= value(M).cols()) throw NumericError("col: out of range");
  std::size_t rows = value(M).rows(), cols = value(M).cols();
  Tensor out = Tensor::vec(rows);
  for (std::size_t r = 0; r < rows; ++r) out(r) = value(M)(r, j);
  NodeId id = push(std::move(out));
  nodes_[id].back = [this, id, M, j, rows, cols] {
    const Tensor& g = grad(id);
    for (std::size_t r = 0; r < rows; ++r) grad(M).data[r * cols + j] += g.data[r];
  };
  return id;
}

Tape::NodeId Tape::row(NodeId M, std::size_t i) {
  check_mat(M, "row");
  if (i >= value(M).rows()) throw NumericError("row: out of range");
  std::size_t cols = value(M).cols();
  Tensor out = Tensor::vec(cols);
  for (std::size_t c = 0; c < cols; ++c) out(c) = value(M)(i, c);
  NodeId id = push(std::move(out));
  nodes_[id].back = [this, id, M, i, cols] {
    const Tensor& g = grad(id);
    for (std::size_t c = 0; c < cols; ++c) grad(M).data[i * cols + c] += g.data[c];
  };
  return id;
}

Tape::NodeId Tape::tanh_(NodeId a) {
  Tensor out = Tensor::zeros(value(a).shape);
  for (std::size_t i = 0; i < out.size(); ++i) out.data[i] = std::tanh(value(a).data[i]);
  NodeId id = push(std::move(out));
  nodes_[id].back = [this, id, a] {
    const Tensor& g = grad(id);
    const Tensor& y = value(id);
    for (std::size_t i = 0; i < g.size(); ++i)
      grad(a).data[i] += g.data[i] * (1.0 - y.data[i] * y.data[i]);
  };
  return id;
}

Tape::NodeId Tape::sigmoid_(NodeId a) {
  Tensor out = Tensor::zeros(value(a).shape);
  for (std::size_t i = 0; i < out.size(); ++i) {
    double x = value(a).data[i];
    out.data[i] = x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
  }
  NodeId id = push(std::move(out));
  nodes_[id].back = [this, id, a] {
    const Tensor& g = grad(id);
    const Tensor& y = value(id);
    for (std::size_t i = 0; i < g.size(); ++i)
      grad(a).data[i] += g.data[i] * y.data[i] * (1.0 - y.data[i]);
  };
  return id;
}

Tape::NodeId Tape::softmax(NodeId a) {
  check_vec(a, "softmax");
  const Tensor& x = value(a);
  double mx = x(0);
  for (std::size_t i = 1; i < x.size(); ++i) mx = std::max(mx, x(i));
  Tensor out = Tensor::vec(x.size());
  double denom = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) denom += out(i) = std::exp(x(i) - mx);
  for (std::size_t i = 0; i < x.size(); ++i) out(i) /= denom;
  NodeId id = push(std::move(out));
  nodes_[id].back = [this, id, a] {
    const Tensor& g = grad(id);
    const Tensor& y = value(id);
    double gy = 0.0;
    for (std::size_t i = 0; i < g.size(); ++i) gy += g.data[i] * y.data[i];
    for (std::size_t i = 0; i < g.size(); ++i)
      grad(a).data[i] += y.data[i] * (g.data[i] - gy);
  };
  return id;
}

Tape::NodeId Tape::logsumexp(NodeId a) {
  check_vec(a, "logsumexp");
  const Tensor& x = value(a);
  double mx = x(0);
  for (std::size_t i = 1; i < x.size(); ++i) mx = std::max(mx, x(i));
  Tensor soft = Tensor::vec(x.size());
  double denom = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) denom += soft(i) = std::exp(x(i) - mx);
  for (std::size_t i = 0; i < x.size(); ++i) soft(i) /= denom;
  NodeId id = push(Tensor::scalar(mx + std::log(denom)));
  nodes_[id].aux = std::move(soft);
  nodes_[id].back = [this, id, a] {
    double g = grad(id)(0);
    const Tensor& soft = nodes_[id].aux;
    for (std::size_t i = 0; i < soft.size(); ++i) grad(a).data[i] += g * soft.data[i];
  };
  return id;
}

Tape::NodeId Tape::bce_with_logit(NodeId logit, double target) {
  check_scalar(logit, "bce_with_logit");
  double x = value(logit)(0);
  // softplus(x) - t*x, computed without overflow
  double softplus = std::max(x, 0.0) + std::log1p(std::exp(-std::abs(x)));
  NodeId id = push(Tensor::scalar(softplus - target * x));
  nodes_[id].back = [this, id, logit, target, x] {
    double sig = x >= 0 ? 1.0 / (1.0 + std::exp(-x)) : std::exp(x) / (1.0 + std::exp(x));
    grad(logit).data[0] += grad(id)(0) * (sig - target);
  };
  return id;
}

Tape::NodeId Tape::attention_scores(NodeId P, NodeId Wq, NodeId q, NodeId v) {
  check_mat(P, "attention_scores");
  check_mat(Wq, "attention_scores");
  check_vec(q, "attention_scores");
  check_vec(v, "attention_scores");
  std::size_t T = value(P).rows(), att = value(P).cols();
  if (value(Wq).rows() != att || value(Wq).cols() != value(q).size() || value(v).size() != att)
    throw NumericError("attention_scores: shape mismatch");

  Tensor u = Tensor::vec(att);
  herman::matvec(value(Wq), value(q), u);
  Tensor w = Tensor::mat(T, att);  // tanh activations, kept for backward
  Tensor out = Tensor::vec(T);
  for (std::size_t t = 0; t < T; ++t) {
    double s = 0.0;
    for (std::size_t k = 0; k < att; ++k) {
      double a = std::tanh(u(k) + value(P)(t, k));
      w(t, k) = a;
      s += value(v)(k) * a;
    }
    out(t) = s;
  }
  NodeId id = push(std::move(out));
  nodes_[id].aux = std::move(w);
  nodes_[id].back = [this, id, P, Wq, q, v, T, att] {
    const Tensor& g = grad(id);
    const Tensor& w = nodes_[id].aux;
    Tensor du = Tensor::vec(att);
    for (std::size_t t = 0; t < T; ++t) {
      double gt = g(t);
      for (std::size_t k = 0; k < att; ++k) {
        double a = w(t, k);
        grad(v).data[k] += gt * a;
        double d = gt * value(v)(k) * (1.0 - a * a);
        grad(P).data[t * att + k] += d;
        du(k) += d;
      }
    }
    herman::outer_add(du, value(q), grad(Wq));
    Tensor gq = Tensor::vec(value(q).size());
    herman::matvec_t(value(Wq), du, gq);
    grad(q).add_in_place(gq);
  };
  return id;
}

void Tape::backward(NodeId root) {
  check_scalar(root, "backward");
  grad(root).data[0] = 1.0;
  for (std::size_t i = nodes_.size(); i-- > 0;)
    if (nodes_[i].back) nodes_[i].back();
}

void Tape::accumulate_into(ParamStore& store, double s) const {
  for (const Node& n : nodes_) {
    if (n.param_kind == 0) continue;
    Tensor& sink = store.grad(n.param_name);
    if (n.param_kind == 1) {
      for (std::size_t i = 0; i < n.grad.size(); ++i) sink.data[i] += s * n.grad.data[i];
    } else {
      std::size_t cols = sink.cols();
      for (std::size_t c = 0; c < cols; ++c) sink.data[n.row * cols + c] += s * n.grad.data[c];
    }
  }
}

}  // namespace herman
