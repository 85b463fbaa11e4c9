#ifndef HERMAN_TAPE_HPP
#define HERMAN_TAPE_HPP

#include <cstddef>
#include <deque>
#include <functional>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "herman/tensor.hpp"

namespace herman {

// Define-by-run reverse-mode differentiation. Every op records its value and
// a backward closure; backward() replays the closures newest-first. One tape
// per training instance; parameter leaves reference the ParamStore without
// copying, and their gradients are folded back with accumulate_into so batch
// accumulation order stays deterministic.
class Tape {
 public:
  using NodeId = std::size_t;

  explicit Tape(const ParamStore* store) : store_(store) {}
  Tape(const Tape&) = delete;
  Tape& operator=(const Tape&) = delete;

  // leaves
  NodeId input(Tensor value);                                  // constant
  NodeId param(const std::string& name);                       // whole tensor
  NodeId param_row(const std::string& name, std::size_t row);  // one matrix row

  const Tensor& value(NodeId id) const { return *nodes_[id].value; }
  const Tensor& grad_of(NodeId id) const { return nodes_[id].grad; }
  std::size_t size() const { return nodes_.size(); }

  // elementwise and structural ops (vectors unless noted)
  NodeId add(NodeId a, NodeId b);
  NodeId sub(NodeId a, NodeId b);
  NodeId mul(NodeId a, NodeId b);
  NodeId scale(NodeId a, double s);
  NodeId concat(const std::vector<NodeId>& parts);
  NodeId slice(NodeId a, std::size_t lo, std::size_t hi);
  NodeId stack_rows(const std::vector<NodeId>& rows);        // k vectors → k×d
  NodeId vec_from_scalars(const std::vector<NodeId>& xs);    // k scalars → [k]
  NodeId average(const std::vector<NodeId>& vecs);
  NodeId sum_scalars(const std::vector<NodeId>& xs);

  // linear algebra
  NodeId matvec(NodeId W, NodeId x);    // W·x
  NodeId matvec_t(NodeId M, NodeId v);  // Mᵀ·v
  NodeId dot(NodeId a, NodeId b);       // scalar
  NodeId index(NodeId a, std::size_t i);                   // scalar
  NodeId index2(NodeId M, std::size_t i, std::size_t j);   // scalar
  NodeId col(NodeId M, std::size_t j);                     // matrix column
  NodeId row(NodeId M, std::size_t i);                     // matrix row

  // nonlinearities and losses
  NodeId tanh_(NodeId a);
  NodeId sigmoid_(NodeId a);
  NodeId softmax(NodeId a);
  NodeId logsumexp(NodeId a);  // vector → scalar, max-shifted
  NodeId bce_with_logit(NodeId logit, double target);  // scalar → scalar

  // Fused additive-attention scores: s_t = v·tanh(Wq·q + P_t) over the rows
  // P_t of the projected keys. One node instead of three per article token.
  NodeId attention_scores(NodeId P, NodeId Wq, NodeId q, NodeId v);

  // Seeds d(root) = 1 and runs all backward closures newest-first.
  // root must be a scalar node.
  void backward(NodeId root);

  // Adds scale × (gradients of every parameter leaf) into store.grads.
  // Dense leaves add whole tensors; row leaves add single rows.
  void accumulate_into(ParamStore& store, double scale = 1.0) const;

 private:
  struct Node {
    Tensor owned;               // storage unless the leaf aliases a param
    const Tensor* value = nullptr;
    Tensor grad;
    Tensor aux;                 // op scratch reused by backward
    std::function<void()> back;
    int param_kind = 0;         // 0 none, 1 dense, 2 row
    std::string param_name;
    std::size_t row = 0;
  };

  NodeId push(Tensor value);
  Tensor& grad(NodeId id) { return nodes_[id].grad; }
  void check_vec(NodeId id, const char* op) const;
  void check_mat(NodeId id, const char* op) const;
  void check_scalar(NodeId id, const char* op) const;

  const ParamStore* store_;
  // deque: node references stay valid as the tape grows, so leaves may point
  // at their own `owned` tensor
  std::deque<Node> nodes_;
  std::map<std::string, NodeId> param_cache_;
  std::map<std::pair<std::string, std::size_t>, NodeId> row_cache_;
};

}  // namespace herman

#endif
