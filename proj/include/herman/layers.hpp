#ifndef HERMAN_LAYERS_HPP
#define HERMAN_LAYERS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "herman/tape.hpp"
#include "herman/tensor.hpp"

namespace herman {

// Parameter creation. Matrices draw from uniform(-1/sqrt(fan_in),
// +1/sqrt(fan_in)) with fan_in = cols, keyed by (seed, name) so the values
// do not depend on registration order; biases start at zero.
void add_matrix_param(ParamStore& store, const std::string& name, std::size_t rows,
                      std::size_t cols, std::uint64_t seed);
void add_vector_param(ParamStore& store, const std::string& name, std::size_t n,
                      std::uint64_t seed);
void add_bias_param(ParamStore& store, const std::string& name, std::size_t n);

// LSTM with fused gates: <prefix>.W is [4h x (input+h)] in gate order
// input/forget/candidate/output, <prefix>.b is [4h] with the forget slice
// at +1 so memory persists early in training.
void add_lstm_params(ParamStore& store, const std::string& prefix, std::size_t input,
                     std::size_t hidden, std::uint64_t seed);

struct LstmState {
  Tape::NodeId h;
  Tape::NodeId c;
};

LstmState lstm_step(Tape& t, const std::string& prefix, Tape::NodeId x, const LstmState& prev);

// Forward and backward passes over xs with zero initial state; output per
// position is [forward_h ; backward_h]. Parameters live under <prefix>.fw
// and <prefix>.bw.
void add_bilstm_params(ParamStore& store, const std::string& prefix, std::size_t input,
                       std::size_t hidden, std::uint64_t seed);
std::vector<Tape::NodeId> bilstm(Tape& t, const std::string& prefix,
                                 const std::vector<Tape::NodeId>& xs);

// Additive attention: score(q, k_t) = v . tanh(Wq q + Wk k_t). Key
// projections are computed once per sequence and shared by every query.
void add_attention_params(ParamStore& store, const std::string& prefix, std::size_t att,
                          std::size_t query_dim, std::size_t key_dim, std::uint64_t seed);
Tape::NodeId project_keys(Tape& t, const std::string& prefix,
                          const std::vector<Tape::NodeId>& keys);  // rows = Wk k_t

struct Attended {
  Tape::NodeId context;  // sum_t weight_t k_t
  Tape::NodeId weights;  // softmax over scores, length T
};

Attended attend(Tape& t, const std::string& prefix, Tape::NodeId query, Tape::NodeId keys_matrix,
                Tape::NodeId projected_keys);

// Two-layer scorer: logit = w2 . tanh(W1 x + b1) + b2.
void add_mlp_params(ParamStore& store, const std::string& prefix, std::size_t input,
                    std::size_t hidden, std::uint64_t seed);
Tape::NodeId mlp_logit(Tape& t, const std::string& prefix, Tape::NodeId x);

}  // namespace herman

#endif
