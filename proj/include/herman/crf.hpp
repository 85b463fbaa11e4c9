#ifndef HERMAN_CRF_HPP
#define HERMAN_CRF_HPP

#include <cstdint>
#include <vector>

#include "herman/labels.hpp"
#include "herman/tape.hpp"
#include "herman/tensor.hpp"

namespace herman {

// Linear-chain CRF over the tag labels. A path Y scores
//   start(y_1) + sum_j emission(j, y_j) + sum_j transition(y_{j-1}, y_j) + end(y_n)
// and the partition function sums exp(score) over all label sequences.
//
// Training quantities (log partition, nll, marginals, nll gradient) use the
// unconstrained lattice. Decoding and the constrained marginals additionally
// enforce tagging-scheme structure: a sequence may not open with an inside
// tag, an inside tag must extend a span of its own kind, and the span mask m
// pins position j to O when m_j = 0 and to a non-O tag when m_j = 1.

bool tag_start_allowed(TagLabel to);
bool tag_transition_allowed(TagLabel from, TagLabel to);

// emissions is [n x L]; start and end are [L]; trans is [L x L] indexed
// (from, to). n must be at least 1.
double crf_score(const Tensor& emissions, const Tensor& start, const Tensor& trans,
                 const Tensor& end, const std::vector<TagLabel>& y);
double crf_log_partition(const Tensor& emissions, const Tensor& start, const Tensor& trans,
                         const Tensor& end);
double crf_nll(const Tensor& emissions, const Tensor& start, const Tensor& trans,
               const Tensor& end, const std::vector<TagLabel>& y);

// Per-position label posteriors [n x L] over the unconstrained lattice.
Tensor crf_marginals(const Tensor& emissions, const Tensor& start, const Tensor& trans,
                     const Tensor& end);

// d nll / d emissions = marginals - onehot(y), also [n x L].
Tensor crf_nll_grad(const Tensor& emissions, const Tensor& start, const Tensor& trans,
                    const Tensor& end, const std::vector<TagLabel>& y);

// Posteriors restricted to sequences that satisfy the tagging scheme and the
// span mask; rows still sum to 1 and masked-out labels get probability 0.
Tensor crf_constrained_marginals(const Tensor& emissions, const Tensor& start,
                                 const Tensor& trans, const Tensor& end,
                                 const std::vector<std::uint8_t>& m);

// Best constrained sequence; ties break toward the smaller label value.
std::vector<TagLabel> crf_viterbi(const Tensor& emissions, const Tensor& start,
                                  const Tensor& trans, const Tensor& end,
                                  const std::vector<std::uint8_t>& m);

// Differentiable losses for training. emissions[j] is a [L] node for
// position j; the start/trans/end nodes wrap the corresponding parameters.
// Sequence mode returns log Z - score(y); token mode returns
// -sum_j log p(y_j) with p from the unconstrained marginals.
Tape::NodeId crf_nll_on_tape(Tape& t, const std::vector<Tape::NodeId>& emissions,
                             Tape::NodeId start, Tape::NodeId trans, Tape::NodeId end,
                             const std::vector<TagLabel>& y);
Tape::NodeId crf_token_nll_on_tape(Tape& t, const std::vector<Tape::NodeId>& emissions,
                                   Tape::NodeId start, Tape::NodeId trans, Tape::NodeId end,
                                   const std::vector<TagLabel>& y);

}  // namespace herman

#endif
