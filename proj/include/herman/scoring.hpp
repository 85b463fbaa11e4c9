#ifndef HERMAN_SCORING_HPP
#define HERMAN_SCORING_HPP

#include <cstdint>
#include <vector>

#include "herman/model.hpp"
#include "herman/rerank.hpp"

namespace herman {

// The global verification score is the z probability itself.
double score_global(const HermanOutput& output);

// Mean over quantity positions (m_j = 1) of the verified-minus-unverified
// marginal mass [p(B-V) + p(I-V)] - [p(B-U) + p(I-U)]. A summary with no
// quantity tokens scores 0: neutral between verified and hallucinated.
double score_local(const HermanOutput& output, const std::vector<std::uint8_t>& m);

// Runs verification on every candidate against the beam's article and
// returns the per-candidate scores for a model-backed scorer.
std::vector<double> herman_scores(const HermanModel& model, const Beam& beam, Scorer scorer);

// Full dispatch across the four scorers. `model` may be null for the two
// baselines; the model-backed scorers require it.
RankedBeam rerank_with(const HermanModel* model, Beam beam, Scorer scorer);

}  // namespace herman

#endif
