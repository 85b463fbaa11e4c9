#ifndef HERMAN_METRICS_HPP
#define HERMAN_METRICS_HPP

#include <array>
#include <cstddef>
#include <vector>

#include "herman/labels.hpp"
#include "herman/quantity.hpp"
#include "herman/token.hpp"

namespace herman {

struct RougeScore {
  double recall = 0.0;
  double precision = 0.0;
  double f1 = 0.0;
};

// Clipped n-gram overlap (n = 1 or 2). Empty denominators score 0.
RougeScore rouge_n(const TokenSeq& candidate, const TokenSeq& reference, int n);

// Longest common subsequence variant.
RougeScore rouge_l(const TokenSeq& candidate, const TokenSeq& reference);

struct LabelPRF {
  double precision = 0.0;  // percentages in [0, 100]
  double recall = 0.0;
  double f1 = 0.0;
};

struct TagReport {
  std::array<LabelPRF, kNumTagLabels> per_label;
  double z_accuracy = 0.0;  // percent
  double z_f1 = 0.0;        // percent, positive class VERIFIED
};

// Token-level per-label precision/recall/F1 plus document-level z metrics.
// Sequences are compared position by position and must align pairwise.
TagReport tag_report(const std::vector<std::vector<TagLabel>>& pred,
                     const std::vector<std::vector<TagLabel>>& gold,
                     const std::vector<ZLabel>& pred_z, const std::vector<ZLabel>& gold_z);

// Mean number of quantity spans per summary; empty input → 0.
double avg_q(const std::vector<TokenSeq>& summaries);

// Per type, how many summaries contain at least one span of that type.
std::array<std::size_t, kNumQuantityTypes> type_counts(const std::vector<TokenSeq>& summaries);

}  // namespace herman

#endif
