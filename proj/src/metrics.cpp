#include "herman/metrics.hpp"

#include <algorithm>
#include <map>
#include <string>

#include "herman/errors.hpp"

namespace herman {
namespace {

double f1_of(double precision, double recall) {
  return precision + recall > 0.0 ? 2.0 * precision * recall / (precision + recall) : 0.0;
}

// n-gram multiset, keyed by the tokens joined with an unprintable separator.
std::map<std::string, std::size_t> ngram_counts(const TokenSeq& tokens, int n) {
  std::map<std::string, std::size_t> counts;
  if (tokens.size() < static_cast<std::size_t>(n)) return counts;
  for (std::size_t i = 0; i + n <= tokens.size(); ++i) {
    std::string key = tokens[i].text;
    for (int k = 1; k < n; ++k) {
      key += '\x1f';
      key += tokens[i + k].text;
    }
    ++counts[key];
  }
  return counts;
}

}  // namespace

RougeScore rouge_n(const TokenSeq& candidate, const TokenSeq& reference, int n) {
  if (n != 1 && n != 2) throw ConfigError("rouge_n: n must be 1 or 2");
  std::map<std::string, std::size_t> cand = ngram_counts(candidate, n);
  std::map<std::string, std::size_t> ref = ngram_counts(reference, n);

  std::size_t cand_total = 0, ref_total = 0, overlap = 0;
  for (const auto& [key, count] : cand) cand_total += count;
  for (const auto& [key, count] : ref) ref_total += count;
  for (const auto& [key, count] : cand) {
    auto it = ref.find(key);
    if (it != ref.end()) overlap += std::min(count, it->second);
  }

  RougeScore score;
  score.recall = ref_total > 0 ? static_cast<double>(overlap) / static_cast<double>(ref_total) : 0.0;
  score.precision =
      cand_total > 0 ? static_cast<double>(overlap) / static_cast<double>(cand_total) : 0.0;
  score.f1 = f1_of(score.precision, score.recall);
  return score;
}

RougeScore rouge_l(const TokenSeq& candidate, const TokenSeq& reference) {
  std::size_t n = candidate.size(), m = reference.size();
  RougeScore score;
  if (n == 0 || m == 0) return score;

  // Rolling-row LCS table.
  std::vector<std::size_t> prev(m + 1, 0), cur(m + 1, 0);
  for (std::size_t i = 1; i <= n; ++i) {
    for (std::size_t j = 1; j <= m; ++j) {
      cur[j] = candidate[i - 1].text == reference[j - 1].text
                   ? prev[j - 1] + 1
                   : std::max(prev[j], cur[j - 1]);
    }
    prev.swap(cur);
  }
  double lcs = static_cast<double>(prev[m]);
  score.recall = lcs / static_cast<double>(m);
  score.precision = lcs / static_cast<double>(n);
  score.f1 = f1_of(score.precision, score.recall);
  return score;
}

TagReport tag_report(const std::vector<std::vector<TagLabel>>& pred,
                     const std::vector<std::vector<TagLabel>>& gold,
                     const std::vector<ZLabel>& pred_z, const std::vector<ZLabel>& gold_z) {
  if (pred.size() != gold.size() || pred_z.size() != gold_z.size() || pred.size() != pred_z.size())
    throw DataError("tag_report: prediction and gold lists must align");

  std::array<std::size_t, kNumTagLabels> tp{}, pred_count{}, gold_count{};
  for (std::size_t i = 0; i < pred.size(); ++i) {
    if (pred[i].size() != gold[i].size())
      throw DataError("tag_report: sequence length mismatch at record " + std::to_string(i));
    for (std::size_t j = 0; j < pred[i].size(); ++j) {
      std::size_t p = static_cast<std::size_t>(pred[i][j]);
      std::size_t g = static_cast<std::size_t>(gold[i][j]);
      ++pred_count[p];
      ++gold_count[g];
      if (p == g) ++tp[p];
    }
  }

  TagReport report;
  for (std::size_t l = 0; l < kNumTagLabels; ++l) {
    LabelPRF& row = report.per_label[l];
    row.precision =
        pred_count[l] > 0 ? 100.0 * static_cast<double>(tp[l]) / static_cast<double>(pred_count[l]) : 0.0;
    row.recall =
        gold_count[l] > 0 ? 100.0 * static_cast<double>(tp[l]) / static_cast<double>(gold_count[l]) : 0.0;
    row.f1 = f1_of(row.precision, row.recall);
  }

  std::size_t correct = 0, z_tp = 0, z_fp = 0, z_fn = 0;
  for (std::size_t i = 0; i < pred_z.size(); ++i) {
    if (pred_z[i] == gold_z[i]) ++correct;
    bool pred_pos = pred_z[i] == ZLabel::Verified;
    bool gold_pos = gold_z[i] == ZLabel::Verified;
    if (pred_pos && gold_pos) ++z_tp;
    if (pred_pos && !gold_pos) ++z_fp;
    if (!pred_pos && gold_pos) ++z_fn;
  }
  report.z_accuracy =
      pred_z.empty() ? 0.0 : 100.0 * static_cast<double>(correct) / static_cast<double>(pred_z.size());
  double denom = static_cast<double>(2 * z_tp + z_fp + z_fn);
  report.z_f1 = denom > 0.0 ? 100.0 * 2.0 * static_cast<double>(z_tp) / denom : 0.0;
  return report;
}

double avg_q(const std::vector<TokenSeq>& summaries) {
  if (summaries.empty()) return 0.0;
  std::size_t total = 0;
  for (const TokenSeq& s : summaries) total += tag_quantities(s).size();
  return static_cast<double>(total) / static_cast<double>(summaries.size());
}

std::array<std::size_t, kNumQuantityTypes> type_counts(const std::vector<TokenSeq>& summaries) {
  std::array<std::size_t, kNumQuantityTypes> counts{};
  for (const TokenSeq& s : summaries) {
    std::array<bool, kNumQuantityTypes> seen{};
    for (const QuantitySpan& span : tag_quantities(s)) seen[static_cast<std::size_t>(span.qtype)] = true;
    for (std::size_t i = 0; i < kNumQuantityTypes; ++i)
      if (seen[i]) ++counts[i];
  }
  return counts;
}

}  // namespace herman
