#ifndef HERMAN_LABELS_HPP
#define HERMAN_LABELS_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "herman/token.hpp"

namespace herman {

// Tag set for summary tokens. Enum order doubles as the deterministic
// tie-break order used by Viterbi decoding.
enum class TagLabel : int { BV = 0, IV = 1, BU = 2, IU = 3, O = 4 };

inline constexpr int kNumTagLabels = 5;

const char* tag_label_name(TagLabel y);                          // "B-V", ..., "O"
bool tag_label_from_name(const std::string& name, TagLabel& y);

inline bool is_begin(TagLabel y) { return y == TagLabel::BV || y == TagLabel::BU; }
inline bool is_inside(TagLabel y) { return y == TagLabel::IV || y == TagLabel::IU; }

enum class ZLabel : int { Verified = 0, Unverified = 1 };

const char* z_label_name(ZLabel z);
bool z_label_from_name(const std::string& name, ZLabel& z);

// One training/eval example: an (article, summary) pair with per-token tags y,
// the entity mask m, and the summary-level verdict z.
struct LabeledInstance {
  CorpusRecord record;
  std::vector<TagLabel> y;   // length = summary token count
  std::vector<std::uint8_t> m;  // m[j] = 1 iff token j lies inside a quantity span
  ZLabel z = ZLabel::Verified;

  // Throws DataError if the labels are inconsistent: length mismatches,
  // m[j] = 0 not matching y[j] = O, I-* without a same-class predecessor, or a
  // z verdict that disagrees with the presence of B-U.
  void validate() const;
};

}  // namespace herman

#endif
