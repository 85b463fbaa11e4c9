#include "herman/labels.hpp"

#include "herman/errors.hpp"

namespace herman {

const char* tag_label_name(TagLabel y) {
  switch (y) {
    case TagLabel::BV: return "B-V";
    case TagLabel::IV: return "I-V";
    case TagLabel::BU: return "B-U";
    case TagLabel::IU: return "I-U";
    case TagLabel::O: return "O";
  }
  return "?";
}

bool tag_label_from_name(const std::string& name, TagLabel& y) {
  for (int i = 0; i < kNumTagLabels; ++i) {
    TagLabel cand = static_cast<TagLabel>(i);
    if (name == tag_label_name(cand)) {
      y = cand;
      return true;
    }
  }
  return false;
}

const char* z_label_name(ZLabel z) {
  return z == ZLabel::Verified ? "VERIFIED" : "UNVERIFIED";
}

bool z_label_from_name(const std::string& name, ZLabel& z) {
  if (name == "VERIFIED") {
    z = ZLabel::Verified;
    return true;
  }
  if (name == "UNVERIFIED") {
    z = ZLabel::Unverified;
    return true;
  }
  return false;
}

void LabeledInstance::validate() const {
  const std::size_t n = record.summary.size();
  if (y.size() != n || m.size() != n)
    throw DataError("instance " + record.id + ": label lengths do not match summary length");
  bool any_unverified = false;
  for (std::size_t j = 0; j < n; ++j) {
    if (m[j] != 0 && m[j] != 1)
      throw DataError("instance " + record.id + ": mask value out of range");
    if ((m[j] == 0) != (y[j] == TagLabel::O))
      throw DataError("instance " + record.id + ": mask and tags disagree at token " +
                      std::to_string(j));
    if (is_inside(y[j])) {
      bool ok_prev =
          j > 0 && (y[j] == TagLabel::IV ? (y[j - 1] == TagLabel::BV || y[j - 1] == TagLabel::IV)
                                         : (y[j - 1] == TagLabel::BU || y[j - 1] == TagLabel::IU));
      if (!ok_prev)
        throw DataError("instance " + record.id + ": dangling inside tag at token " +
                        std::to_string(j));
    }
    if (y[j] == TagLabel::BU || y[j] == TagLabel::IU) any_unverified = true;
  }
  if (z == ZLabel::Verified && any_unverified)
    throw DataError("instance " + record.id + ": VERIFIED summary carries unverified tags");
  if (z == ZLabel::Unverified && !any_unverified)
    throw DataError("instance " + record.id + ": UNVERIFIED summary has no unverified span");
}

}  // namespace herman
