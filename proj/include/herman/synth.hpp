#ifndef HERMAN_SYNTH_HPP
#define HERMAN_SYNTH_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "herman/labels.hpp"

namespace herman {

// Tags the gold summary and marks every quantity span verified.
LabeledInstance label_verified(const CorpusRecord& record);

// Builds the unverified counterpart by replacing summary quantity spans with
// same-type article spans of a different normalized value. Every span with a
// non-empty replacement pool is replaced; replaced spans are tagged B-U/I-U
// and the rest keep their verified tags. Returns nullopt (the record is
// discarded) when no span is replaceable.
//
// Random choices are keyed by (rng_seed, record id, span index), so results
// do not depend on corpus order or thread count.
std::optional<LabeledInstance> perturb(const CorpusRecord& record, std::uint64_t rng_seed);

// label_verified + perturb over a whole corpus. Emits the verified instance
// and its unverified sibling per record, or neither when the record is
// discarded, so the two z classes always balance exactly. Output is sorted
// by record id.
std::vector<LabeledInstance> build_dataset(const std::vector<CorpusRecord>& corpus,
                                           std::uint64_t rng_seed);

}  // namespace herman

#endif
