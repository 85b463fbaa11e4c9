#ifndef HERMAN_TOY_HPP
#define HERMAN_TOY_HPP

#include <cstdint>
#include <vector>

#include "herman/rerank.hpp"
#include "herman/token.hpp"

namespace herman {

// Synthetic news-style records with planted quantities. Each quantity slot
// draws from its own small value pool (people counts are number words,
// vehicle counts are 10-19, closure durations 20-45 minutes, and so on), so
// a replacement from a different slot lands outside the range its context
// predicts and a small model can learn to notice. Every 25th record quotes
// the article's only date, leaving nothing replaceable; those exercise the
// discard path of the synthesizer. Fully deterministic in (count, seed).
std::vector<CorpusRecord> make_toy_corpus(std::size_t count, std::uint64_t seed);

// A beam whose candidates are one faithful summary and k-1 corrupted ones
// (quantities swapped for values from other slots' pools, never matching the
// article). `faithful` is the candidate index holding the faithful summary;
// beam ranks are shuffled so it lands anywhere.
struct ToyBeam {
  Beam beam;
  std::size_t faithful = 0;
};

std::vector<ToyBeam> make_toy_beams(std::size_t count, std::size_t k, std::uint64_t seed);

}  // namespace herman

#endif
