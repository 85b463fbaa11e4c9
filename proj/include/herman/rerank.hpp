#ifndef HERMAN_RERANK_HPP
#define HERMAN_RERANK_HPP

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "herman/token.hpp"

namespace herman {

struct BeamCandidate {
  std::string text;
  int beam_rank = 0;  // 0 = the upstream summarizer's top choice
  std::optional<double> model_score;
};

struct Beam {
  std::string id;
  std::string article_text;
  std::vector<BeamCandidate> candidates;
};

// A scored beam. `scores` aligns with beam.candidates; `selected` is the
// index of the winning candidate.
struct RankedBeam {
  Beam beam;
  std::vector<double> scores;
  std::size_t selected = 0;
};

enum class Scorer { Global, Local, Shortest, MaxOverlap };

const char* scorer_name(Scorer s);
bool scorer_from_name(const std::string& name, Scorer& s);

// Argmax over per-candidate scores; ties go to the lower beam_rank so the
// upstream summarizer's preference survives equal evidence.
RankedBeam rerank(Beam beam, std::vector<double> scores);

// Baseline scores: negated token count, so shorter summaries win.
std::vector<double> shortest_scores(const Beam& beam);

// Baseline scores: per candidate, the number of its quantity spans whose
// (type, normalized) pair also occurs among the article's quantity spans.
std::vector<double> max_overlap_scores(const Beam& beam);

}  // namespace herman

#endif
