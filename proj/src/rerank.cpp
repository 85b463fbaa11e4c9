#include "herman/rerank.hpp"

#include <set>
#include <utility>

#include "herman/errors.hpp"
#include "herman/quantity.hpp"

namespace herman {

const char* scorer_name(Scorer s) {
  switch (s) {
    case Scorer::Global: return "global";
    case Scorer::Local: return "local";
    case Scorer::Shortest: return "shortest";
    case Scorer::MaxOverlap: return "max-overlap";
  }
  return "?";
}

bool scorer_from_name(const std::string& name, Scorer& s) {
  if (name == "global") s = Scorer::Global;
  else if (name == "local") s = Scorer::Local;
  else if (name == "shortest") s = Scorer::Shortest;
  else if (name == "max-overlap") s = Scorer::MaxOverlap;
  else return false;
  return true;
}

RankedBeam rerank(Beam beam, std::vector<double> scores) {
  if (beam.candidates.empty()) throw DataError("beam " + beam.id + " has no candidates");
  if (scores.size() != beam.candidates.size())
    throw DataError("beam " + beam.id + ": score count does not match candidate count");
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best] ||
        (scores[i] == scores[best] &&
         beam.candidates[i].beam_rank < beam.candidates[best].beam_rank))
      best = i;
  }
  return {std::move(beam), std::move(scores), best};
}

std::vector<double> shortest_scores(const Beam& beam) {
  std::vector<double> scores;
  scores.reserve(beam.candidates.size());
  for (const BeamCandidate& c : beam.candidates)
    scores.push_back(-static_cast<double>(tokenize(c.text).size()));
  return scores;
}

std::vector<double> max_overlap_scores(const Beam& beam) {
  TokenSeq article = tokenize(beam.article_text);
  std::set<std::pair<int, std::string>> article_entities;
  for (const QuantitySpan& s : tag_quantities(article))
    article_entities.insert({static_cast<int>(s.qtype), s.normalized});

  std::vector<double> scores;
  scores.reserve(beam.candidates.size());
  for (const BeamCandidate& c : beam.candidates) {
    int overlap = 0;
    for (const QuantitySpan& s : tag_quantities(tokenize(c.text)))
      if (article_entities.count({static_cast<int>(s.qtype), s.normalized})) ++overlap;
    scores.push_back(overlap);
  }
  return scores;
}

}  // namespace herman
