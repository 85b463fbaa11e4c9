#include "herman/scoring.hpp"

#include "herman/errors.hpp"
#include "herman/labels.hpp"

namespace herman {

double score_global(const HermanOutput& output) { return output.z_prob; }

double score_local(const HermanOutput& output, const std::vector<std::uint8_t>& m) {
  if (m.size() != output.tag_marginals.rows())
    throw DataError("score_local: mask length does not match the marginals");
  double total = 0.0;
  std::size_t positions = 0;
  for (std::size_t j = 0; j < m.size(); ++j) {
    if (!m[j]) continue;
    const Tensor& p = output.tag_marginals;
    total += p(j, static_cast<std::size_t>(TagLabel::BV)) +
             p(j, static_cast<std::size_t>(TagLabel::IV)) -
             p(j, static_cast<std::size_t>(TagLabel::BU)) -
             p(j, static_cast<std::size_t>(TagLabel::IU));
    ++positions;
  }
  return positions > 0 ? total / static_cast<double>(positions) : 0.0;
}

std::vector<double> herman_scores(const HermanModel& model, const Beam& beam, Scorer scorer) {
  if (scorer != Scorer::Global && scorer != Scorer::Local)
    throw ConfigError("herman_scores: scorer must be global or local");
  TokenSeq article = tokenize(beam.article_text);
  std::vector<double> scores;
  scores.reserve(beam.candidates.size());
  for (const BeamCandidate& candidate : beam.candidates) {
    TokenSeq summary = tokenize(candidate.text);
    HermanOutput output = model.verify(article, summary);
    if (scorer == Scorer::Global) {
      scores.push_back(score_global(output));
    } else {
      std::vector<std::uint8_t> m = span_mask(summary);
      m.resize(output.tag_marginals.rows());
      scores.push_back(score_local(output, m));
    }
  }
  return scores;
}

RankedBeam rerank_with(const HermanModel* model, Beam beam, Scorer scorer) {
  std::vector<double> scores;
  switch (scorer) {
    case Scorer::Shortest:
      scores = shortest_scores(beam);
      break;
    case Scorer::MaxOverlap:
      scores = max_overlap_scores(beam);
      break;
    case Scorer::Global:
    case Scorer::Local:
      if (model == nullptr) throw ConfigError("the " + std::string(scorer_name(scorer)) +
                                              " scorer needs a trained checkpoint");
      scores = herman_scores(*model, beam, scorer);
      break;
  }
  return rerank(std::move(beam), std::move(scores));
}

}  // namespace herman
