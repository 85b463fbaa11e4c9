#ifndef HERMAN_MODEL_HPP
#define HERMAN_MODEL_HPP

#include <cstdint>
#include <string>
#include <utility>
#include <vector>

#include "herman/labels.hpp"
#include "herman/tape.hpp"
#include "herman/tensor.hpp"
#include "herman/token.hpp"
#include "herman/vocab.hpp"

namespace herman {

// Tag loss flavor: `Sequence` is the CRF sequence negative log-likelihood,
// `TokenMarginal` sums per-token marginal log-losses instead.
enum class LossMode { Sequence, TokenMarginal };

const char* loss_mode_name(LossMode mode);
LossMode loss_mode_from_name(const std::string& name);

struct HermanConfig {
  std::size_t hidden = 256;
  std::size_t embed = 100;
  std::size_t vocab = 50000;
  double alpha = 0.66;  // weight of the tag loss; 1 - alpha goes to the z loss
  double lr = 0.001;
  double clip_norm = 5.0;
  std::size_t batch_size = 32;
  std::size_t max_article = 400;
  std::size_t max_summary = 90;
  std::uint64_t seed = 1;
  LossMode loss_mode = LossMode::Sequence;

  // The span mask reaches the model twice: as an embedded input to the
  // summary encoder and as a scalar feature on the emission projection.
  // Either injection point can be switched off on its own.
  std::size_t m_embed = 8;
  bool m_input = true;
  bool m_feature = true;

  std::size_t patience = 3;
  std::size_t max_epochs = 30;

  void validate() const;  // throws ConfigError
};

struct HermanOutput {
  std::vector<TagLabel> tag_sequence;
  Tensor tag_marginals;  // n x 5 posteriors over the admissible lattice
  double z_prob = 0.0;
  bool truncated = false;  // inputs exceeded the configured length limits
};

// alpha * tag_nll + (1 - alpha) * bce(z_prob, gold_z), with z_prob clamped
// to [1e-12, 1 - 1e-12] before the logs.
double combined_loss(double tag_nll, double z_prob, ZLabel gold_z, double alpha);

class HermanModel {
 public:
  HermanModel(HermanConfig config, Vocab vocab);

  struct Graph {
    std::vector<Tape::NodeId> emissions;  // one [5] node per summary position
    Tape::NodeId z_logit;
  };

  // Differentiable forward pass. Ids must already respect the length limits.
  Graph build_graph(Tape& t, const std::vector<int>& article_ids,
                    const std::vector<int>& summary_ids,
                    const std::vector<std::uint8_t>& m) const;

  Tape::NodeId loss_graph(Tape& t, const Graph& g, const std::vector<TagLabel>& y,
                          ZLabel z) const;

  // Loss of one labeled instance on a fresh tape, with the instance truncated
  // to the length limits first.
  Tape::NodeId instance_loss_graph(Tape& t, const LabeledInstance& inst) const;
  double instance_loss(const LabeledInstance& inst) const;

  // Values-only forward: emission matrix [n x 5] and z probability.
  std::pair<Tensor, double> forward(const std::vector<int>& article_ids,
                                    const std::vector<int>& summary_ids,
                                    const std::vector<std::uint8_t>& m) const;

  // Full inference: span mask from the quantity tagger, constrained decode
  // and posteriors, z probability.
  HermanOutput verify(const TokenSeq& article, const TokenSeq& summary) const;

  const HermanConfig& config() const { return config_; }
  const Vocab& vocab() const { return vocab_; }
  ParamStore& params() { return store_; }
  const ParamStore& params() const { return store_; }

  void save(const std::string& path) const;
  static HermanModel load(const std::string& path);

 private:
  void register_params();

  HermanConfig config_;
  Vocab vocab_;
  ParamStore store_;
};

// Positions covered by any tagged quantity span get m = 1.
std::vector<std::uint8_t> span_mask(const TokenSeq& summary);

// Overwrites rows of the "embed" table from a text file of
// "word v1 ... vd" lines (d must match the embedding width). Words absent
// from the file keep their random initialization. Returns the number of
// rows overwritten.
std::size_t load_pretrained_embeddings(ParamStore& store, const Vocab& vocab,
                                       const std::string& path);

}  // namespace herman

#endif
