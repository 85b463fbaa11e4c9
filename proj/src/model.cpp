#include "herman/model.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <fstream>
#include <set>
#include <sstream>

#include "herman/crf.hpp"
#include "herman/errors.hpp"
#include "herman/layers.hpp"
#include "herman/quantity.hpp"
#include "json.hpp"

namespace herman {

const char* loss_mode_name(LossMode mode) {
  return mode == LossMode::Sequence ? "sequence" : "token-marginal";
}

LossMode loss_mode_from_name(const std::string& name) {
  if (name == "sequence") return LossMode::Sequence;
  if (name == "token-marginal") return LossMode::TokenMarginal;
  throw ConfigError("unknown loss mode: " + name);
}

void HermanConfig::validate() const {
  if (hidden < 1 || embed < 1 || m_embed < 1) throw ConfigError("model dimensions must be at least 1");
  if (vocab < 2) throw ConfigError("vocab must have room for the reserved ids");
  if (alpha < 0.0 || alpha > 1.0) throw ConfigError("alpha must be in [0, 1]");
  if (lr < 0.0) throw ConfigError("lr must be non-negative");
  if (clip_norm <= 0.0) throw ConfigError("clip_norm must be positive");
  if (batch_size < 1) throw ConfigError("batch_size must be at least 1");
  if (max_article < 1 || max_summary < 1) throw ConfigError("length limits must be at least 1");
  if (max_epochs < 1) throw ConfigError("max_epochs must be at least 1");
}

double combined_loss(double tag_nll, double z_prob, ZLabel gold_z, double alpha) {
  if (alpha < 0.0 || alpha > 1.0) throw ConfigError("alpha must be in [0, 1]");
  double p = std::clamp(z_prob, 1e-12, 1.0 - 1e-12);
  double target = gold_z == ZLabel::Verified ? 1.0 : 0.0;
  double bce = -(target * std::log(p) + (1.0 - target) * std::log(1.0 - p));
  return alpha * tag_nll + (1.0 - alpha) * bce;
}

std::vector<std::uint8_t> span_mask(const TokenSeq& summary) {
  std::vector<std::uint8_t> m(summary.size(), 0);
  for (const QuantitySpan& span : tag_quantities(summary)) {
    for (std::size_t j = span.token_start; j < span.token_end; ++j) m[j] = 1;
  }
  return m;
}

HermanModel::HermanModel(HermanConfig config, Vocab vocab)
    : config_(std::move(config)), vocab_(std::move(vocab)) {
  config_.validate();
  register_params();
}

void HermanModel::register_params() {
  std::size_t h = config_.hidden;
  std::uint64_t seed = config_.seed;

  // The embedding table covers the words actually in the vocab; config.vocab
  // is the cap applied when the vocab is built.
  add_matrix_param(store_, "embed", vocab_.size(), config_.embed, seed);
  if (config_.m_input) add_matrix_param(store_, "m_embed", 2, config_.m_embed, seed);

  add_bilstm_params(store_, "art", config_.embed, h, seed);
  std::size_t summary_in = config_.embed + (config_.m_input ? config_.m_embed : 0);
  add_bilstm_params(store_, "sum", summary_in, h, seed);

  add_attention_params(store_, "att", h, 2 * h, 2 * h, seed);

  std::size_t emission_in = 4 * h + (config_.m_feature ? 1 : 0);
  add_matrix_param(store_, "em.W", kNumTagLabels, emission_in, seed);
  add_bias_param(store_, "em.b", kNumTagLabels);

  add_mlp_params(store_, "z", 4 * h, h, seed);

  store_.add("crf.start", Tensor::vec(kNumTagLabels));
  store_.add("crf.trans", Tensor::mat(kNumTagLabels, kNumTagLabels));
  store_.add("crf.end", Tensor::vec(kNumTagLabels));
}

HermanModel::Graph HermanModel::build_graph(Tape& t, const std::vector<int>& article_ids,
                                            const std::vector<int>& summary_ids,
                                            const std::vector<std::uint8_t>& m) const {
  if (article_ids.empty()) throw DataError("model: empty article");
  if (summary_ids.empty()) throw DataError("model: empty summary");
  if (m.size() != summary_ids.size()) throw DataError("model: mask length mismatch");
  if (article_ids.size() > config_.max_article || summary_ids.size() > config_.max_summary)
    throw DataError("model: input exceeds configured length limits");
  auto check_id = [&](int id) {
    if (id < 0 || static_cast<std::size_t>(id) >= vocab_.size())
      throw DataError("model: token id out of vocab range");
  };

  std::vector<Tape::NodeId> article_in;
  article_in.reserve(article_ids.size());
  for (int id : article_ids) {
    check_id(id);
    article_in.push_back(t.param_row("embed", static_cast<std::size_t>(id)));
  }
  std::vector<Tape::NodeId> encoded = bilstm(t, "art", article_in);
  Tape::NodeId keys = t.stack_rows(encoded);
  Tape::NodeId projected = project_keys(t, "att", encoded);

  std::size_t n = summary_ids.size();
  std::vector<Tape::NodeId> summary_in;
  summary_in.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    check_id(summary_ids[j]);
    Tape::NodeId word = t.param_row("embed", static_cast<std::size_t>(summary_ids[j]));
    if (config_.m_input) {
      Tape::NodeId flag = t.param_row("m_embed", m[j] ? 1 : 0);
      word = t.concat({word, flag});
    }
    summary_in.push_back(word);
  }
  std::vector<Tape::NodeId> states = bilstm(t, "sum", summary_in);

  Graph g;
  g.emissions.reserve(n);
  std::vector<Tape::NodeId> pooled;
  pooled.reserve(n);
  for (std::size_t j = 0; j < n; ++j) {
    Attended att = attend(t, "att", states[j], keys, projected);
    Tape::NodeId u = t.concat({states[j], att.context});
    pooled.push_back(u);

    Tape::NodeId emission_in = u;
    if (config_.m_feature) {
      Tensor flag = Tensor::vec(1);
      flag(0) = m[j] ? 1.0 : 0.0;
      emission_in = t.concat({u, t.input(flag)});
    }
    g.emissions.push_back(t.add(t.matvec(t.param("em.W"), emission_in), t.param("em.b")));
  }
  g.z_logit = mlp_logit(t, "z", t.average(pooled));
  return g;
}

Tape::NodeId HermanModel::loss_graph(Tape& t, const Graph& g, const std::vector<TagLabel>& y,
                                     ZLabel z) const {
  Tape::NodeId start = t.param("crf.start");
  Tape::NodeId trans = t.param("crf.trans");
  Tape::NodeId end = t.param("crf.end");
  Tape::NodeId tag_nll = config_.loss_mode == LossMode::Sequence
                             ? crf_nll_on_tape(t, g.emissions, start, trans, end, y)
                             : crf_token_nll_on_tape(t, g.emissions, start, trans, end, y);
  double target = z == ZLabel::Verified ? 1.0 : 0.0;
  Tape::NodeId bce = t.bce_with_logit(g.z_logit, target);
  return t.add(t.scale(tag_nll, config_.alpha), t.scale(bce, 1.0 - config_.alpha));
}

Tape::NodeId HermanModel::instance_loss_graph(Tape& t, const LabeledInstance& inst) const {
  std::vector<int> article_ids = vocab_.ids(inst.record.article, config_.max_article);
  std::vector<int> summary_ids = vocab_.ids(inst.record.summary, config_.max_summary);
  if (article_ids.empty() || summary_ids.empty())
    throw DataError("model: instance " + inst.record.id + " has an empty side");
  std::size_t n = summary_ids.size();
  std::vector<TagLabel> y(inst.y.begin(), inst.y.begin() + n);
  std::vector<std::uint8_t> m(inst.m.begin(), inst.m.begin() + n);
  Graph g = build_graph(t, article_ids, summary_ids, m);
  return loss_graph(t, g, y, inst.z);
}

double HermanModel::instance_loss(const LabeledInstance& inst) const {
  Tape t(&store_);
  return t.value(instance_loss_graph(t, inst))(0);
}

std::pair<Tensor, double> HermanModel::forward(const std::vector<int>& article_ids,
                                               const std::vector<int>& summary_ids,
                                               const std::vector<std::uint8_t>& m) const {
  Tape t(&store_);
  Graph g = build_graph(t, article_ids, summary_ids, m);
  std::size_t n = g.emissions.size();
  Tensor emissions = Tensor::mat(n, kNumTagLabels);
  for (std::size_t j = 0; j < n; ++j) {
    const Tensor& row = t.value(g.emissions[j]);
    for (std::size_t l = 0; l < kNumTagLabels; ++l) emissions(j, l) = row(l);
  }
  double z_prob = t.value(t.sigmoid_(g.z_logit))(0);
  return {std::move(emissions), z_prob};
}

HermanOutput HermanModel::verify(const TokenSeq& article, const TokenSeq& summary) const {
  if (article.empty()) throw DataError("verify: empty article");
  if (summary.empty()) throw DataError("verify: empty summary");

  std::vector<std::uint8_t> full_mask = span_mask(summary);
  HermanOutput out;
  out.truncated =
      article.size() > config_.max_article || summary.size() > config_.max_summary;

  std::vector<int> article_ids = vocab_.ids(article, config_.max_article);
  std::vector<int> summary_ids = vocab_.ids(summary, config_.max_summary);
  std::vector<std::uint8_t> m(full_mask.begin(), full_mask.begin() + summary_ids.size());

  auto [emissions, z_prob] = forward(article_ids, summary_ids, m);
  out.z_prob = z_prob;

  const Tensor& start = store_.get("crf.start");
  const Tensor& trans = store_.get("crf.trans");
  const Tensor& end = store_.get("crf.end");
  out.tag_sequence = crf_viterbi(emissions, start, trans, end, m);
  out.tag_marginals = crf_constrained_marginals(emissions, start, trans, end, m);
  return out;
}

std::size_t load_pretrained_embeddings(ParamStore& store, const Vocab& vocab,
                                       const std::string& path) {
  std::ifstream is(path);
  if (!is) throw DataError("cannot open embeddings file: " + path);
  Tensor& embed = store.get("embed");
  std::size_t dim = embed.cols();

  std::size_t loaded = 0, line_no = 0;
  std::string line;
  while (std::getline(is, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::istringstream fields(line);
    std::string word;
    fields >> word;
    int row = vocab.id(word);
    bool known = row != Vocab::kUnk || word == vocab.word(Vocab::kUnk);

    std::vector<double> values;
    values.reserve(dim);
    double v = 0.0;
    while (fields >> v) values.push_back(v);
    if (values.size() != dim || !fields.eof())
      throw DataError("embeddings file " + path + ":" + std::to_string(line_no) +
                      ": expected a word and " + std::to_string(dim) + " values");
    if (!known) continue;
    for (std::size_t c = 0; c < dim; ++c) embed(static_cast<std::size_t>(row), c) = values[c];
    ++loaded;
  }
  return loaded;
}

namespace {

constexpr char kMagic[4] = {'H', 'R', 'M', 'N'};
constexpr std::uint32_t kVersion = 1;

void write_u32(std::ostream& os, std::uint32_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

void write_u64(std::ostream& os, std::uint64_t v) {
  os.write(reinterpret_cast<const char*>(&v), sizeof v);
}

std::uint32_t read_u32(std::istream& is) {
  std::uint32_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw DataError("checkpoint: unexpected end of file");
  return v;
}

std::uint64_t read_u64(std::istream& is) {
  std::uint64_t v = 0;
  is.read(reinterpret_cast<char*>(&v), sizeof v);
  if (!is) throw DataError("checkpoint: unexpected end of file");
  return v;
}

nlohmann::json config_to_json(const HermanConfig& c) {
  return {
      {"hidden", c.hidden},
      {"embed", c.embed},
      {"vocab", c.vocab},
      {"alpha", c.alpha},
      {"lr", c.lr},
      {"clip_norm", c.clip_norm},
      {"batch_size", c.batch_size},
      {"max_article", c.max_article},
      {"max_summary", c.max_summary},
      {"seed", c.seed},
      {"loss_mode", loss_mode_name(c.loss_mode)},
      {"m_embed", c.m_embed},
      {"m_input", c.m_input},
      {"m_feature", c.m_feature},
      {"patience", c.patience},
      {"max_epochs", c.max_epochs},
  };
}

HermanConfig config_from_json(const nlohmann::json& j) {
  HermanConfig c;
  c.hidden = j.at("hidden").get<std::size_t>();
  c.embed = j.at("embed").get<std::size_t>();
  c.vocab = j.at("vocab").get<std::size_t>();
  c.alpha = j.at("alpha").get<double>();
  c.lr = j.at("lr").get<double>();
  c.clip_norm = j.at("clip_norm").get<double>();
  c.batch_size = j.at("batch_size").get<std::size_t>();
  c.max_article = j.at("max_article").get<std::size_t>();
  c.max_summary = j.at("max_summary").get<std::size_t>();
  c.seed = j.at("seed").get<std::uint64_t>();
  c.loss_mode = loss_mode_from_name(j.at("loss_mode").get<std::string>());
  c.m_embed = j.at("m_embed").get<std::size_t>();
  c.m_input = j.at("m_input").get<bool>();
  c.m_feature = j.at("m_feature").get<bool>();
  c.patience = j.at("patience").get<std::size_t>();
  c.max_epochs = j.at("max_epochs").get<std::size_t>();
  return c;
}

}  // namespace

void HermanModel::save(const std::string& path) const {
  std::ofstream os(path, std::ios::binary | std::ios::trunc);
  if (!os) throw DataError("cannot write checkpoint: " + path);
  os.write(kMagic, sizeof kMagic);
  write_u32(os, kVersion);

  nlohmann::json j;
  j["config"] = config_to_json(config_);
  j["vocab"] = vocab_.words();
  std::string blob = j.dump();
  write_u64(os, blob.size());
  os.write(blob.data(), static_cast<std::streamsize>(blob.size()));

  write_u32(os, static_cast<std::uint32_t>(store_.params.size()));
  for (const auto& [name, tensor] : store_.params) {
    write_u32(os, static_cast<std::uint32_t>(name.size()));
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
    write_u32(os, static_cast<std::uint32_t>(tensor.rank()));
    for (std::size_t dim : tensor.shape) write_u64(os, dim);
    os.write(reinterpret_cast<const char*>(tensor.data.data()),
             static_cast<std::streamsize>(tensor.data.size() * sizeof(double)));
  }
  if (!os) throw DataError("checkpoint write failed: " + path);
}

HermanModel HermanModel::load(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw DataError("cannot open checkpoint: " + path);
  char magic[4] = {};
  is.read(magic, sizeof magic);
  if (!is || std::memcmp(magic, kMagic, sizeof kMagic) != 0)
    throw DataError("not a checkpoint file: " + path);
  if (read_u32(is) != kVersion) throw DataError("unsupported checkpoint version in " + path);

  std::uint64_t blob_len = read_u64(is);
  std::string blob(blob_len, '\0');
  is.read(blob.data(), static_cast<std::streamsize>(blob_len));
  if (!is) throw DataError("checkpoint: unexpected end of file");

  nlohmann::json j;
  try {
    j = nlohmann::json::parse(blob);
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("checkpoint: bad config block: ") + e.what());
  }
  HermanConfig config;
  Vocab vocab;
  try {
    config = config_from_json(j.at("config"));
    vocab = Vocab(j.at("vocab").get<std::vector<std::string>>());
  } catch (const nlohmann::json::exception& e) {
    throw DataError(std::string("checkpoint: bad config block: ") + e.what());
  }

  HermanModel model(std::move(config), std::move(vocab));
  std::uint32_t count = read_u32(is);
  if (count != model.store_.params.size())
    throw DataError("checkpoint: parameter count does not match the architecture");

  std::set<std::string> seen;
  for (std::uint32_t i = 0; i < count; ++i) {
    std::uint32_t name_len = read_u32(is);
    std::string name(name_len, '\0');
    is.read(name.data(), name_len);
    if (!is) throw DataError("checkpoint: unexpected end of file");
    if (!model.store_.has(name)) throw DataError("checkpoint: unknown parameter " + name);
    if (!seen.insert(name).second) throw DataError("checkpoint: duplicate parameter " + name);

    std::uint32_t rank = read_u32(is);
    std::vector<std::size_t> shape(rank);
    for (std::uint32_t d = 0; d < rank; ++d) shape[d] = read_u64(is);
    Tensor& dst = model.store_.get(name);
    if (shape != dst.shape) throw DataError("checkpoint: shape mismatch for " + name);
    is.read(reinterpret_cast<char*>(dst.data.data()),
            static_cast<std::streamsize>(dst.data.size() * sizeof(double)));
    if (!is) throw DataError("checkpoint: unexpected end of file");
  }
  return model;
}

}  // namespace herman
