// herman: quantity verification for abstractive summaries.
//
// Subcommands cover the pipeline end to end: tag-quantities and gen-data
// prepare weakly supervised training data, train fits the verification
// model, verify and rerank apply it, evaluate reports metrics. Every output
// file embeds {tool version, config hash, seed} and the effective
// configuration is dumped next to each primary output, so any artifact can
// be traced back to the exact settings that produced it.
//
// Exit codes: 0 ok, 2 configuration error, 3 data error, 4 numeric failure.

#include <CLI11.hpp>

#include <json.hpp>

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "herman/errors.hpp"
#include "herman/io.hpp"
#include "herman/labels.hpp"
#include "herman/metrics.hpp"
#include "herman/model.hpp"
#include "herman/quantity.hpp"
#include "herman/rerank.hpp"
#include "herman/rng.hpp"
#include "herman/scoring.hpp"
#include "herman/synth.hpp"
#include "herman/token.hpp"
#include "herman/train.hpp"
#include "herman/version.hpp"
#include "herman/vocab.hpp"

namespace {

using nlohmann::json;

// ---- configuration: defaults, then key=value file, then flags; flags win

struct RunConfig {
  herman::HermanConfig model;
  std::string scorer = "global";
  std::string embeddings;  // optional pretrained embedding file
};

std::size_t to_size(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    long long n = std::stoll(v, &pos);
    if (pos != v.size() || n < 0) throw std::invalid_argument(v);
    return static_cast<std::size_t>(n);
  } catch (const std::exception&) {
    throw herman::ConfigError(key + " must be a non-negative integer, got \"" + v + "\"");
  }
}

std::uint64_t to_u64(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    unsigned long long n = std::stoull(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return n;
  } catch (const std::exception&) {
    throw herman::ConfigError(key + " must be an unsigned integer, got \"" + v + "\"");
  }
}

double to_double(const std::string& key, const std::string& v) {
  try {
    std::size_t pos = 0;
    double d = std::stod(v, &pos);
    if (pos != v.size()) throw std::invalid_argument(v);
    return d;
  } catch (const std::exception&) {
    throw herman::ConfigError(key + " must be a number, got \"" + v + "\"");
  }
}

bool to_bool(const std::string& key, const std::string& v) {
  if (v == "1" || v == "true") return true;
  if (v == "0" || v == "false") return false;
  throw herman::ConfigError(key + " must be 0/1/true/false, got \"" + v + "\"");
}

void apply_setting(RunConfig& rc, const std::string& key, const std::string& v) {
  herman::HermanConfig& m = rc.model;
  if (key == "hidden") m.hidden = to_size(key, v);
  else if (key == "embed") m.embed = to_size(key, v);
  else if (key == "vocab") m.vocab = to_size(key, v);
  else if (key == "alpha") m.alpha = to_double(key, v);
  else if (key == "lr") m.lr = to_double(key, v);
  else if (key == "clip_norm") m.clip_norm = to_double(key, v);
  else if (key == "batch_size") m.batch_size = to_size(key, v);
  else if (key == "max_article") m.max_article = to_size(key, v);
  else if (key == "max_summary") m.max_summary = to_size(key, v);
  else if (key == "seed") m.seed = to_u64(key, v);
  else if (key == "loss_mode") m.loss_mode = herman::loss_mode_from_name(v);
  else if (key == "m_embed") m.m_embed = to_size(key, v);
  else if (key == "m_input") m.m_input = to_bool(key, v);
  else if (key == "m_feature") m.m_feature = to_bool(key, v);
  else if (key == "patience") m.patience = to_size(key, v);
  else if (key == "max_epochs") m.max_epochs = to_size(key, v);
  else if (key == "scorer") rc.scorer = v;
  else if (key == "embeddings") rc.embeddings = v;
  else throw herman::ConfigError("unknown configuration key \"" + key + "\"");
}

std::map<std::string, std::string> read_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw herman::ConfigError("cannot open config file " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::size_t b = line.find_first_not_of(" \t\r");
    if (b == std::string::npos || line[b] == '#') continue;
    std::size_t e = line.find_last_not_of(" \t\r");
    std::string body = line.substr(b, e - b + 1);
    std::size_t eq = body.find('=');
    if (eq == std::string::npos || eq == 0)
      throw herman::ConfigError(path + ":" + std::to_string(line_no) +
                                ": expected key=value, got \"" + body + "\"");
    kv[body.substr(0, eq)] = body.substr(eq + 1);
  }
  return kv;
}

RunConfig resolve_config(const std::string& config_path,
                         const std::map<std::string, std::string>& overrides) {
  RunConfig rc;
  std::map<std::string, std::string> merged;
  if (!config_path.empty()) merged = read_config_file(config_path);
  for (const auto& [k, v] : overrides) merged[k] = v;
  for (const auto& [k, v] : merged) apply_setting(rc, k, v);
  rc.model.validate();
  herman::Scorer s;
  if (!herman::scorer_from_name(rc.scorer, s))
    throw herman::ConfigError("unknown scorer \"" + rc.scorer +
                              "\"; expected global, local, shortest or max-overlap");
  return rc;
}

std::map<std::string, std::string> canonical_settings(const RunConfig& rc) {
  const herman::HermanConfig& m = rc.model;
  return {
      {"hidden", std::to_string(m.hidden)},
      {"embed", std::to_string(m.embed)},
      {"vocab", std::to_string(m.vocab)},
      {"alpha", std::to_string(m.alpha)},
      {"lr", std::to_string(m.lr)},
      {"clip_norm", std::to_string(m.clip_norm)},
      {"batch_size", std::to_string(m.batch_size)},
      {"max_article", std::to_string(m.max_article)},
      {"max_summary", std::to_string(m.max_summary)},
      {"seed", std::to_string(m.seed)},
      {"loss_mode", herman::loss_mode_name(m.loss_mode)},
      {"m_embed", std::to_string(m.m_embed)},
      {"m_input", m.m_input ? "1" : "0"},
      {"m_feature", m.m_feature ? "1" : "0"},
      {"patience", std::to_string(m.patience)},
      {"max_epochs", std::to_string(m.max_epochs)},
      {"scorer", rc.scorer},
      {"embeddings", rc.embeddings},
  };
}

std::string settings_text(const std::map<std::string, std::string>& kv) {
  std::string out;
  for (const auto& [k, v] : kv) out += k + "=" + v + "\n";
  return out;
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

herman::FileHeader make_header(const RunConfig& rc) {
  herman::FileHeader h;
  h.tool_version = herman::kToolVersion;
  h.config_hash = hex64(herman::fnv1a64(settings_text(canonical_settings(rc))));
  h.seed = rc.model.seed;
  return h;
}

// The dump is itself a valid config file, so a run can be repeated with
// --config <output>.config.
void dump_config(const std::string& primary_output, const RunConfig& rc) {
  std::string path = primary_output + ".config";
  std::ofstream out(path, std::ios::trunc);
  if (!out) throw herman::DataError("cannot write " + path);
  out << "# herman " << herman::kToolVersion << " effective configuration\n";
  out << settings_text(canonical_settings(rc));
}

double round2(double v) { return std::round(v * 100.0) / 100.0; }
double pct2(double fraction) { return round2(100.0 * fraction); }

herman::Vocab vocab_from_instances(const std::vector<herman::LabeledInstance>& instances,
                                   std::size_t cap) {
  herman::VocabBuilder b;
  for (const herman::LabeledInstance& inst : instances) {
    b.add_all(inst.record.article);
    b.add_all(inst.record.summary);
  }
  return b.build(cap);
}

// ---- subcommands

void cmd_tag_quantities(const std::string& corpus, const std::string& out, const RunConfig& rc) {
  auto records = herman::read_corpus(corpus);
  herman::write_spans(out, records, make_header(rc));
  dump_config(out, rc);
  std::printf("tagged %zu records -> %s\n", records.size(), out.c_str());
}

void cmd_gen_data(const std::string& corpus, const std::string& out, const RunConfig& rc) {
  auto records = herman::read_corpus(corpus);
  auto data = herman::build_dataset(records, rc.model.seed);
  herman::write_dataset(out, data, make_header(rc));
  dump_config(out, rc);
  std::printf("synthesized %zu instances from %zu records -> %s\n", data.size(),
              records.size(), out.c_str());
}

void cmd_train(const std::string& data_path, const std::string& out, std::string log_path,
               const RunConfig& rc) {
  auto data = herman::read_dataset(data_path);
  herman::DatasetSplit split = herman::split_dataset(std::move(data), rc.model.seed);
  herman::Vocab vocab = vocab_from_instances(split.train, rc.model.vocab);
  herman::HermanModel model(rc.model, vocab);
  std::printf("vocab %zu words, %zu parameters, train/val/test %zu/%zu/%zu\n", vocab.size(),
              model.params().total_size(), split.train.size(), split.val.size(),
              split.test.size());
  if (!rc.embeddings.empty()) {
    std::size_t n = herman::load_pretrained_embeddings(model.params(), vocab, rc.embeddings);
    std::printf("loaded %zu pretrained embedding rows from %s\n", n, rc.embeddings.c_str());
  }

  herman::TrainResult result = herman::train_model(model, split.train, split.val);
  for (const herman::EpochStats& s : result.log)
    std::printf("epoch %zu train %.6f val %.6f\n", s.epoch, s.train_loss, s.val_loss);
  std::printf("best epoch %zu val %.6f\n", result.best_epoch, result.best_val_loss);

  model.save(out);
  if (log_path.empty()) log_path = out + ".log.jsonl";
  herman::write_train_log(log_path, result, make_header(rc));
  dump_config(out, rc);
  std::printf("checkpoint -> %s, log -> %s\n", out.c_str(), log_path.c_str());
}

void cmd_verify(const std::string& checkpoint, const std::string& corpus,
                const std::string& out, const RunConfig& rc) {
  herman::HermanModel model = herman::HermanModel::load(checkpoint);
  auto records = herman::read_corpus(corpus);

  std::ofstream os(out, std::ios::trunc);
  if (!os) throw herman::DataError("cannot write " + out);
  herman::FileHeader h = make_header(rc);
  os << json{{"_type", "header"},
             {"tool", "herman"},
             {"tool_version", h.tool_version},
             {"config_hash", h.config_hash},
             {"seed", h.seed}}
            .dump()
     << "\n";
  std::size_t verified = 0;
  for (const herman::CorpusRecord& r : records) {
    herman::HermanOutput o = model.verify(r.article, r.summary);
    herman::ZLabel z =
        o.z_prob > 0.5 ? herman::ZLabel::Verified : herman::ZLabel::Unverified;
    if (z == herman::ZLabel::Verified) ++verified;
    json tags = json::array();
    for (herman::TagLabel y : o.tag_sequence) tags.push_back(herman::tag_label_name(y));
    os << json{{"id", r.id},
               {"z", herman::z_label_name(z)},
               {"z_prob", o.z_prob},
               {"tags", std::move(tags)},
               {"truncated", o.truncated}}
              .dump()
       << "\n";
  }
  dump_config(out, rc);
  std::printf("verified %zu of %zu summaries -> %s\n", verified, records.size(), out.c_str());
}

void cmd_rerank(const std::string& beams_path, const std::string& checkpoint,
                const std::string& out, const RunConfig& rc) {
  herman::Scorer scorer;
  herman::scorer_from_name(rc.scorer, scorer);  // validated in resolve_config
  std::unique_ptr<herman::HermanModel> model;
  if (!checkpoint.empty())
    model = std::make_unique<herman::HermanModel>(herman::HermanModel::load(checkpoint));

  auto beams = herman::read_beams(beams_path);
  std::vector<herman::RankedBeam> ranked;
  ranked.reserve(beams.size());
  for (herman::Beam& b : beams)
    ranked.push_back(herman::rerank_with(model.get(), std::move(b), scorer));

  herman::write_ranked(out, ranked, make_header(rc));
  dump_config(out, rc);
  std::printf("reranked %zu beams with the %s scorer -> %s\n", ranked.size(),
              herman::scorer_name(scorer), out.c_str());
}

json rouge_json(const double sums[3], std::size_t n) {
  double d = n ? static_cast<double>(n) : 1.0;
  return json{{"recall", pct2(sums[0] / d)},
              {"precision", pct2(sums[1] / d)},
              {"f1", pct2(sums[2] / d)}};
}

void cmd_evaluate(const std::string& pred, const std::string& ref, const std::string& report,
                  const std::string& dataset, const std::string& checkpoint,
                  const RunConfig& rc) {
  if (dataset.empty() != checkpoint.empty())
    throw herman::ConfigError("--dataset and --checkpoint must be given together");

  std::map<std::string, const herman::CorpusRecord*> refs;
  auto records = herman::read_corpus(ref);
  for (const herman::CorpusRecord& r : records) refs[r.id] = &r;

  std::ifstream in(pred);
  if (!in) throw herman::DataError("cannot open " + pred);
  double r1[3] = {0, 0, 0}, r2[3] = {0, 0, 0}, rl[3] = {0, 0, 0};
  std::vector<herman::TokenSeq> selected;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::string at = pred + ":" + std::to_string(line_no);
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j = json::parse(line, nullptr, false);
    if (j.is_discarded() || !j.is_object()) throw herman::DataError(at + ": invalid JSON");
    if (j.value("_type", "") == "header") continue;
    if (!j.contains("id") || !j.contains("selected_text"))
      throw herman::DataError(at + ": expected id and selected_text");
    std::string id = j["id"].get<std::string>();
    auto it = refs.find(id);
    if (it == refs.end()) throw herman::DataError(at + ": id \"" + id + "\" not in " + ref);

    herman::TokenSeq cand = herman::tokenize(j["selected_text"].get<std::string>());
    const herman::TokenSeq& gold = it->second->summary;
    auto add = [](double acc[3], const herman::RougeScore& s) {
      acc[0] += s.recall;
      acc[1] += s.precision;
      acc[2] += s.f1;
    };
    add(r1, herman::rouge_n(cand, gold, 1));
    add(r2, herman::rouge_n(cand, gold, 2));
    add(rl, herman::rouge_l(cand, gold));
    selected.push_back(std::move(cand));
  }
  if (selected.empty()) throw herman::DataError("no ranked records in " + pred);

  herman::FileHeader h = make_header(rc);
  json rep{{"header",
            {{"tool", "herman"},
             {"tool_version", h.tool_version},
             {"config_hash", h.config_hash},
             {"seed", h.seed}}},
           {"beams", selected.size()},
           {"rouge",
            {{"rouge-1", rouge_json(r1, selected.size())},
             {"rouge-2", rouge_json(r2, selected.size())},
             {"rouge-l", rouge_json(rl, selected.size())}}},
           {"avg_q", round2(herman::avg_q(selected))}};

  auto counts = herman::type_counts(selected);
  json by_type;
  for (std::size_t t = 0; t < herman::kNumQuantityTypes; ++t)
    by_type[herman::quantity_type_name(static_cast<herman::QuantityType>(t))] = counts[t];
  rep["type_counts"] = std::move(by_type);

  if (!dataset.empty()) {
    herman::HermanModel model = herman::HermanModel::load(checkpoint);
    auto instances = herman::read_dataset(dataset);
    std::vector<std::vector<herman::TagLabel>> pred_y, gold_y;
    std::vector<herman::ZLabel> pred_z, gold_z;
    for (const herman::LabeledInstance& inst : instances) {
      herman::HermanOutput o = model.verify(inst.record.article, inst.record.summary);
      pred_y.push_back(o.tag_sequence);
      std::vector<herman::TagLabel> y = inst.y;
      y.resize(o.tag_sequence.size(), herman::TagLabel::O);  // truncation-safe
      gold_y.push_back(std::move(y));
      pred_z.push_back(o.z_prob > 0.5 ? herman::ZLabel::Verified
                                      : herman::ZLabel::Unverified);
      gold_z.push_back(inst.z);
    }
    herman::TagReport tr = herman::tag_report(pred_y, gold_y, pred_z, gold_z);
    json labels;
    for (std::size_t l = 0; l < herman::kNumTagLabels; ++l) {
      const herman::LabelPRF& p = tr.per_label[l];
      labels[herman::tag_label_name(static_cast<herman::TagLabel>(l))] = {
          {"precision", round2(p.precision)},
          {"recall", round2(p.recall)},
          {"f1", round2(p.f1)}};
    }
    rep["tagging"] = {{"per_label", std::move(labels)},
                      {"z_accuracy", round2(tr.z_accuracy)},
                      {"z_f1", round2(tr.z_f1)}};
  }

  std::ofstream os(report, std::ios::trunc);
  if (!os) throw herman::DataError("cannot write " + report);
  os << rep.dump(2) << "\n";
  dump_config(report, rc);
  std::printf("evaluated %zu beams -> %s\n", selected.size(), report.c_str());
}

struct HyperFlag {
  const char* flag;
  const char* key;
  const char* help;
};

const HyperFlag kHyperFlags[] = {
    {"--hidden", "hidden", "encoder hidden size"},
    {"--embed", "embed", "word embedding width"},
    {"--vocab", "vocab", "vocabulary cap including the two reserved ids"},
    {"--alpha", "alpha", "tag loss weight in [0,1]; 1-alpha goes to the z loss"},
    {"--lr", "lr", "Adam learning rate"},
    {"--clip-norm", "clip_norm", "global gradient norm ceiling"},
    {"--batch-size", "batch_size", "training batch size"},
    {"--max-article", "max_article", "article token limit"},
    {"--max-summary", "max_summary", "summary token limit"},
    {"--loss-mode", "loss_mode", "tag loss: sequence or token-marginal"},
    {"--m-embed", "m_embed", "span mask embedding width"},
    {"--m-input", "m_input", "feed the mask embedding to the summary encoder (0/1)"},
    {"--m-feature", "m_feature", "append the mask scalar to emission features (0/1)"},
    {"--patience", "patience", "epochs to wait for validation improvement"},
    {"--max-epochs", "max_epochs", "epoch ceiling"},
    {"--embeddings", "embeddings", "pretrained embedding text file (word v1 ... vd)"},
};

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantity verification for abstractive summaries"};
  app.require_subcommand(1);

  std::string config_path;
  std::map<std::string, std::string> overrides;

  auto add_config = [&](CLI::App* cmd, bool hypers) {
    cmd->add_option("--config", config_path, "flat key=value configuration file");
    cmd->add_option_function<std::string>(
        "--seed", [&overrides](const std::string& v) { overrides["seed"] = v; }, "run seed");
    if (!hypers) return;
    for (const HyperFlag& f : kHyperFlags)
      cmd->add_option_function<std::string>(
          f.flag, [&overrides, key = f.key](const std::string& v) { overrides[key] = v; },
          f.help);
  };

  std::string in_path, out_path, log_path, checkpoint, ref_path, report_path, dataset_path;

  CLI::App* tagq = app.add_subcommand("tag-quantities", "extract quantity spans from a corpus");
  tagq->add_option("--corpus", in_path, "corpus JSONL")->required();
  tagq->add_option("--out", out_path, "span JSONL output")->required();
  add_config(tagq, false);

  CLI::App* gend = app.add_subcommand("gen-data", "synthesize weakly supervised instances");
  gend->add_option("--corpus", in_path, "corpus JSONL")->required();
  gend->add_option("--out", out_path, "labeled dataset JSONL output")->required();
  add_config(gend, false);

  CLI::App* train = app.add_subcommand("train", "train the verification model");
  train->add_option("--data", in_path, "labeled dataset JSONL")->required();
  train->add_option("--out", out_path, "checkpoint output")->required();
  train->add_option("--log", log_path, "training log JSONL (default: <out>.log.jsonl)");
  add_config(train, true);

  CLI::App* verify = app.add_subcommand("verify", "verify summaries against their articles");
  verify->add_option("--checkpoint", checkpoint, "trained checkpoint")->required();
  verify->add_option("--corpus", in_path, "corpus JSONL")->required();
  verify->add_option("--out", out_path, "verdict JSONL output")->required();
  add_config(verify, false);

  CLI::App* rerank = app.add_subcommand("rerank", "rescore candidate summary beams");
  rerank->add_option("--beams", in_path, "beam JSONL")->required();
  rerank->add_option("--checkpoint", checkpoint,
                     "trained checkpoint (required by the global and local scorers)");
  rerank->add_option("--out", out_path, "ranked beam JSONL output")->required();
  rerank->add_option_function<std::string>(
      "--scorer", [&overrides](const std::string& v) { overrides["scorer"] = v; },
      "global, local, shortest or max-overlap");
  add_config(rerank, false);

  CLI::App* eval = app.add_subcommand("evaluate", "report metrics for ranked beams");
  eval->add_option("--pred", in_path, "ranked beam JSONL")->required();
  eval->add_option("--ref", ref_path, "reference corpus JSONL")->required();
  eval->add_option("--report", report_path, "JSON report output")->required();
  eval->add_option("--dataset", dataset_path, "labeled dataset for tagging metrics");
  eval->add_option("--checkpoint", checkpoint, "checkpoint for tagging metrics");
  add_config(eval, false);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    RunConfig rc = resolve_config(config_path, overrides);
    if (app.got_subcommand(tagq)) cmd_tag_quantities(in_path, out_path, rc);
    else if (app.got_subcommand(gend)) cmd_gen_data(in_path, out_path, rc);
    else if (app.got_subcommand(train)) cmd_train(in_path, out_path, log_path, rc);
    else if (app.got_subcommand(verify)) cmd_verify(checkpoint, in_path, out_path, rc);
    else if (app.got_subcommand(rerank)) cmd_rerank(in_path, checkpoint, out_path, rc);
    else cmd_evaluate(in_path, ref_path, report_path, dataset_path, checkpoint, rc);
  } catch (const herman::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const herman::DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 3;
  } catch (const herman::NumericError& e) {
    std::fprintf(stderr, "numeric error: %s\n", e.what());
    return 4;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
