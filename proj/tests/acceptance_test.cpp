// Release gate for the verification pipeline. Each check prints exactly one
// pass/fail line; the binary exits nonzero when any check fails or overruns
// its time budget. Tolerances and model dimensions are pinned here on
// purpose: loosening them is a release decision, not a refactor.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <iterator>
#include <utility>
#include <fstream>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "grad_check.hpp"
#include "herman/crf.hpp"
#include "herman/errors.hpp"
#include "herman/io.hpp"
#include "herman/labels.hpp"
#include "herman/layers.hpp"
#include "herman/metrics.hpp"
#include "herman/model.hpp"
#include "herman/quantity.hpp"
#include "herman/rerank.hpp"
#include "herman/rng.hpp"
#include "herman/scoring.hpp"
#include "herman/synth.hpp"
#include "herman/tape.hpp"
#include "herman/tensor.hpp"
#include "herman/token.hpp"
#include "herman/toy.hpp"
#include "herman/train.hpp"
#include "herman/vocab.hpp"

#ifndef HERMAN_DATA_DIR
#define HERMAN_DATA_DIR "data"
#endif

namespace {

using namespace herman;

struct Check {
  bool ok = false;
  std::string detail;
};

std::string fmt(const char* pattern, ...) {
  char buf[512];
  va_list args;
  va_start(args, pattern);
  std::vsnprintf(buf, sizeof(buf), pattern, args);
  va_end(args);
  return buf;
}

// The model trained by the quality check, reused by the re-ranking and
// O-row checks so the gate trains only once.
std::unique_ptr<HermanModel> g_trained;
DatasetSplit g_split;

// ---- check 1: constrained CRF inference vs exhaustive enumeration

double brute_score(const Tensor& emis, const Tensor& start, const Tensor& trans,
                   const Tensor& end, const std::vector<int>& y) {
  std::size_t n = y.size();
  double s = start(static_cast<std::size_t>(y[0])) + end(static_cast<std::size_t>(y[n - 1]));
  for (std::size_t j = 0; j < n; ++j) {
    s += emis(j, static_cast<std::size_t>(y[j]));
    if (j > 0) s += trans(static_cast<std::size_t>(y[j - 1]), static_cast<std::size_t>(y[j]));
  }
  return s;
}

bool brute_admissible(const std::vector<int>& y, const std::vector<std::uint8_t>& m) {
  for (std::size_t j = 0; j < y.size(); ++j) {
    TagLabel cur = static_cast<TagLabel>(y[j]);
    if (m[j] == 0 && cur != TagLabel::O) return false;
    if (m[j] == 1 && cur == TagLabel::O) return false;
    if (j == 0) {
      if (!tag_start_allowed(cur)) return false;
    } else if (!tag_transition_allowed(static_cast<TagLabel>(y[j - 1]), cur)) {
      return false;
    }
  }
  return true;
}

double logsumexp_of(const std::vector<double>& xs) {
  double hi = *std::max_element(xs.begin(), xs.end());
  double acc = 0.0;
  for (double x : xs) acc += std::exp(x - hi);
  return hi + std::log(acc);
}

Check check_crf_enumeration() {
  const int kInstances = 220;
  double worst_partition = 0.0, worst_marginal = 0.0, worst_constrained = 0.0;
  int decode_mismatches = 0;

  for (int i = 0; i < kInstances; ++i) {
    Rng r = Rng::keyed(2024, "accept/crf", static_cast<std::uint64_t>(i));
    std::size_t n = 1 + r.uniform_index(5);
    Tensor emis = Tensor::mat(n, kNumTagLabels);
    Tensor trans = Tensor::mat(kNumTagLabels, kNumTagLabels);
    Tensor start = Tensor::vec(kNumTagLabels);
    Tensor end = Tensor::vec(kNumTagLabels);
    for (double& v : emis.data) v = r.uniform(-2.0, 2.0);
    for (double& v : trans.data) v = r.uniform(-1.0, 1.0);
    for (double& v : start.data) v = r.uniform(-1.0, 1.0);
    for (double& v : end.data) v = r.uniform(-1.0, 1.0);
    std::vector<std::uint8_t> m(n);
    for (auto& b : m) b = static_cast<std::uint8_t>(r.uniform_index(2));

    // odometer over all 5^n label sequences
    std::vector<int> y(n, 0);
    std::vector<double> all_scores;
    Tensor marg = Tensor::mat(n, kNumTagLabels);
    Tensor cmarg = Tensor::mat(n, kNumTagLabels);
    std::vector<double> legal_scores;
    std::vector<std::vector<int>> legal_paths;
    for (;;) {
      double s = brute_score(emis, start, trans, end, y);
      all_scores.push_back(s);
      if (brute_admissible(y, m)) {
        legal_scores.push_back(s);
        legal_paths.push_back(y);
      }
      std::size_t j = 0;
      while (j < n && ++y[j] == kNumTagLabels) y[j++] = 0;
      if (j == n) break;
    }
    double log_z = logsumexp_of(all_scores);
    worst_partition = std::max(worst_partition,
                               std::fabs(crf_log_partition(emis, start, trans, end) - log_z));

    // unconstrained posteriors from the full enumeration
    {
      std::size_t idx = 0;
      std::vector<int> p(n, 0);
      for (;;) {
        double w = std::exp(all_scores[idx] - log_z);
        for (std::size_t j = 0; j < n; ++j)
          marg(j, static_cast<std::size_t>(p[j])) += w;
        ++idx;
        std::size_t j = 0;
        while (j < n && ++p[j] == kNumTagLabels) p[j++] = 0;
        if (j == n) break;
      }
    }
    Tensor got = crf_marginals(emis, start, trans, end);
    for (std::size_t k = 0; k < marg.size(); ++k)
      worst_marginal = std::max(worst_marginal, std::fabs(got.data[k] - marg.data[k]));

    // constrained posteriors and argmax over the legal sequences only
    double legal_z = logsumexp_of(legal_scores);
    std::size_t best = 0;
    for (std::size_t k = 0; k < legal_scores.size(); ++k) {
      double w = std::exp(legal_scores[k] - legal_z);
      for (std::size_t j = 0; j < n; ++j)
        cmarg(j, static_cast<std::size_t>(legal_paths[k][j])) += w;
      if (legal_scores[k] > legal_scores[best]) best = k;
    }
    Tensor cgot = crf_constrained_marginals(emis, start, trans, end, m);
    for (std::size_t k = 0; k < cmarg.size(); ++k)
      worst_constrained = std::max(worst_constrained, std::fabs(cgot.data[k] - cmarg.data[k]));

    std::vector<TagLabel> path = crf_viterbi(emis, start, trans, end, m);
    for (std::size_t j = 0; j < n; ++j)
      if (static_cast<int>(path[j]) != legal_paths[best][j]) {
        ++decode_mismatches;
        break;
      }
  }

  bool ok = worst_partition <= 1e-8 && worst_marginal <= 1e-8 && worst_constrained <= 1e-8 &&
            decode_mismatches == 0;
  return {ok, fmt("%d instances, partition err %.1e, marginal err %.1e/%.1e, "
                  "decode mismatches %d",
                  kInstances, worst_partition, worst_marginal, worst_constrained,
                  decode_mismatches)};
}

// ---- check 2: finite-difference gradients for every layer and the full loss

Check check_gradient_suite() {
  const std::uint64_t seed = 17;
  std::vector<std::string> failed;
  std::size_t checked = 0;
  double worst = 0.0;

  auto run_layer = [&](const char* name, ParamStore& store,
                       const testing::LossBuilder& build) {
    auto res = testing::check_gradients(store, build, 1e-5, 1e-4);
    checked += res.checked;
    worst = std::max(worst, res.worst_rel);
    if (!res.ok) failed.push_back(std::string(name) + "/" + res.worst_param);
  };

  {
    ParamStore store;
    add_matrix_param(store, "embed", 10, 6, seed);
    std::vector<std::size_t> ids = {2, 5, 2, 7};
    run_layer("embedding", store, [&](Tape& t) {
      std::vector<Tape::NodeId> terms;
      for (std::size_t id : ids) {
        Tape::NodeId row = t.param_row("embed", id);
        terms.push_back(t.dot(row, row));
      }
      return t.sum_scalars(terms);
    });
  }
  {
    ParamStore store;
    add_lstm_params(store, "cell", 6, 8, seed);
    add_vector_param(store, "x", 6, seed + 1);
    add_vector_param(store, "h0", 8, seed + 2);
    add_vector_param(store, "c0", 8, seed + 3);
    run_layer("lstm step", store, [&](Tape& t) {
      LstmState prev{t.param("h0"), t.param("c0")};
      LstmState s = lstm_step(t, "cell", t.param("x"), prev);
      return t.sum_scalars({t.dot(s.h, s.h), t.dot(s.c, s.c)});
    });
  }
  {
    ParamStore store;
    add_bilstm_params(store, "enc", 6, 8, seed);
    for (int j = 0; j < 3; ++j)
      add_vector_param(store, "x" + std::to_string(j), 6, seed + 10 + static_cast<std::uint64_t>(j));
    run_layer("bilstm", store, [&](Tape& t) {
      std::vector<Tape::NodeId> xs = {t.param("x0"), t.param("x1"), t.param("x2")};
      std::vector<Tape::NodeId> outs = bilstm(t, "enc", xs);
      std::vector<Tape::NodeId> terms;
      for (Tape::NodeId o : outs) terms.push_back(t.dot(o, o));
      return t.sum_scalars(terms);
    });
  }
  {
    ParamStore store;
    add_attention_params(store, "att", 8, 8, 6, seed);
    add_vector_param(store, "q", 8, seed + 20);
    for (int j = 0; j < 4; ++j)
      add_vector_param(store, "k" + std::to_string(j), 6, seed + 30 + static_cast<std::uint64_t>(j));
    run_layer("attention", store, [&](Tape& t) {
      std::vector<Tape::NodeId> keys = {t.param("k0"), t.param("k1"), t.param("k2"),
                                        t.param("k3")};
      Tape::NodeId keys_matrix = t.stack_rows(keys);
      Tape::NodeId projected = project_keys(t, "att", keys);
      Attended a = attend(t, "att", t.param("q"), keys_matrix, projected);
      return t.sum_scalars({t.dot(a.context, a.context), t.dot(a.weights, a.weights)});
    });
  }
  {
    ParamStore store;
    add_mlp_params(store, "z", 6, 8, seed);
    add_vector_param(store, "x", 6, seed + 40);
    run_layer("mlp", store, [&](Tape& t) {
      return t.bce_with_logit(mlp_logit(t, "z", t.param("x")), 1.0);
    });
  }
  {
    ParamStore store;
    for (int j = 0; j < 4; ++j)
      add_vector_param(store, "e" + std::to_string(j), kNumTagLabels,
                       seed + 50 + static_cast<std::uint64_t>(j));
    add_vector_param(store, "start", kNumTagLabels, seed + 60);
    add_vector_param(store, "end", kNumTagLabels, seed + 61);
    add_matrix_param(store, "trans", kNumTagLabels, kNumTagLabels, seed + 62);
    std::vector<TagLabel> y = {TagLabel::BV, TagLabel::IV, TagLabel::O, TagLabel::BU};
    run_layer("crf sequence nll", store, [&](Tape& t) {
      std::vector<Tape::NodeId> emis = {t.param("e0"), t.param("e1"), t.param("e2"),
                                        t.param("e3")};
      return crf_nll_on_tape(t, emis, t.param("start"), t.param("trans"), t.param("end"), y);
    });
    run_layer("crf token nll", store, [&](Tape& t) {
      std::vector<Tape::NodeId> emis = {t.param("e0"), t.param("e1"), t.param("e2"),
                                        t.param("e3")};
      return crf_token_nll_on_tape(t, emis, t.param("start"), t.param("trans"), t.param("end"),
                                   y);
    });
  }

  // full combined loss on a short record, both loss modes and both mask
  // injection points exercised
  {
    CorpusRecord rec =
        CorpusRecord::from_text("g", "Nine people hurt in Leeds.", "Nine people hurt.");
    VocabBuilder vb;
    vb.add_all(rec.article);
    vb.add_all(rec.summary);
    Vocab vocab = vb.build(30);

    LabeledInstance verified;
    verified.record = rec;
    verified.m = span_mask(rec.summary);
    verified.y.assign(rec.summary.size(), TagLabel::O);
    verified.y[0] = TagLabel::BV;
    verified.z = ZLabel::Verified;
    verified.validate();

    LabeledInstance unverified = verified;
    unverified.y[0] = TagLabel::BU;
    unverified.z = ZLabel::Unverified;
    unverified.validate();

    struct Variant {
      const char* name;
      LossMode mode;
      bool m_input, m_feature;
      const LabeledInstance* inst;
    };
    const Variant variants[] = {
        {"combined sequence loss", LossMode::Sequence, true, true, &verified},
        {"combined token loss", LossMode::TokenMarginal, true, true, &unverified},
        {"combined loss, mask embedding off", LossMode::Sequence, false, true, &unverified},
        {"combined loss, mask feature off", LossMode::Sequence, true, false, &verified},
    };
    for (const Variant& v : variants) {
      HermanConfig cfg;
      cfg.hidden = 8;
      cfg.embed = 6;
      cfg.vocab = 30;
      cfg.m_embed = 3;
      cfg.max_article = 60;
      cfg.max_summary = 20;
      cfg.seed = 5;
      cfg.loss_mode = v.mode;
      cfg.m_input = v.m_input;
      cfg.m_feature = v.m_feature;
      HermanModel model(cfg, vocab);
      auto build = [&](Tape& t) { return model.instance_loss_graph(t, *v.inst); };
      run_layer(v.name, model.params(), build);
    }
  }

  if (!failed.empty())
    return {false, fmt("%zu elements checked, failures: %s (worst rel err %.2e)", checked,
                       failed.front().c_str(), worst)};
  return {true, fmt("%zu parameter elements across 10 graphs, all within rel tol 1e-4", checked)};
}

// ---- check 3: invariants of the synthesized datasets

// Independent replaceability oracle: a summary span can be replaced when the
// article has a same-type span with a different normalized value.
bool has_replaceable_span(const CorpusRecord& rec) {
  auto art = tag_quantities(rec.article);
  for (const QuantitySpan& s : tag_quantities(rec.summary))
    for (const QuantitySpan& a : art)
      if (a.qtype == s.qtype && a.normalized != s.normalized) return true;
  return false;
}

std::string file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Check check_synthesis_invariants() {
  struct CorpusSpec {
    const char* name;
    std::size_t count;
    std::uint64_t seed;
  };
  const CorpusSpec corpora[] = {{"toy", 500, 7}, {"fuzz-a", 120, 99}, {"fuzz-b", 80, 31415}};

  std::size_t pairs_total = 0, discarded_total = 0;
  for (const CorpusSpec& cs : corpora) {
    auto corpus = make_toy_corpus(cs.count, cs.seed);
    auto data = build_dataset(corpus, cs.seed);

    std::size_t n_verified = 0, n_unverified = 0;
    std::map<std::string, std::vector<const LabeledInstance*>> by_id;
    for (const LabeledInstance& inst : data) {
      inst.validate();
      (inst.z == ZLabel::Verified ? n_verified : n_unverified) += 1;
      by_id[inst.record.id].push_back(&inst);
    }
    if (n_verified != n_unverified)
      return {false, fmt("%s: %zu verified vs %zu unverified", cs.name, n_verified, n_unverified)};

    std::set<std::string> kept_ids;
    for (auto& [id, group] : by_id) {
      kept_ids.insert(id);
      if (group.size() != 2)
        return {false, fmt("%s: record %s has %zu instances", cs.name, id.c_str(), group.size())};
      const LabeledInstance* ver = group[0]->z == ZLabel::Verified ? group[0] : group[1];
      const LabeledInstance* unv = group[0]->z == ZLabel::Verified ? group[1] : group[0];
      if (ver->z != ZLabel::Verified || unv->z != ZLabel::Unverified)
        return {false, fmt("%s: record %s lacks a verified/unverified pair", cs.name, id.c_str())};

      auto vspans = tag_quantities(ver->record.summary);
      auto uspans = tag_quantities(unv->record.summary);
      if (vspans.size() != uspans.size())
        return {false, fmt("%s: %s sibling span counts differ", cs.name, id.c_str())};
      std::size_t changed = 0;
      for (std::size_t k = 0; k < vspans.size(); ++k) {
        if (uspans[k].qtype != vspans[k].qtype)
          return {false, fmt("%s: %s replacement changed the quantity type", cs.name, id.c_str())};
        if (uspans[k].normalized != vspans[k].normalized) ++changed;
      }
      if (changed == 0)
        return {false, fmt("%s: %s unverified sibling matches its verified one", cs.name,
                           id.c_str())};
      ++pairs_total;
    }

    for (const CorpusRecord& rec : corpus) {
      bool kept = kept_ids.count(rec.id) > 0;
      if (kept != has_replaceable_span(rec))
        return {false, fmt("%s: discard rule disagrees with replaceability on %s", cs.name,
                           rec.id.c_str())};
      if (!kept) ++discarded_total;
    }

    // a rerun with the same seed must serialize to the same bytes
    FileHeader header{"gate", "0", cs.seed};
    const std::string pa = "accept_synth_a.jsonl", pb = "accept_synth_b.jsonl";
    write_dataset(pa, data, header);
    write_dataset(pb, build_dataset(corpus, cs.seed), header);
    bool same = file_bytes(pa) == file_bytes(pb);
    std::remove(pa.c_str());
    std::remove(pb.c_str());
    if (!same) return {false, fmt("%s: rerun with seed %llu is not byte-identical", cs.name,
                                  static_cast<unsigned long long>(cs.seed))};
  }
  return {true, fmt("3 corpora, %zu balanced pairs, %zu records discarded, reruns byte-identical",
                    pairs_total, discarded_total)};
}

// ---- check 4: end-to-end training quality on the bundled corpus

Vocab vocab_from_instances(const std::vector<LabeledInstance>& instances, std::size_t cap) {
  VocabBuilder b;
  for (const LabeledInstance& inst : instances) {
    b.add_all(inst.record.article);
    b.add_all(inst.record.summary);
  }
  return b.build(cap);
}

TagReport evaluate_split(const HermanModel& model, const std::vector<LabeledInstance>& split,
                         bool* aligned) {
  std::vector<std::vector<TagLabel>> pred, gold;
  std::vector<ZLabel> pred_z, gold_z;
  *aligned = true;
  for (const LabeledInstance& inst : split) {
    HermanOutput out = model.verify(inst.record.article, inst.record.summary);
    if (out.truncated || out.tag_sequence.size() != inst.y.size()) *aligned = false;
    pred.push_back(out.tag_sequence);
    gold.push_back(inst.y);
    pred_z.push_back(out.z_prob > 0.5 ? ZLabel::Verified : ZLabel::Unverified);
    gold_z.push_back(inst.z);
  }
  return tag_report(pred, gold, pred_z, gold_z);
}

Check check_training_quality() {
  const std::string path = std::string(HERMAN_DATA_DIR) + "/toy_corpus.jsonl";
  std::vector<CorpusRecord> corpus;
  try {
    corpus = read_corpus(path);
  } catch (const DataError& e) {
    return {false, fmt("cannot read %s: %s", path.c_str(), e.what())};
  }
  auto regenerated = make_toy_corpus(corpus.size(), 7);
  for (std::size_t i = 0; i < corpus.size(); ++i)
    if (corpus[i].id != regenerated[i].id || corpus[i].article_text != regenerated[i].article_text ||
        corpus[i].summary_text != regenerated[i].summary_text)
      return {false, fmt("bundled corpus record %zu does not match its generator", i)};

  auto data = build_dataset(corpus, 7);
  g_split = split_dataset(std::move(data), 7);

  HermanConfig cfg;
  cfg.hidden = 32;
  cfg.embed = 16;
  cfg.m_embed = 8;
  cfg.vocab = 500;
  cfg.max_article = 60;
  cfg.max_summary = 20;
  cfg.batch_size = 32;
  cfg.lr = 0.005;
  cfg.max_epochs = 10;
  cfg.seed = 7;
  Vocab vocab = vocab_from_instances(g_split.train, cfg.vocab);
  g_trained = std::make_unique<HermanModel>(cfg, vocab);
  TrainResult result = train_model(*g_trained, g_split.train, g_split.val);

  bool aligned = true;
  TagReport report = evaluate_split(*g_trained, g_split.test, &aligned);
  double bu_f1 = report.per_label[static_cast<std::size_t>(TagLabel::BU)].f1;
  bool ok = aligned && report.z_accuracy >= 90.0 && bu_f1 >= 80.0;
  return {ok, fmt("%zu/%zu/%zu split, %zu epochs, held-out z accuracy %.2f%% (need 90), "
                  "B-U F1 %.2f%% (need 80)",
                  g_split.train.size(), g_split.val.size(), g_split.test.size(),
                  result.log.size(), report.z_accuracy, bu_f1)};
}

// ---- check 5: the trained scorers recover the faithful candidate

Check check_reranking() {
  if (!g_trained) return {false, "no trained model available"};
  auto beams = make_toy_beams(200, 5, 8);
  std::size_t global_hits = 0, local_hits = 0;
  for (const ToyBeam& tb : beams) {
    if (rerank_with(g_trained.get(), tb.beam, Scorer::Global).selected == tb.faithful)
      ++global_hits;
    if (rerank_with(g_trained.get(), tb.beam, Scorer::Local).selected == tb.faithful)
      ++local_hits;
  }
  double global_rate = 100.0 * static_cast<double>(global_hits) / beams.size();
  double local_rate = 100.0 * static_cast<double>(local_hits) / beams.size();
  bool ok = global_rate >= 85.0 && local_rate >= 75.0;
  return {ok, fmt("%zu beams of 5, global %zu (%.1f%%, need 85), local %zu (%.1f%%, need 75)",
                  beams.size(), global_hits, global_rate, local_hits, local_rate)};
}

// ---- check 6: the O row of the tag report is exact, not merely close

Check check_o_row_exact() {
  if (!g_trained) return {false, "no trained model available"};

  auto o_row_exact = [](const TagReport& report) {
    const LabelPRF& o = report.per_label[static_cast<std::size_t>(TagLabel::O)];
    return o.precision == 100.0 && o.recall == 100.0 && o.f1 == 100.0;
  };

  bool aligned = true;
  TagReport trained = evaluate_split(*g_trained, g_split.test, &aligned);
  if (!aligned) return {false, "length mismatch between predictions and labels"};
  if (!o_row_exact(trained)) {
    const LabelPRF& o = trained.per_label[static_cast<std::size_t>(TagLabel::O)];
    return {false, fmt("trained model O row %.10f/%.10f/%.10f", o.precision, o.recall, o.f1)};
  }

  // holds before any training too: the shared mask pins O on both sides
  HermanConfig cfg = g_trained->config();
  cfg.seed = 99;
  HermanModel untrained(cfg, g_trained->vocab());
  std::vector<LabeledInstance> head(g_split.test.begin(),
                                    g_split.test.begin() + std::min<std::size_t>(60, g_split.test.size()));
  TagReport fresh = evaluate_split(untrained, head, &aligned);
  if (!aligned) return {false, "length mismatch on the untrained pass"};
  if (!o_row_exact(fresh)) {
    const LabelPRF& o = fresh.per_label[static_cast<std::size_t>(TagLabel::O)];
    return {false, fmt("untrained model O row %.10f/%.10f/%.10f", o.precision, o.recall, o.f1)};
  }
  return {true, fmt("O row exactly 100/100/100 on %zu trained and %zu untrained evaluations",
                    g_split.test.size(), head.size())};
}

// ---- check 7: rouge against hand-enumerated cases plus swap duality

Check check_rouge() {
  auto toks = [](const char* text) { return tokenize(text); };
  enum Kind { R1, R2, RL };
  struct Case {
    const char* cand;
    const char* ref;
    Kind kind;
    double recall, precision, f1;
  };
  // hand-enumerated: counts done on paper, fractions left as expressions
  const Case cases[] = {
      {"the cat sat", "the cat sat", R1, 1.0, 1.0, 1.0},
      {"the cat sat", "the cat sat", R2, 1.0, 1.0, 1.0},
      {"the cat sat", "the cat sat", RL, 1.0, 1.0, 1.0},
      {"a b d", "a b c", R1, 2.0 / 3.0, 2.0 / 3.0, 2.0 / 3.0},
      {"a b c", "a b c d", R2, 2.0 / 3.0, 1.0, 0.8},
      {"the the the the", "the the cat", R1, 2.0 / 3.0, 0.5, 4.0 / 7.0},
      {"a b", "c d", R1, 0.0, 0.0, 0.0},
      {"b d", "a b c d", R1, 0.5, 1.0, 2.0 / 3.0},
      {"a c b d", "a b c d", RL, 0.75, 0.75, 0.75},
      {"a x b y", "a b", RL, 1.0, 0.5, 2.0 / 3.0},
  };
  double worst = 0.0;
  for (const Case& c : cases) {
    RougeScore got = c.kind == R1   ? rouge_n(toks(c.cand), toks(c.ref), 1)
                     : c.kind == R2 ? rouge_n(toks(c.cand), toks(c.ref), 2)
                                    : rouge_l(toks(c.cand), toks(c.ref));
    worst = std::max({worst, std::fabs(got.recall - c.recall),
                      std::fabs(got.precision - c.precision), std::fabs(got.f1 - c.f1)});
  }
  if (worst > 1e-12) return {false, fmt("hand-case error %.3e exceeds 1e-12", worst)};

  // swapping candidate and reference swaps precision and recall and leaves
  // the harmonic mean alone
  const char* alphabet[] = {"a", "b", "c", "d", "e", "f"};
  double worst_dual = 0.0;
  for (int i = 0; i < 1000; ++i) {
    Rng r = Rng::keyed(2024, "accept/rouge", static_cast<std::uint64_t>(i));
    auto sample = [&]() {
      std::string text;
      std::size_t len = r.uniform_index(13);
      for (std::size_t j = 0; j < len; ++j) {
        if (!text.empty()) text += ' ';
        text += alphabet[r.uniform_index(6)];
      }
      return tokenize(text);
    };
    TokenSeq a = sample(), b = sample();
    const auto pairs = {
        std::pair<RougeScore, RougeScore>{rouge_n(a, b, 1), rouge_n(b, a, 1)},
        std::pair<RougeScore, RougeScore>{rouge_n(a, b, 2), rouge_n(b, a, 2)},
        std::pair<RougeScore, RougeScore>{rouge_l(a, b), rouge_l(b, a)},
    };
    for (const auto& [fwd, rev] : pairs) {
      worst_dual = std::max({worst_dual, std::fabs(fwd.precision - rev.recall),
                             std::fabs(fwd.recall - rev.precision), std::fabs(fwd.f1 - rev.f1)});
    }
  }
  bool ok = worst_dual <= 1e-12;
  return {ok, fmt("10 hand cases err %.1e, duality on 1000 fuzzed pairs err %.1e", worst,
                  worst_dual)};
}

// ---- check 8: seeded reruns and checkpoint round-trips

Check check_determinism() {
  auto corpus = make_toy_corpus(120, 11);
  auto split = split_dataset(build_dataset(corpus, 11), 11);

  HermanConfig cfg;
  cfg.hidden = 16;
  cfg.embed = 8;
  cfg.m_embed = 4;
  cfg.vocab = 300;
  cfg.max_article = 60;
  cfg.max_summary = 20;
  cfg.batch_size = 32;
  cfg.lr = 0.005;
  cfg.max_epochs = 3;
  cfg.seed = 11;
  Vocab vocab = vocab_from_instances(split.train, cfg.vocab);

  HermanModel first(cfg, vocab);
  TrainResult run1 = train_model(first, split.train, split.val);
  HermanModel second(cfg, vocab);
  TrainResult run2 = train_model(second, split.train, split.val);

  if (run1.log.size() != run2.log.size())
    return {false, fmt("epoch counts differ: %zu vs %zu", run1.log.size(), run2.log.size())};
  for (std::size_t e = 0; e < run1.log.size(); ++e)
    if (run1.log[e].train_loss != run2.log[e].train_loss ||
        run1.log[e].val_loss != run2.log[e].val_loss)
      return {false, fmt("epoch %zu losses differ across identical seeds", e + 1)};
  if (run1.best_epoch != run2.best_epoch || run1.best_val_loss != run2.best_val_loss)
    return {false, "best-epoch selection differs across identical seeds"};

  const std::string ckpt = "accept_roundtrip.hrmn";
  first.save(ckpt);
  HermanModel loaded = HermanModel::load(ckpt);
  std::remove(ckpt.c_str());

  std::size_t vocab_size = vocab.size();
  for (int i = 0; i < 50; ++i) {
    Rng r = Rng::keyed(2024, "accept/roundtrip", static_cast<std::uint64_t>(i));
    std::vector<int> article(1 + r.uniform_index(cfg.max_article));
    std::vector<int> summary(1 + r.uniform_index(cfg.max_summary));
    for (int& id : article) id = static_cast<int>(r.uniform_index(vocab_size));
    for (int& id : summary) id = static_cast<int>(r.uniform_index(vocab_size));
    std::vector<std::uint8_t> m(summary.size());
    for (auto& b : m) b = static_cast<std::uint8_t>(r.uniform_index(2));

    auto [emis_a, z_a] = first.forward(article, summary, m);
    auto [emis_b, z_b] = loaded.forward(article, summary, m);
    if (z_a != z_b || emis_a.data != emis_b.data)
      return {false, fmt("round-trip forward diverges on input %d", i)};
  }
  return {true, fmt("%zu epochs bit-identical across reruns, 50 round-trip forwards bit-identical",
                    run1.log.size())};
}

}  // namespace

int main() {
  struct Entry {
    const char* name;
    double budget_secs;  // 0 = no pinned budget
    std::function<Check()> fn;
  };
  const Entry entries[] = {
      {"constrained tag inference matches exhaustive enumeration", 30, check_crf_enumeration},
      {"every layer and the combined loss pass finite-difference checks", 120,
       check_gradient_suite},
      {"synthesized datasets keep their construction invariants", 10, check_synthesis_invariants},
      {"training on the bundled corpus reaches the quality bar", 600, check_training_quality},
      {"trained scorers recover the faithful beam candidate", 60, check_reranking},
      {"the O row of the tag report is exact", 0, check_o_row_exact},
      {"rouge matches hand-enumerated scores and swap duality", 0, check_rouge},
      {"seeded reruns and checkpoint round-trips are bit-identical", 0, check_determinism},
  };

  int failed = 0;
  for (const Entry& entry : entries) {
    auto t0 = std::chrono::steady_clock::now();
    Check c;
    try {
      c = entry.fn();
    } catch (const std::exception& e) {
      c.ok = false;
      c.detail = std::string("unexpected exception: ") + e.what();
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    bool in_budget = entry.budget_secs == 0 || secs <= entry.budget_secs;
    bool ok = c.ok && in_budget;
    std::printf("[%s] %s: %s (%.1fs%s)\n", ok ? "PASS" : "FAIL", entry.name, c.detail.c_str(),
                secs, in_budget ? "" : ", over budget");
    std::fflush(stdout);
    if (!ok) ++failed;
  }
  std::printf("%d of %zu checks passed\n", static_cast<int>(std::size(entries)) - failed,
              std::size(entries));
  return failed == 0 ? 0 : 1;
}
