#include <doctest.h>

#include <set>
#include <string>
#include <vector>

#include "herman/errors.hpp"
#include "herman/labels.hpp"
#include "herman/quantity.hpp"
#include "herman/scoring.hpp"
#include "herman/synth.hpp"
#include "herman/tensor.hpp"
#include "herman/token.hpp"
#include "herman/toy.hpp"
#include "herman/vocab.hpp"

using namespace herman;

namespace {

Vocab corpus_vocab(const std::vector<CorpusRecord>& corpus) {
  VocabBuilder b;
  for (const CorpusRecord& r : corpus) {
    b.add_all(r.article);
    b.add_all(r.summary);
  }
  return b.build(300);
}

HermanModel tiny_model(const std::vector<CorpusRecord>& corpus) {
  HermanConfig cfg;
  cfg.hidden = 8;
  cfg.embed = 6;
  cfg.m_embed = 3;
  cfg.vocab = 300;
  cfg.max_article = 60;
  cfg.max_summary = 20;
  cfg.seed = 5;
  return HermanModel(cfg, corpus_vocab(corpus));
}

}  // namespace

TEST_CASE("local score averages verified-minus-unverified mass") {
  HermanOutput out;
  out.tag_marginals = Tensor::mat(3, kNumTagLabels);
  // position 0: p(B-V)=0.8, p(B-U)=0.1, rest elsewhere
  out.tag_marginals(0, 0) = 0.8;
  out.tag_marginals(0, 2) = 0.1;
  out.tag_marginals(0, 4) = 0.1;
  // position 1: pure O, masked out
  out.tag_marginals(1, 4) = 1.0;
  // position 2: p(I-V)=0.3, p(I-U)=0.6
  out.tag_marginals(2, 1) = 0.3;
  out.tag_marginals(2, 3) = 0.6;
  out.tag_marginals(2, 4) = 0.1;

  CHECK(score_local(out, {1, 0, 0}) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(score_local(out, {0, 0, 1}) == doctest::Approx(-0.3).epsilon(1e-12));
  CHECK(score_local(out, {1, 0, 1}) == doctest::Approx(0.2).epsilon(1e-12));
  // no quantity positions: neutral
  CHECK(score_local(out, {0, 0, 0}) == 0.0);
  CHECK_THROWS_AS(score_local(out, {1, 0}), DataError);

  out.z_prob = 0.42;
  CHECK(score_global(out) == doctest::Approx(0.42));
}

TEST_CASE("model-backed scorers need a model and baselines do not") {
  auto corpus = make_toy_corpus(10, 7);
  HermanModel model = tiny_model(corpus);

  Beam beam;
  beam.id = "b";
  beam.article_text = corpus[0].article_text;
  beam.candidates = {{corpus[0].summary_text, 0, {}}, {corpus[2].summary_text, 1, {}}};

  CHECK_THROWS_AS(rerank_with(nullptr, beam, Scorer::Global), ConfigError);
  CHECK_THROWS_AS(rerank_with(nullptr, beam, Scorer::Local), ConfigError);
  CHECK_NOTHROW(rerank_with(nullptr, beam, Scorer::Shortest));
  CHECK_NOTHROW(rerank_with(nullptr, beam, Scorer::MaxOverlap));

  // an untrained model still produces a complete, deterministic ranking
  RankedBeam g1 = rerank_with(&model, beam, Scorer::Global);
  RankedBeam g2 = rerank_with(&model, beam, Scorer::Global);
  REQUIRE(g1.scores.size() == 2);
  CHECK(g1.selected == g2.selected);
  CHECK(g1.scores == g2.scores);
  for (double s : g1.scores) {
    CHECK(s > 0.0);
    CHECK(s < 1.0);
  }
  RankedBeam l = rerank_with(&model, beam, Scorer::Local);
  for (double s : l.scores) {
    CHECK(s >= -1.0);
    CHECK(s <= 1.0);
  }

  CHECK_THROWS_AS(herman_scores(model, beam, Scorer::Shortest), ConfigError);
}

TEST_CASE("scorer names round-trip") {
  for (Scorer s : {Scorer::Global, Scorer::Local, Scorer::Shortest, Scorer::MaxOverlap}) {
    Scorer back = Scorer::Global;
    REQUIRE(scorer_from_name(scorer_name(s), back));
    CHECK(back == s);
  }
  Scorer out = Scorer::Global;
  CHECK(!scorer_from_name("no-such-scorer", out));
}

TEST_CASE("toy corpus is deterministic and structured as documented") {
  auto a = make_toy_corpus(100, 7);
  auto b = make_toy_corpus(100, 7);
  REQUIRE(a.size() == 100);
  for (std::size_t i = 0; i < a.size(); ++i) {
    CHECK(a[i].id == b[i].id);
    CHECK(a[i].article_text == b[i].article_text);
    CHECK(a[i].summary_text == b[i].summary_text);
  }
  CHECK(a[0].id == "toy-0000");
  CHECK(a[99].id == "toy-0099");
  // a different seed changes content but not structure
  auto c = make_toy_corpus(100, 8);
  bool any_diff = false;
  for (std::size_t i = 0; i < a.size(); ++i)
    if (a[i].article_text != c[i].article_text) any_diff = true;
  CHECK(any_diff);

  // every summary quantity matches the article by (type, normalized)
  for (const CorpusRecord& r : a) {
    auto art = tag_quantities(r.article);
    for (const auto& s : tag_quantities(r.summary)) {
      bool matched = false;
      for (const auto& as : art)
        if (as.qtype == s.qtype && as.normalized == s.normalized) matched = true;
      CHECK(matched);
    }
  }

  // every 25th record has no same-type alternative span, the rest have one
  // for each summary span
  for (std::size_t i = 0; i < a.size(); ++i) {
    auto art = tag_quantities(a[i].article);
    auto sum = tag_quantities(a[i].summary);
    bool perturbable = false;
    for (const auto& s : sum)
      for (const auto& as : art)
        if (as.qtype == s.qtype && as.normalized != s.normalized) perturbable = true;
    CHECK(perturbable == (i % 25 != 24));
  }
}

TEST_CASE("toy dataset yields one verified and one corrupted instance per usable record") {
  auto corpus = make_toy_corpus(100, 7);
  auto data = build_dataset(corpus, 7);
  CHECK(data.size() == 2 * (100 - 4));
  std::size_t ver = 0, unver = 0;
  for (const auto& inst : data) {
    inst.validate();
    (inst.z == ZLabel::Verified ? ver : unver)++;
  }
  CHECK(ver == 96);
  CHECK(unver == 96);
}

TEST_CASE("toy beams contain exactly one faithful candidate") {
  const std::size_t k = 5;
  auto beams = make_toy_beams(60, k, 8);
  REQUIRE(beams.size() == 60);
  std::set<std::size_t> faithful_positions;
  for (const ToyBeam& tb : beams) {
    REQUIRE(tb.beam.candidates.size() == k);
    faithful_positions.insert(tb.faithful);

    auto art_spans = tag_quantities(tokenize(tb.beam.article_text));
    std::size_t faithful_count = 0;
    std::set<std::string> texts;
    for (std::size_t i = 0; i < k; ++i) {
      const BeamCandidate& cand = tb.beam.candidates[i];
      CHECK(cand.beam_rank == static_cast<int>(i));
      texts.insert(cand.text);
      auto spans = tag_quantities(tokenize(cand.text));
      CHECK(!spans.empty());
      bool ok = true;
      for (const auto& s : spans) {
        bool matched = false;
        for (const auto& as : art_spans)
          if (as.qtype == s.qtype && as.normalized == s.normalized) matched = true;
        if (!matched) ok = false;
      }
      if (ok) {
        ++faithful_count;
        CHECK(i == tb.faithful);
      }
    }
    CHECK(faithful_count == 1);
    CHECK(texts.size() == k);  // corrupted candidates are all distinct
  }
  // the faithful candidate is not pinned to one rank
  CHECK(faithful_positions.size() > 1);

  CHECK_THROWS_AS(make_toy_beams(5, 1, 8), ConfigError);
  CHECK_THROWS_AS(make_toy_beams(5, 6, 8), ConfigError);
}
