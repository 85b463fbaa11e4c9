#include "herman/synth.hpp"

#include <algorithm>
#include <exception>
#include <unordered_set>
#include <utility>

#include "herman/parallel.hpp"
#include "herman/quantity.hpp"
#include "herman/rng.hpp"

namespace herman {

namespace {

void append_span_labels(std::vector<TagLabel>& y, std::vector<std::uint8_t>& m,
                        std::size_t span_len, bool verified) {
  for (std::size_t j = 0; j < span_len; ++j) {
    if (j == 0)
      y.push_back(verified ? TagLabel::BV : TagLabel::BU);
    else
      y.push_back(verified ? TagLabel::IV : TagLabel::IU);
    m.push_back(1);
  }
}

}  // namespace

LabeledInstance label_verified(const CorpusRecord& record) {
  LabeledInstance inst;
  inst.record = record;
  inst.z = ZLabel::Verified;
  inst.y.assign(record.summary.size(), TagLabel::O);
  inst.m.assign(record.summary.size(), 0);
  for (const QuantitySpan& span : tag_quantities(record.summary)) {
    for (std::size_t j = span.token_start; j < span.token_end; ++j) {
      inst.y[j] = j == span.token_start ? TagLabel::BV : TagLabel::IV;
      inst.m[j] = 1;
    }
  }
  inst.validate();
  return inst;
}

std::optional<LabeledInstance> perturb(const CorpusRecord& record, std::uint64_t rng_seed) {
  const std::vector<QuantitySpan> summary_spans = tag_quantities(record.summary);
  const std::vector<QuantitySpan> article_spans = tag_quantities(record.article);

  // Replacement pool per summary span: article spans of the same type whose
  // normalized form differs, deduplicated by normalized form in article order.
  std::vector<std::vector<const QuantitySpan*>> pools(summary_spans.size());
  bool any_replaceable = false;
  for (std::size_t k = 0; k < summary_spans.size(); ++k) {
    std::unordered_set<std::string> seen;
    for (const QuantitySpan& cand : article_spans) {
      if (cand.qtype != summary_spans[k].qtype) continue;
      if (cand.normalized == summary_spans[k].normalized) continue;
      if (!seen.insert(cand.normalized).second) continue;
      pools[k].push_back(&cand);
    }
    if (!pools[k].empty()) any_replaceable = true;
  }
  if (!any_replaceable) return std::nullopt;

  std::vector<std::string> texts;
  std::vector<TagLabel> y;
  std::vector<std::uint8_t> m;
  std::size_t next = 0;  // next original summary token to copy
  for (std::size_t k = 0; k < summary_spans.size(); ++k) {
    const QuantitySpan& span = summary_spans[k];
    for (; next < span.token_start; ++next) {
      texts.push_back(record.summary[next].text);
      y.push_back(TagLabel::O);
      m.push_back(0);
    }
    if (pools[k].empty()) {
      for (; next < span.token_end; ++next) texts.push_back(record.summary[next].text);
      append_span_labels(y, m, span.token_end - span.token_start, true);
    } else {
      Rng rng = Rng::keyed(rng_seed, record.id, k);
      const QuantitySpan& repl = *pools[k][rng.uniform_index(pools[k].size())];
      for (std::size_t j = repl.token_start; j < repl.token_end; ++j)
        texts.push_back(record.article[j].text);
      append_span_labels(y, m, repl.token_end - repl.token_start, false);
      next = span.token_end;
    }
  }
  for (; next < record.summary.size(); ++next) {
    texts.push_back(record.summary[next].text);
    y.push_back(TagLabel::O);
    m.push_back(0);
  }

  LabeledInstance inst;
  inst.record.id = record.id;
  inst.record.article_text = record.article_text;
  inst.record.article = record.article;
  std::tie(inst.record.summary_text, inst.record.summary) = layout_tokens(texts);
  inst.y = std::move(y);
  inst.m = std::move(m);
  inst.z = ZLabel::Unverified;
  inst.validate();
  return inst;
}

std::vector<LabeledInstance> build_dataset(const std::vector<CorpusRecord>& corpus,
                                           std::uint64_t rng_seed) {
  std::vector<std::size_t> order(corpus.size());
  for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return corpus[a].id < corpus[b].id;
  });

  std::vector<std::optional<LabeledInstance>> negatives(corpus.size());
  std::exception_ptr failure;
  const long n = static_cast<long>(corpus.size());
#pragma omp parallel for schedule(static) num_threads(threads_for(corpus.size(), 4096))
  for (long i = 0; i < n; ++i) {
    try {
      negatives[i] = perturb(corpus[order[i]], rng_seed);
    } catch (...) {
#pragma omp critical
      if (!failure) failure = std::current_exception();
    }
  }
  if (failure) std::rethrow_exception(failure);

  std::vector<LabeledInstance> out;
  for (long i = 0; i < n; ++i) {
    if (!negatives[i]) continue;
    out.push_back(label_verified(corpus[order[i]]));
    out.push_back(std::move(*negatives[i]));
  }
  return out;
}

}  // namespace herman
