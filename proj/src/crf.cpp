#include "herman/crf.hpp"

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <limits>

#include "herman/errors.hpp"

namespace herman {
namespace {

constexpr double kNegInf = -std::numeric_limits<double>::infinity();

double lse(const std::vector<double>& x) {
  double mx = kNegInf;
  for (double v : x) mx = std::max(mx, v);
  if (mx == kNegInf) return kNegInf;
  double s = 0.0;
  for (double v : x) s += std::exp(v - mx);
  return mx + std::log(s);
}

void check_inputs(const Tensor& emissions, const Tensor& start, const Tensor& trans,
                  const Tensor& end) {
  if (emissions.rank() != 2 || emissions.rows() == 0) throw DataError("crf: emissions must be a non-empty matrix");
  std::size_t labels = emissions.cols();
  if (start.rank() != 1 || start.size() != labels) throw DataError("crf: start size mismatch");
  if (end.rank() != 1 || end.size() != labels) throw DataError("crf: end size mismatch");
  if (trans.rank() != 2 || trans.rows() != labels || trans.cols() != labels)
    throw DataError("crf: transition shape mismatch");
}

void check_labels(const std::vector<TagLabel>& y, std::size_t n, std::size_t labels) {
  if (y.size() != n) throw DataError("crf: label sequence length mismatch");
  for (TagLabel l : y) {
    std::size_t v = static_cast<std::size_t>(l);
    if (v >= labels) throw DataError("crf: label out of range");
  }
}

// Position mask for the constrained lattice: m_j = 0 pins O, m_j = 1 pins a
// span tag.
bool position_allows(const std::vector<std::uint8_t>& m, std::size_t j, std::size_t label) {
  bool is_o = label == static_cast<std::size_t>(TagLabel::O);
  return m[j] ? !is_o : is_o;
}

}  // namespace

bool tag_start_allowed(TagLabel to) { return !is_inside(to); }

bool tag_transition_allowed(TagLabel from, TagLabel to) {
  if (to == TagLabel::IV) return from == TagLabel::BV || from == TagLabel::IV;
  if (to == TagLabel::IU) return from == TagLabel::BU || from == TagLabel::IU;
  return true;
}

double crf_score(const Tensor& emissions, const Tensor& start, const Tensor& trans,
                 const Tensor& end, const std::vector<TagLabel>& y) {
  check_inputs(emissions, start, trans, end);
  std::size_t n = emissions.rows();
  check_labels(y, n, emissions.cols());
  double s = start(static_cast<std::size_t>(y[0]));
  for (std::size_t j = 0; j < n; ++j) s += emissions(j, static_cast<std::size_t>(y[j]));
  for (std::size_t j = 1; j < n; ++j)
    s += trans(static_cast<std::size_t>(y[j - 1]), static_cast<std::size_t>(y[j]));
  return s + end(static_cast<std::size_t>(y[n - 1]));
}

double crf_log_partition(const Tensor& emissions, const Tensor& start, const Tensor& trans,
                         const Tensor& end) {
  check_inputs(emissions, start, trans, end);
  std::size_t n = emissions.rows(), labels = emissions.cols();
  std::vector<double> alpha(labels), next(labels), terms(labels);
  for (std::size_t l = 0; l < labels; ++l) alpha[l] = start(l) + emissions(0, l);
  for (std::size_t j = 1; j < n; ++j) {
    for (std::size_t l = 0; l < labels; ++l) {
      for (std::size_t k = 0; k < labels; ++k) terms[k] = alpha[k] + trans(k, l);
      next[l] = lse(terms) + emissions(j, l);
    }
    alpha.swap(next);
  }
  for (std::size_t l = 0; l < labels; ++l) alpha[l] += end(l);
  return lse(alpha);
}

double crf_nll(const Tensor& emissions, const Tensor& start, const Tensor& trans,
               const Tensor& end, const std::vector<TagLabel>& y) {
  return crf_log_partition(emissions, start, trans, end) -
         crf_score(emissions, start, trans, end, y);
}

namespace {

// Shared forward-backward. When constrained is true the lattice drops
// scheme-violating transitions and mask-violating positions.
Tensor forward_backward(const Tensor& emissions, const Tensor& start, const Tensor& trans,
                        const Tensor& end, bool constrained,
                        const std::vector<std::uint8_t>& m) {
  std::size_t n = emissions.rows(), labels = emissions.cols();

  auto allowed_at = [&](std::size_t j, std::size_t l) {
    return !constrained || position_allows(m, j, l);
  };
  auto allowed_move = [&](std::size_t k, std::size_t l) {
    return !constrained ||
           tag_transition_allowed(static_cast<TagLabel>(k), static_cast<TagLabel>(l));
  };

  std::vector<std::vector<double>> alpha(n, std::vector<double>(labels, kNegInf));
  std::vector<std::vector<double>> beta(n, std::vector<double>(labels, kNegInf));
  std::vector<double> terms(labels);

  for (std::size_t l = 0; l < labels; ++l) {
    bool ok = allowed_at(0, l) && (!constrained || tag_start_allowed(static_cast<TagLabel>(l)));
    if (ok) alpha[0][l] = start(l) + emissions(0, l);
  }
  for (std::size_t j = 1; j < n; ++j) {
    for (std::size_t l = 0; l < labels; ++l) {
      if (!allowed_at(j, l)) continue;
      for (std::size_t k = 0; k < labels; ++k)
        terms[k] = allowed_move(k, l) ? alpha[j - 1][k] + trans(k, l) : kNegInf;
      double s = lse(terms);
      if (s != kNegInf) alpha[j][l] = s + emissions(j, l);
    }
  }

  for (std::size_t l = 0; l < labels; ++l) {
    if (allowed_at(n - 1, l)) beta[n - 1][l] = end(l);
  }
  for (std::size_t j = n - 1; j-- > 0;) {
    for (std::size_t k = 0; k < labels; ++k) {
      if (!allowed_at(j, k)) continue;
      for (std::size_t l = 0; l < labels; ++l)
        terms[l] = allowed_move(k, l) ? trans(k, l) + emissions(j + 1, l) + beta[j + 1][l]
                                      : kNegInf;
      beta[j][k] = lse(terms);
    }
  }

  for (std::size_t l = 0; l < labels; ++l) terms[l] = alpha[n - 1][l] + end(l);
  double log_z = lse(terms);
  if (log_z == kNegInf) throw NumericError("crf: no admissible label sequence");

  Tensor out = Tensor::mat(n, labels);
  for (std::size_t j = 0; j < n; ++j) {
    for (std::size_t l = 0; l < labels; ++l) {
      double lp = alpha[j][l] + beta[j][l] - log_z;
      out(j, l) = lp == kNegInf ? 0.0 : std::exp(lp);
    }
  }
  return out;
}

}  // namespace

Tensor crf_marginals(const Tensor& emissions, const Tensor& start, const Tensor& trans,
                     const Tensor& end) {
  check_inputs(emissions, start, trans, end);
  return forward_backward(emissions, start, trans, end, false, {});
}

Tensor crf_nll_grad(const Tensor& emissions, const Tensor& start, const Tensor& trans,
                    const Tensor& end, const std::vector<TagLabel>& y) {
  check_inputs(emissions, start, trans, end);
  check_labels(y, emissions.rows(), emissions.cols());
  Tensor g = forward_backward(emissions, start, trans, end, false, {});
  for (std::size_t j = 0; j < y.size(); ++j) g(j, static_cast<std::size_t>(y[j])) -= 1.0;
  return g;
}

Tensor crf_constrained_marginals(const Tensor& emissions, const Tensor& start,
                                 const Tensor& trans, const Tensor& end,
                                 const std::vector<std::uint8_t>& m) {
  check_inputs(emissions, start, trans, end);
  if (m.size() != emissions.rows()) throw DataError("crf: mask length mismatch");
  if (emissions.cols() != kNumTagLabels) throw DataError("crf: constrained lattice needs the tag label set");
  return forward_backward(emissions, start, trans, end, true, m);
}

std::vector<TagLabel> crf_viterbi(const Tensor& emissions, const Tensor& start,
                                  const Tensor& trans, const Tensor& end,
                                  const std::vector<std::uint8_t>& m) {
  check_inputs(emissions, start, trans, end);
  if (m.size() != emissions.rows()) throw DataError("crf: mask length mismatch");
  if (emissions.cols() != kNumTagLabels) throw DataError("crf: constrained lattice needs the tag label set");
  std::size_t n = emissions.rows(), labels = emissions.cols();

  std::vector<std::vector<double>> delta(n, std::vector<double>(labels, kNegInf));
  std::vector<std::vector<std::size_t>> from(n, std::vector<std::size_t>(labels, 0));

  for (std::size_t l = 0; l < labels; ++l) {
    if (position_allows(m, 0, l) && tag_start_allowed(static_cast<TagLabel>(l)))
      delta[0][l] = start(l) + emissions(0, l);
  }
  for (std::size_t j = 1; j < n; ++j) {
    for (std::size_t l = 0; l < labels; ++l) {
      if (!position_allows(m, j, l)) continue;
      double best = kNegInf;
      std::size_t best_k = 0;
      // Strict comparison keeps the first (smallest) label on ties.
      for (std::size_t k = 0; k < labels; ++k) {
        if (!tag_transition_allowed(static_cast<TagLabel>(k), static_cast<TagLabel>(l))) continue;
        if (delta[j - 1][k] == kNegInf) continue;
        double s = delta[j - 1][k] + trans(k, l);
        if (s > best) {
          best = s;
          best_k = k;
        }
      }
      if (best == kNegInf) continue;
      delta[j][l] = best + emissions(j, l);
      from[j][l] = best_k;
    }
  }

  double best = kNegInf;
  std::size_t best_l = 0;
  for (std::size_t l = 0; l < labels; ++l) {
    if (delta[n - 1][l] == kNegInf) continue;
    double s = delta[n - 1][l] + end(l);
    if (s > best) {
      best = s;
      best_l = l;
    }
  }
  if (best == kNegInf) throw NumericError("crf: no admissible label sequence");

  std::vector<TagLabel> y(n);
  y[n - 1] = static_cast<TagLabel>(best_l);
  for (std::size_t j = n - 1; j > 0; --j)
    y[j - 1] = static_cast<TagLabel>(from[j][static_cast<std::size_t>(y[j])]);
  return y;
}

namespace {

void check_tape_inputs(Tape& t, const std::vector<Tape::NodeId>& emissions, Tape::NodeId start,
                       const std::vector<TagLabel>& y) {
  if (emissions.empty()) throw DataError("crf: emissions must be non-empty");
  if (y.size() != emissions.size()) throw DataError("crf: label sequence length mismatch");
  std::size_t labels = t.value(start).size();
  for (TagLabel l : y) {
    if (static_cast<std::size_t>(l) >= labels) throw DataError("crf: label out of range");
  }
}

std::vector<Tape::NodeId> forward_lattice(Tape& t, const std::vector<Tape::NodeId>& emissions,
                                          Tape::NodeId start, Tape::NodeId trans) {
  std::size_t n = emissions.size();
  std::size_t labels = t.value(start).size();
  std::vector<Tape::NodeId> trans_cols(labels);
  for (std::size_t l = 0; l < labels; ++l) trans_cols[l] = t.col(trans, l);

  std::vector<Tape::NodeId> alpha(n);
  alpha[0] = t.add(start, emissions[0]);
  for (std::size_t j = 1; j < n; ++j) {
    std::vector<Tape::NodeId> parts(labels);
    for (std::size_t l = 0; l < labels; ++l)
      parts[l] = t.logsumexp(t.add(alpha[j - 1], trans_cols[l]));
    alpha[j] = t.add(t.vec_from_scalars(parts), emissions[j]);
  }
  return alpha;
}

Tape::NodeId gold_score(Tape& t, const std::vector<Tape::NodeId>& emissions, Tape::NodeId start,
                        Tape::NodeId trans, Tape::NodeId end, const std::vector<TagLabel>& y) {
  std::size_t n = emissions.size();
  std::vector<Tape::NodeId> terms;
  terms.reserve(2 * n + 1);
  terms.push_back(t.index(start, static_cast<std::size_t>(y[0])));
  for (std::size_t j = 0; j < n; ++j)
    terms.push_back(t.index(emissions[j], static_cast<std::size_t>(y[j])));
  for (std::size_t j = 1; j < n; ++j)
    terms.push_back(
        t.index2(trans, static_cast<std::size_t>(y[j - 1]), static_cast<std::size_t>(y[j])));
  terms.push_back(t.index(end, static_cast<std::size_t>(y[n - 1])));
  return t.sum_scalars(terms);
}

}  // namespace

Tape::NodeId crf_nll_on_tape(Tape& t, const std::vector<Tape::NodeId>& emissions,
                             Tape::NodeId start, Tape::NodeId trans, Tape::NodeId end,
                             const std::vector<TagLabel>& y) {
  check_tape_inputs(t, emissions, start, y);
  std::vector<Tape::NodeId> alpha = forward_lattice(t, emissions, start, trans);
  Tape::NodeId log_z = t.logsumexp(t.add(alpha.back(), end));
  return t.sub(log_z, gold_score(t, emissions, start, trans, end, y));
}

Tape::NodeId crf_token_nll_on_tape(Tape& t, const std::vector<Tape::NodeId>& emissions,
                                   Tape::NodeId start, Tape::NodeId trans, Tape::NodeId end,
                                   const std::vector<TagLabel>& y) {
  check_tape_inputs(t, emissions, start, y);
  std::size_t n = emissions.size();
  std::size_t labels = t.value(start).size();
  std::vector<Tape::NodeId> alpha = forward_lattice(t, emissions, start, trans);
  Tape::NodeId log_z = t.logsumexp(t.add(alpha.back(), end));

  std::vector<Tape::NodeId> trans_rows(labels);
  for (std::size_t k = 0; k < labels; ++k) trans_rows[k] = t.row(trans, k);

  std::vector<Tape::NodeId> beta(n);
  beta[n - 1] = end;
  for (std::size_t j = n - 1; j-- > 0;) {
    Tape::NodeId ahead = t.add(emissions[j + 1], beta[j + 1]);
    std::vector<Tape::NodeId> parts(labels);
    for (std::size_t k = 0; k < labels; ++k)
      parts[k] = t.logsumexp(t.add(trans_rows[k], ahead));
    beta[j] = t.vec_from_scalars(parts);
  }

  // -sum_j log p(y_j) with log p(y_j) = alpha_j(y_j) + beta_j(y_j) - log Z.
  std::vector<Tape::NodeId> picks;
  picks.reserve(2 * n);
  for (std::size_t j = 0; j < n; ++j) {
    picks.push_back(t.index(alpha[j], static_cast<std::size_t>(y[j])));
    picks.push_back(t.index(beta[j], static_cast<std::size_t>(y[j])));
  }
  Tape::NodeId joint = t.sum_scalars(picks);
  return t.sub(t.scale(log_z, static_cast<double>(n)), joint);
}

}  // namespace herman
