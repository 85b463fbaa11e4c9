#include "herman/quantity.hpp"

#include <array>
#include <cstdint>
#include <cstdlib>

#include "herman/lexicon.hpp"

namespace herman {

namespace {

bool all_digits(const std::string& s) {
  if (s.empty()) return false;
  for (char c : s)
    if (c < '0' || c > '9') return false;
  return true;
}

// Digit numeral with optional comma groups and at most one decimal point.
// Excludes clock times, ordinal/suffix forms and anything non-ASCII.
bool is_digit_numeral(const std::string& s) {
  if (s.empty() || s.front() < '0' || s.front() > '9') return false;
  int dots = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    char c = s[i];
    if (c >= '0' && c <= '9') continue;
    if (c == '.') {
      ++dots;
      if (dots > 1) return false;
      continue;
    }
    if (c == ',') continue;
    return false;
  }
  return s.back() >= '0' && s.back() <= '9';
}

bool is_integer_numeral(const std::string& s) {
  return is_digit_numeral(s) && s.find('.') == std::string::npos;
}

long long integer_value(const std::string& s) {
  long long v = 0;
  for (char c : s)
    if (c != ',') v = v * 10 + (c - '0');
  return v;
}

bool is_clock(const std::string& s) {
  auto colon = s.find(':');
  if (colon == std::string::npos || colon == 0 || colon + 3 != s.size()) return false;
  std::string hh = s.substr(0, colon), mm = s.substr(colon + 1);
  if (hh.size() > 2 || !all_digits(hh) || !all_digits(mm)) return false;
  long h = std::strtol(hh.c_str(), nullptr, 10);
  long m = std::strtol(mm.c_str(), nullptr, 10);
  return h <= 23 && m <= 59;
}

bool is_year(const std::string& s) {
  if (s.size() != 4 || !all_digits(s)) return false;
  long v = std::strtol(s.c_str(), nullptr, 10);
  return v >= 1900 && v <= 2099;
}

// "1980s", "2010s"
bool is_decade(const std::string& s) {
  if (s.size() != 5 || s.back() != 's') return false;
  std::string head = s.substr(0, 4);
  return is_year(head) && head[3] == '0';
}

bool is_day_number(const std::string& s) {
  if (s.empty() || s.size() > 2 || !all_digits(s)) return false;
  long v = std::strtol(s.c_str(), nullptr, 10);
  return v >= 1 && v <= 31;
}

bool is_digit_ordinal(const std::string& s) {
  if (s.size() < 3) return false;
  std::string suffix = s.substr(s.size() - 2);
  if (suffix != "st" && suffix != "nd" && suffix != "rd" && suffix != "th") return false;
  return all_digits(s.substr(0, s.size() - 2));
}

// "9am" / "11pm" as glued by the tokenizer.
bool is_glued_ampm(const std::string& s) {
  if (s.size() < 3) return false;
  std::string suffix = s.substr(s.size() - 2);
  if (suffix != "am" && suffix != "pm") return false;
  std::string head = s.substr(0, s.size() - 2);
  return all_digits(head) && head.size() <= 2;
}

bool starts_with_currency(const std::string& s) {
  if (s.empty()) return false;
  if (s[0] == '$') return true;
  if (s.size() >= 2 && static_cast<unsigned char>(s[0]) == 0xC2 &&
      static_cast<unsigned char>(s[1]) == 0xA3)
    return true;  // £
  if (s.size() >= 3 && static_cast<unsigned char>(s[0]) == 0xE2 &&
      static_cast<unsigned char>(s[1]) == 0x82 && static_cast<unsigned char>(s[2]) == 0xAC)
    return true;  // €
  return false;
}

// "£5,000" or "$12" where the symbol was glued onto a following amount.
bool is_glued_money(const std::string& s) {
  if (!starts_with_currency(s)) return false;
  std::size_t skip = s[0] == '$' ? 1 : (static_cast<unsigned char>(s[0]) == 0xC2 ? 2 : 3);
  return skip < s.size() && is_digit_numeral(s.substr(skip));
}

// Hyphenated compound whose first segment is numeric: "three-car", "25-year-old".
bool is_numeral_compound(const std::string& s) {
  auto dash = s.find('-');
  if (dash == std::string::npos || dash == 0 || dash + 1 >= s.size()) return false;
  std::string head = s.substr(0, dash);
  return is_digit_numeral(head) || lex::is_number_word(head);
}

// Plain numeral usable as the "amount" slot of a larger pattern.
bool is_amount(const std::string& s) { return is_digit_numeral(s) || lex::is_number_word(s); }

bool is_deictic_day(const std::string& s) {
  return s == "yesterday" || s == "today" || s == "tomorrow" || s == "tonight";
}

// ---- per-type matchers; each returns the match length at position i, 0 if none

using Toks = TokenSeq;

std::size_t match_percent(const Toks& t, std::size_t i) {
  if (i + 1 >= t.size() || !is_amount(t[i].text)) return 0;
  const std::string& next = t[i + 1].text;
  if (next == "%" || next == "percent") return 2;
  if (next == "per" && i + 2 < t.size() && t[i + 2].text == "cent") return 3;
  return 0;
}

std::size_t match_money(const Toks& t, std::size_t i) {
  if (is_glued_money(t[i].text)) {
    if (i + 1 < t.size() && lex::is_money_scale(t[i + 1].text)) return 2;
    return 1;
  }
  if (is_amount(t[i].text)) {
    std::size_t j = i + 1;
    if (j < t.size() && lex::is_money_scale(t[j].text) && j + 1 < t.size() &&
        lex::is_currency_word(t[j + 1].text))
      return 3;
    if (j < t.size() && lex::is_currency_word(t[j].text)) return 2;
  }
  return 0;
}

std::size_t match_time(const Toks& t, std::size_t i) {
  const std::string& s = t[i].text;
  if (is_clock(s) || is_glued_ampm(s) || s == "midnight" || s == "noon") return 1;
  if (is_integer_numeral(s) && integer_value(s) <= 12 && i + 1 < t.size() &&
      (t[i + 1].text == "am" || t[i + 1].text == "pm"))
    return 2;
  return 0;
}

std::size_t match_date(const Toks& t, std::size_t i) {
  const std::string& s = t[i].text;
  if (lex::is_weekday(s) || is_decade(s) || is_deictic_day(s)) return 1;
  if (is_year(s)) return 1;
  // day-first: "25 august" / "25 august 2015"
  if (is_day_number(s) && i + 1 < t.size() && lex::is_month(t[i + 1].text)) {
    if (i + 2 < t.size() && is_year(t[i + 2].text)) return 3;
    return 2;
  }
  if (lex::is_month(s)) {
    // month-first: "august 25 2015", "august 25", "august 2015", "august"
    if (i + 1 < t.size() && is_day_number(t[i + 1].text)) {
      if (i + 2 < t.size() && is_year(t[i + 2].text)) return 3;
      return 2;
    }
    if (i + 1 < t.size() && is_year(t[i + 1].text)) return 2;
    // A bare "may" is nearly always the modal verb, so it needs a day or
    // year neighbour; every other month name matches on its own.
    return s == "may" ? 0 : 1;
  }
  return 0;
}

std::size_t match_quantity(const Toks& t, std::size_t i) {
  if (!is_amount(t[i].text)) return 0;
  std::size_t j = i + 1;
  if (j < t.size() && lex::is_scale_word(t[j].text) && j + 1 < t.size() &&
      lex::is_unit_word(t[j + 1].text))
    return 3;
  if (j < t.size() && lex::is_unit_word(t[j].text)) return 2;
  return 0;
}

std::size_t match_ordinal(const Toks& t, std::size_t i) {
  const std::string& s = t[i].text;
  return (lex::is_ordinal_word(s) || is_digit_ordinal(s)) ? 1 : 0;
}

bool is_cardinal_item(const std::string& s) {
  return is_digit_numeral(s) || lex::is_number_word(s) || lex::is_scale_word(s) ||
         is_numeral_compound(s);
}

std::size_t match_cardinal(const Toks& t, std::size_t i) {
  std::size_t j = i;
  while (j < t.size() && is_cardinal_item(t[j].text)) ++j;
  if (j > i) return j - i;
  return lex::is_quantifier_word(t[i].text) ? 1 : 0;
}

// "more than", "at least", "at most", "up to" (two tokens); "over", "about",
// "nearly", "almost" (one token). Returns the modifier length at i.
std::size_t modifier_len(const Toks& t, std::size_t i) {
  const std::string& s = t[i].text;
  if (i + 1 < t.size()) {
    const std::string& n = t[i + 1].text;
    if ((s == "more" && n == "than") || (s == "at" && (n == "least" || n == "most")) ||
        (s == "up" && n == "to"))
      return 2;
  }
  if (s == "over" || s == "about" || s == "nearly" || s == "almost") return 1;
  return 0;
}

struct Cand {
  std::size_t len = 0;
  QuantityType type = QuantityType::Cardinal;
};

int precedence(QuantityType t) {
  switch (t) {
    case QuantityType::Percent: return 0;
    case QuantityType::Money: return 1;
    case QuantityType::Time: return 2;
    case QuantityType::Date: return 3;
    case QuantityType::Quantity: return 4;
    case QuantityType::Ordinal: return 5;
    case QuantityType::Cardinal: return 6;
  }
  return 7;
}

void consider(Cand& best, std::size_t len, QuantityType type) {
  if (len == 0) return;
  if (len > best.len || (len == best.len && precedence(type) < precedence(best.type)))
    best = {len, type};
}

// Best match at i ignoring modifier absorption.
Cand best_plain(const Toks& t, std::size_t i) {
  Cand best;
  consider(best, match_percent(t, i), QuantityType::Percent);
  consider(best, match_money(t, i), QuantityType::Money);
  consider(best, match_time(t, i), QuantityType::Time);
  consider(best, match_date(t, i), QuantityType::Date);
  consider(best, match_quantity(t, i), QuantityType::Quantity);
  consider(best, match_ordinal(t, i), QuantityType::Ordinal);
  consider(best, match_cardinal(t, i), QuantityType::Cardinal);
  return best;
}

Cand best_match(const Toks& t, std::size_t i) {
  Cand best = best_plain(t, i);
  std::size_t mod = modifier_len(t, i);
  if (mod > 0 && i + mod < t.size()) {
    // A modifier joins a MONEY or CARDINAL span, but only when that reading
    // is what the following tokens resolve to on their own; "about 17:20"
    // must leave "about" outside the TIME span.
    Cand core = best_plain(t, i + mod);
    if (core.len > 0 &&
        (core.type == QuantityType::Money || core.type == QuantityType::Cardinal))
      consider(best, mod + core.len, core.type);
  }
  return best;
}

// ---- normalization helpers

std::string ordinal_suffix(long long v) {
  long long m100 = v % 100;
  if (m100 >= 11 && m100 <= 13) return "th";
  switch (v % 10) {
    case 1: return "st";
    case 2: return "nd";
    case 3: return "rd";
    default: return "th";
  }
}

std::string strip_commas(const std::string& s) {
  std::string out;
  out.reserve(s.size());
  for (char c : s)
    if (c != ',') out += c;
  return out;
}

// Single-token canonical form: digit groups lose commas, number/ordinal words
// become digits, numeric compound heads become digits; other tokens pass
// through unchanged.
std::string map_token(const std::string& s) {
  if (is_digit_numeral(s)) return strip_commas(s);
  long word = 0;
  if (lex::number_word_value(s, word)) return std::to_string(word);
  if (lex::ordinal_word_value(s, word)) return std::to_string(word) + ordinal_suffix(word);
  if (is_numeral_compound(s)) {
    auto dash = s.find('-');
    return map_token(s.substr(0, dash)) + s.substr(dash);
  }
  if (is_glued_money(s)) {
    std::size_t skip = s[0] == '$' ? 1 : (static_cast<unsigned char>(s[0]) == 0xC2 ? 2 : 3);
    return s.substr(0, skip) + strip_commas(s.substr(skip));
  }
  return s;  // scale words, units, month names pass through
}

// Integer value of a numeral run like "three hundred", "5 million",
// "two dozen", "100 thousand". Returns false when any item is non-integer
// (decimals, quantifiers, compounds), in which case callers fall back to
// token-by-token mapping.
bool run_value(const Toks& t, std::size_t begin, std::size_t end, long long& out) {
  long long total = 0, cur = 0;
  bool any = false;
  for (std::size_t i = begin; i < end; ++i) {
    const std::string& s = t[i].text;
    long word = 0;
    if (is_integer_numeral(s)) {
      cur += integer_value(s);
      any = true;
    } else if (lex::number_word_value(s, word)) {
      cur += word;
      any = true;
    } else if (lex::is_scale_word(s)) {
      long long scale = s == "dozen"     ? 12
                        : s == "hundred" ? 100
                        : s == "thousand"
                            ? 1000
                            : (s == "million" ? 1000000LL : 1000000000LL);
      if (scale >= 1000) {
        total += (cur == 0 ? 1 : cur) * scale;
        cur = 0;
      } else {
        cur = (cur == 0 ? 1 : cur) * scale;
      }
      any = true;
    } else {
      return false;
    }
  }
  out = total + cur;
  return any;
}

std::string join_mapped(const Toks& t, std::size_t begin, std::size_t end,
                        const std::string& sep) {
  std::string out;
  for (std::size_t i = begin; i < end; ++i) {
    if (i > begin) out += sep;
    out += map_token(t[i].text);
  }
  return out;
}

std::size_t skip_modifier(const Toks& t, std::size_t begin, std::size_t end) {
  std::size_t mod = begin < end ? modifier_len(t, begin) : 0;
  return begin + mod <= end ? begin + mod : begin;
}

}  // namespace

const char* quantity_type_name(QuantityType t) {
  switch (t) {
    case QuantityType::Date: return "DATE";
    case QuantityType::Time: return "TIME";
    case QuantityType::Percent: return "PERCENT";
    case QuantityType::Money: return "MONEY";
    case QuantityType::Quantity: return "QUANTITY";
    case QuantityType::Ordinal: return "ORDINAL";
    case QuantityType::Cardinal: return "CARDINAL";
  }
  return "?";
}

bool quantity_type_from_name(const std::string& name, QuantityType& t) {
  static const std::array<QuantityType, kNumQuantityTypes> all = {
      QuantityType::Date,    QuantityType::Time,    QuantityType::Percent,
      QuantityType::Money,   QuantityType::Quantity, QuantityType::Ordinal,
      QuantityType::Cardinal};
  for (QuantityType q : all) {
    if (name == quantity_type_name(q)) {
      t = q;
      return true;
    }
  }
  return false;
}

std::string normalize_tokens(QuantityType type, const TokenSeq& tokens, std::size_t begin,
                             std::size_t end) {
  switch (type) {
    case QuantityType::Percent: {
      // drop the %/percent/per-cent marker, keep the amount
      std::size_t amount_end = begin + 1;
      return join_mapped(tokens, begin, amount_end, "") + "%";
    }
    case QuantityType::Money: {
      std::size_t b = skip_modifier(tokens, begin, end);
      bool glued = b < end && starts_with_currency(tokens[b].text);
      return join_mapped(tokens, b, end, glued ? "" : " ");
    }
    case QuantityType::Time:
      return join_mapped(tokens, begin, end, "");
    case QuantityType::Date:
      return join_mapped(tokens, begin, end, " ");
    case QuantityType::Quantity:
      return join_mapped(tokens, begin, end, " ");
    case QuantityType::Ordinal:
      return map_token(tokens[begin].text);
    case QuantityType::Cardinal: {
      std::size_t b = skip_modifier(tokens, begin, end);
      long long v = 0;
      if (run_value(tokens, b, end, v)) return std::to_string(v);
      return join_mapped(tokens, b, end, " ");
    }
  }
  return join_mapped(tokens, begin, end, " ");
}

std::vector<QuantitySpan> tag_quantities(const TokenSeq& tokens) {
  std::vector<QuantitySpan> spans;
  std::size_t i = 0;
  while (i < tokens.size()) {
    Cand best = best_match(tokens, i);
    if (best.len == 0) {
      ++i;
      continue;
    }
    QuantitySpan span;
    span.qtype = best.type;
    span.token_start = i;
    span.token_end = i + best.len;
    span.surface = join_tokens(tokens, span.token_start, span.token_end);
    span.normalized = normalize_tokens(best.type, tokens, span.token_start, span.token_end);
    spans.push_back(std::move(span));
    i += best.len;
  }
  return spans;
}

}  // namespace herman
