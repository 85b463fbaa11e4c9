#include "herman/token.hpp"

#include <cctype>

#include "herman/lexicon.hpp"

namespace herman {

std::string ascii_lower(const std::string& s) {
  std::string out = s;
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c - 'A' + 'a');
  }
  return out;
}

namespace {

enum class PrimKind { Letters, Digits, Punct, Currency };

struct Prim {
  PrimKind kind;
  std::size_t begin;
  std::size_t end;
  char punct = 0;  // set for Punct
};

bool is_ascii_space(unsigned char c) { return std::isspace(c) != 0; }
bool is_ascii_digit(unsigned char c) { return c >= '0' && c <= '9'; }
bool is_ascii_punct(unsigned char c) { return std::ispunct(c) != 0; }

// Decodes one UTF-8 code point at byte i; returns its byte length (>= 1).
// Malformed bytes are consumed one at a time.
std::size_t codepoint_at(const std::string& s, std::size_t i, char32_t& cp) {
  unsigned char c = static_cast<unsigned char>(s[i]);
  if (c < 0x80) {
    cp = c;
    return 1;
  }
  std::size_t len = (c >= 0xF0) ? 4 : (c >= 0xE0) ? 3 : (c >= 0xC0) ? 2 : 1;
  if (len == 1 || i + len > s.size()) {
    cp = c;
    return 1;
  }
  char32_t v = c & (0x3F >> (len - 1));
  for (std::size_t k = 1; k < len; ++k) {
    unsigned char cc = static_cast<unsigned char>(s[i + k]);
    if ((cc & 0xC0) != 0x80) {
      cp = c;
      return 1;
    }
    v = (v << 6) | (cc & 0x3F);
  }
  cp = v;
  return len;
}

bool is_currency_cp(char32_t cp) {
  return cp == U'$' || cp == 0x00A3 /* £ */ || cp == 0x20AC /* € */;
}

std::vector<Prim> scan_primitives(const std::string& text) {
  std::vector<Prim> prims;
  std::size_t i = 0;
  while (i < text.size()) {
    char32_t cp;
    std::size_t len = codepoint_at(text, i, cp);
    if (cp < 0x80 && is_ascii_space(static_cast<unsigned char>(cp))) {
      i += len;
      continue;
    }
    if (is_currency_cp(cp)) {
      prims.push_back({PrimKind::Currency, i, i + len, 0});
      i += len;
      continue;
    }
    if (cp < 0x80 && is_ascii_digit(static_cast<unsigned char>(cp))) {
      std::size_t b = i;
      while (i < text.size() && is_ascii_digit(static_cast<unsigned char>(text[i]))) ++i;
      prims.push_back({PrimKind::Digits, b, i, 0});
      continue;
    }
    if (cp < 0x80 && is_ascii_punct(static_cast<unsigned char>(cp))) {
      prims.push_back({PrimKind::Punct, i, i + len, static_cast<char>(cp)});
      i += len;
      continue;
    }
    // Letter run: ASCII letters and any other non-space, non-punct code point.
    std::size_t b = i;
    while (i < text.size()) {
      char32_t c2;
      std::size_t l2 = codepoint_at(text, i, c2);
      bool letter = !(c2 < 0x80 && (is_ascii_space(static_cast<unsigned char>(c2)) ||
                                    is_ascii_digit(static_cast<unsigned char>(c2)) ||
                                    is_ascii_punct(static_cast<unsigned char>(c2)))) &&
                    !is_currency_cp(c2);
      if (!letter) break;
      i += l2;
    }
    prims.push_back({PrimKind::Letters, b, i, 0});
  }
  return prims;
}

bool adjacent(const Prim& a, const Prim& b) { return a.end == b.begin; }

// Number suffixes that stay glued to a digit run: 1st, 2nd, 3rd, Nth, 1980s, 9am, 5pm.
bool is_digit_suffix(const std::string& lower) {
  return lower == "st" || lower == "nd" || lower == "rd" || lower == "th" || lower == "s" ||
         lower == "am" || lower == "pm";
}

}  // namespace

TokenSeq tokenize(const std::string& text) {
  const std::vector<Prim> prims = scan_primitives(text);
  TokenSeq tokens;

  auto lower_at = [&](const Prim& p) {
    return ascii_lower(text.substr(p.begin, p.end - p.begin));
  };

  // Consumes a digit chain with internal . , : separators plus an optional
  // letter suffix, starting at prims[i] (which must be Digits). Returns the
  // index one past the chain and the end byte offset.
  auto consume_number = [&](std::size_t i, std::size_t& end_byte) {
    end_byte = prims[i].end;
    std::size_t j = i + 1;
    while (j + 1 < prims.size() && prims[j].kind == PrimKind::Punct &&
           (prims[j].punct == '.' || prims[j].punct == ',' || prims[j].punct == ':') &&
           prims[j + 1].kind == PrimKind::Digits && adjacent(prims[j - 1], prims[j]) &&
           adjacent(prims[j], prims[j + 1])) {
      end_byte = prims[j + 1].end;
      j += 2;
    }
    if (j < prims.size() && prims[j].kind == PrimKind::Letters && adjacent(prims[j - 1], prims[j]) &&
        is_digit_suffix(lower_at(prims[j]))) {
      end_byte = prims[j].end;
      ++j;
    }
    return j;
  };

  // A "word unit" for hyphen compounds: a letters run, or a digit chain.
  // Returns one past the unit, or i if prims[i] does not start one.
  auto consume_word_unit = [&](std::size_t i, std::size_t& end_byte) {
    if (i >= prims.size()) return i;
    if (prims[i].kind == PrimKind::Letters) {
      end_byte = prims[i].end;
      return i + 1;
    }
    if (prims[i].kind == PrimKind::Digits) return consume_number(i, end_byte);
    return i;
  };

  auto emit = [&](std::size_t begin_byte, std::size_t end_byte) {
    tokens.push_back(
        {ascii_lower(text.substr(begin_byte, end_byte - begin_byte)), begin_byte, end_byte});
  };

  std::size_t i = 0;
  while (i < prims.size()) {
    const Prim& p = prims[i];
    std::size_t begin_byte = p.begin;
    std::size_t end_byte = p.end;

    if (p.kind == PrimKind::Currency) {
      // Currency symbol glued to a directly following number: "£5,000".
      if (i + 1 < prims.size() && prims[i + 1].kind == PrimKind::Digits &&
          adjacent(p, prims[i + 1])) {
        i = consume_number(i + 1, end_byte);
      } else {
        ++i;
      }
      emit(begin_byte, end_byte);
      continue;
    }

    if (p.kind == PrimKind::Punct) {
      emit(begin_byte, end_byte);
      ++i;
      continue;
    }

    // Letters or digits: consume one word unit, then try hyphen-compound glue.
    std::size_t j;
    bool numeric_head;
    if (p.kind == PrimKind::Digits) {
      j = consume_number(i, end_byte);
      numeric_head = true;
    } else {
      j = i + 1;
      numeric_head = lex::is_number_word(lower_at(p));
    }
    // Hyphen compounds glue only when the first unit is numeric ("three-car",
    // "twenty-five", "25-year-old"); "well-known" splits.
    if (numeric_head) {
      while (j + 1 < prims.size() && prims[j].kind == PrimKind::Punct && prims[j].punct == '-' &&
             adjacent(prims[j - 1], prims[j]) && adjacent(prims[j], prims[j + 1])) {
        std::size_t unit_end = 0;
        std::size_t k = consume_word_unit(j + 1, unit_end);
        if (k == j + 1) break;
        end_byte = unit_end;
        j = k;
      }
    }
    emit(begin_byte, end_byte);
    i = j;
  }
  return tokens;
}

std::string join_tokens(const TokenSeq& tokens, std::size_t begin, std::size_t end) {
  std::string out;
  for (std::size_t i = begin; i < end && i < tokens.size(); ++i) {
    if (i > begin) out += ' ';
    out += tokens[i].text;
  }
  return out;
}

std::pair<std::string, TokenSeq> layout_tokens(const std::vector<std::string>& texts) {
  std::string joined;
  TokenSeq tokens;
  tokens.reserve(texts.size());
  for (const std::string& t : texts) {
    if (!joined.empty()) joined += ' ';
    std::size_t start = joined.size();
    joined += t;
    tokens.push_back({t, start, joined.size()});
  }
  return {std::move(joined), std::move(tokens)};
}

CorpusRecord CorpusRecord::from_text(std::string id, std::string article, std::string summary) {
  CorpusRecord r;
  r.id = std::move(id);
  r.article_text = std::move(article);
  r.summary_text = std::move(summary);
  r.article = tokenize(r.article_text);
  r.summary = tokenize(r.summary_text);
  return r;
}

CorpusRecord truncate(CorpusRecord record, std::size_t max_article, std::size_t max_summary) {
  if (record.article.size() > max_article) record.article.resize(max_article);
  if (record.summary.size() > max_summary) record.summary.resize(max_summary);
  return record;
}

}  // namespace herman
