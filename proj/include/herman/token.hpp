#ifndef HERMAN_TOKEN_HPP
#define HERMAN_TOKEN_HPP

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

namespace herman {

// A token with byte offsets into the source text. `text` is the lowercased
// source substring [char_start, char_end); offsets always point at the
// original text, so case-sensitive lookups remain possible downstream.
struct Token {
  std::string text;
  std::size_t char_start = 0;
  std::size_t char_end = 0;
};

using TokenSeq = std::vector<Token>;

// Lowercases ASCII A-Z, leaves everything else (incl. multi-byte UTF-8) alone.
std::string ascii_lower(const std::string& s);

// Whitespace/punctuation tokenizer with number-aware glue: decimals ("5.7"),
// comma-grouped numbers ("5,000"), clock times ("17:20"), hyphenated numeral
// compounds ("three-car"), currency-symbol amounts ("£5,000") and numeral
// suffixes ("1st", "1980s", "9am") each stay a single token.
TokenSeq tokenize(const std::string& text);

// Token texts joined by single spaces.
std::string join_tokens(const TokenSeq& tokens, std::size_t begin, std::size_t end);

// Builds a synthetic text by joining `texts` with single spaces and returns it
// with tokens whose offsets point into that text. Used wherever a token
// stream exists without an original source string (perturbed summaries,
// datasets read back from disk).
std::pair<std::string, TokenSeq> layout_tokens(const std::vector<std::string>& texts);

struct CorpusRecord {
  std::string id;
  std::string article_text;
  std::string summary_text;
  TokenSeq article;  // tokens of article_text
  TokenSeq summary;  // tokens of summary_text

  static CorpusRecord from_text(std::string id, std::string article, std::string summary);
};

// Keeps the first max_article / max_summary tokens. Idempotent.
CorpusRecord truncate(CorpusRecord record, std::size_t max_article, std::size_t max_summary);

}  // namespace herman

#endif
