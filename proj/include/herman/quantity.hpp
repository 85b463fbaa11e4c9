#ifndef HERMAN_QUANTITY_HPP
#define HERMAN_QUANTITY_HPP

#include <string>
#include <vector>

#include "herman/token.hpp"

namespace herman {

enum class QuantityType { Date, Time, Percent, Money, Quantity, Ordinal, Cardinal };

inline constexpr int kNumQuantityTypes = 7;

const char* quantity_type_name(QuantityType t);
bool quantity_type_from_name(const std::string& name, QuantityType& t);

// A typed entity over a token range [token_start, token_end).
struct QuantitySpan {
  QuantityType qtype;
  std::size_t token_start;
  std::size_t token_end;
  std::string surface;     // span tokens joined by single spaces
  std::string normalized;  // canonical comparison form, see normalize_tokens
};

// Rule-based recognizer for the seven quantity entity types. Spans never
// overlap; resolution is longest-match left-to-right with type precedence
// PERCENT > MONEY > TIME > DATE > QUANTITY > ORDINAL > CARDINAL on ties.
//
// The grammar, over lowercased token texts:
//   CARDINAL  digit numerals (commas/decimals), number words zero..ninety-nine
//             plus hundred/thousand/million/billion/dozen, quantifier words
//             (several, hundreds, thousands, millions), hyphenated numeral
//             compounds ("three-car"); leading modifiers (more than, at least,
//             at most, over, about, nearly, up to, almost) join the span.
//   ORDINAL   first..twentieth; digit+suffix (1st, 2nd, 3rd, Nth).
//   PERCENT   numeral + "%" / "percent" / "per cent".
//   MONEY     £/$/€-glued amount with optional scale word (million/billion/
//             m/bn), or numeral + currency word (pounds, dollars, ...);
//             leading modifiers join the span.
//   TIME      HH:MM, numeral + am/pm (also glued "9am"), midnight, noon.
//   DATE      weekday names; month names with optional day/year numerals;
//             standalone years 1900-2099; decades ("1980s"); yesterday,
//             today, tomorrow, tonight.
//   QUANTITY  numeral + measurement unit from the fixed unit lexicon.
std::vector<QuantitySpan> tag_quantities(const TokenSeq& tokens);

// Canonical form of a tagged span: commas stripped from digit groups, number
// words mapped to digits, modifiers dropped, currency symbols retained.
std::string normalize_tokens(QuantityType type, const TokenSeq& tokens, std::size_t begin,
                             std::size_t end);

}  // namespace herman

#endif
