#ifndef HERMAN_LEXICON_HPP
#define HERMAN_LEXICON_HPP

#include <string>

namespace herman {
namespace lex {

// All lookups expect lowercased token text.

// zero..ninety-nine (incl. hyphenated forms), hundred/thousand/million/billion/dozen.
bool is_number_word(const std::string& s);

// Digit value for a simple number word ("three" -> 3, "twenty-five" -> 25).
// Returns false for scale words and anything unmapped.
bool number_word_value(const std::string& s, long& value);

// several / hundreds / thousands / millions.
bool is_quantifier_word(const std::string& s);

// hundred / thousand / million / billion / dozen.
bool is_scale_word(const std::string& s);

// first..twentieth.
bool is_ordinal_word(const std::string& s);
bool ordinal_word_value(const std::string& s, long& value);

bool is_weekday(const std::string& s);
bool is_month(const std::string& s);

// pounds, dollars, euros, pence, cents (and singulars).
bool is_currency_word(const std::string& s);

// Measurement units (miles, km, kg, tonnes, metres, feet, litres, mph,
// acres, ... plus plural time-duration words).
bool is_unit_word(const std::string& s);

// Money scale suffixes: million, billion, m, bn.
bool is_money_scale(const std::string& s);

}  // namespace lex
}  // namespace herman

#endif
