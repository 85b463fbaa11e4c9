#include "herman/lexicon.hpp"

#include <array>
#include <unordered_map>
#include <unordered_set>

namespace herman {
namespace lex {

namespace {

const std::array<const char*, 20> kUnits = {
    "zero", "one",  "two",  "three", "four",  "five",  "six",  "seven",  "eight",  "nine",
    "ten",  "eleven", "twelve", "thirteen", "fourteen", "fifteen", "sixteen", "seventeen",
    "eighteen", "nineteen"};

const std::array<const char*, 8> kTens = {"twenty", "thirty", "forty",  "fifty",
                                          "sixty",  "seventy", "eighty", "ninety"};

const std::unordered_map<std::string, long>& simple_number_words() {
  static const std::unordered_map<std::string, long>* map = [] {
    auto* m = new std::unordered_map<std::string, long>();
    for (std::size_t i = 0; i < kUnits.size(); ++i) (*m)[kUnits[i]] = static_cast<long>(i);
    for (std::size_t i = 0; i < kTens.size(); ++i) {
      long tens = static_cast<long>(20 + 10 * i);
      (*m)[kTens[i]] = tens;
      for (std::size_t u = 1; u < 10; ++u) {
        (*m)[std::string(kTens[i]) + "-" + kUnits[u]] = tens + static_cast<long>(u);
      }
    }
    return m;
  }();
  return *map;
}

const std::unordered_set<std::string>& scale_words() {
  static const std::unordered_set<std::string> set = {"hundred", "thousand", "million",
                                                      "billion", "dozen"};
  return set;
}

const std::unordered_map<std::string, long>& ordinal_words() {
  static const std::unordered_map<std::string, long>* map = [] {
    auto* m = new std::unordered_map<std::string, long>{
        {"first", 1},      {"second", 2},     {"third", 3},     {"fourth", 4},
        {"fifth", 5},      {"sixth", 6},      {"seventh", 7},   {"eighth", 8},
        {"ninth", 9},      {"tenth", 10},     {"eleventh", 11}, {"twelfth", 12},
        {"thirteenth", 13}, {"fourteenth", 14}, {"fifteenth", 15}, {"sixteenth", 16},
        {"seventeenth", 17}, {"eighteenth", 18}, {"nineteenth", 19}, {"twentieth", 20}};
    return m;
  }();
  return *map;
}

}  // namespace

bool is_number_word(const std::string& s) {
  return simple_number_words().count(s) > 0 || scale_words().count(s) > 0;
}

bool number_word_value(const std::string& s, long& value) {
  auto it = simple_number_words().find(s);
  if (it == simple_number_words().end()) return false;
  value = it->second;
  return true;
}

bool is_quantifier_word(const std::string& s) {
  static const std::unordered_set<std::string> set = {"several", "hundreds", "thousands",
                                                      "millions"};
  return set.count(s) > 0;
}

bool is_scale_word(const std::string& s) { return scale_words().count(s) > 0; }

bool is_ordinal_word(const std::string& s) { return ordinal_words().count(s) > 0; }

bool ordinal_word_value(const std::string& s, long& value) {
  auto it = ordinal_words().find(s);
  if (it == ordinal_words().end()) return false;
  value = it->second;
  return true;
}

bool is_weekday(const std::string& s) {
  static const std::unordered_set<std::string> set = {
      "monday", "tuesday", "wednesday", "thursday", "friday", "saturday", "sunday"};
  return set.count(s) > 0;
}

bool is_month(const std::string& s) {
  static const std::unordered_set<std::string> set = {
      "january", "february", "march",     "april",   "may",      "june",
      "july",    "august",   "september", "october", "november", "december"};
  return set.count(s) > 0;
}

bool is_currency_word(const std::string& s) {
  static const std::unordered_set<std::string> set = {"pound", "pounds", "dollar", "dollars",
                                                      "euro",  "euros",  "pence",  "cent",
                                                      "cents"};
  return set.count(s) > 0;
}

bool is_unit_word(const std::string& s) {
  static const std::unordered_set<std::string> set = {
      "mile", "miles", "km", "kilometre", "kilometres", "kilometer", "kilometers",
      "kg", "kilogram", "kilograms", "gram", "grams", "tonne", "tonnes", "ton", "tons",
      "metre", "metres", "meter", "meters", "cm", "mm", "foot", "feet", "ft", "inch",
      "inches", "yard", "yards", "litre", "litres", "liter", "liters", "gallon",
      "gallons", "mph", "acre", "acres", "hectare", "hectares", "seconds", "minutes",
      "hours", "days", "weeks", "months", "years", "degrees"};
  return set.count(s) > 0;
}

bool is_money_scale(const std::string& s) {
  static const std::unordered_set<std::string> set = {"million", "billion", "m", "bn"};
  return set.count(s) > 0;
}

}  // namespace lex
}  // namespace herman
