#include "herman/toy.hpp"

#include <cstddef>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "herman/errors.hpp"
#include "herman/quantity.hpp"
#include "herman/rng.hpp"

namespace herman {
namespace {

// Every value pool is disjoint from its partner's, so a swapped-in value sits
// outside the range its sentence position normally carries. Partner slots are
// what the synthesizer will reach for when it perturbs (same quantity type,
// different normalized form), and what beam corruption draws from.
enum class Slot { People, Cars, Minutes, Cleanup, Damage, Fund, Homes, Schools, Speed, Hours };

const std::vector<std::string> kCities = {"Norwich", "Leeds",  "Bristol", "Cardiff", "Swansea",
                                          "Dundee",  "Derby",  "Oxford",  "Luton",   "Preston"};
const std::vector<std::string> kMonths = {"January", "February", "March",     "April",   "May",
                                          "June",    "July",     "August",    "September",
                                          "October", "November", "December"};
const std::vector<std::string> kDays = {"3", "5", "9", "12", "17", "21", "24", "28"};
const std::vector<std::string> kSeverities = {"serious", "minor", "major"};

const std::vector<std::string> kPeople = {"two", "three", "four", "five",
                                          "six", "seven", "eight", "nine"};
const std::vector<std::string> kCars = {"10", "11", "12", "13", "14",
                                        "15", "16", "17", "18", "19"};
const std::vector<std::string> kMinutes = {"20", "25", "30", "35", "40", "45"};
const std::vector<std::string> kCleanup = {"50", "55", "90", "95", "100", "105"};
const std::vector<std::string> kDamage = {"£1,000", "£1,500", "£2,000", "£2,500",
                                          "£3,000", "£3,500", "£4,000"};
const std::vector<std::string> kFund = {"£5,000", "£6,000", "£7,000", "£8,000", "£9,000"};
const std::vector<std::string> kHomes = {"100", "200", "300", "400", "500",
                                         "600", "700", "800", "900"};
const std::vector<std::string> kSchools = {"21", "23", "27", "29", "31", "33"};
const std::vector<std::string> kSpeed = {"60", "65", "70", "75", "80", "85"};
const std::vector<std::string> kHours = {"2", "3", "4", "5", "6", "7", "8", "9"};

const std::vector<std::string>& pool_of(Slot s) {
  switch (s) {
    case Slot::People: return kPeople;
    case Slot::Cars: return kCars;
    case Slot::Minutes: return kMinutes;
    case Slot::Cleanup: return kCleanup;
    case Slot::Damage: return kDamage;
    case Slot::Fund: return kFund;
    case Slot::Homes: return kHomes;
    case Slot::Schools: return kSchools;
    case Slot::Speed: return kSpeed;
    case Slot::Hours: return kHours;
  }
  throw std::logic_error("unknown slot");
}

Slot partner_of(Slot s) {
  switch (s) {
    case Slot::People: return Slot::Cars;
    case Slot::Cars: return Slot::People;
    case Slot::Minutes: return Slot::Cleanup;
    case Slot::Cleanup: return Slot::Minutes;
    case Slot::Damage: return Slot::Fund;
    case Slot::Fund: return Slot::Damage;
    case Slot::Homes: return Slot::Schools;
    case Slot::Schools: return Slot::Homes;
    case Slot::Speed: return Slot::Hours;
    case Slot::Hours: return Slot::Speed;
  }
  throw std::logic_error("unknown slot");
}

// Surface tokens a value of this slot occupies in running text; duration and
// speed slots carry their unit word so a splice swaps the unit along with the
// number, matching what span replacement from an article does.
std::vector<std::string> span_tokens(Slot s, const std::string& value) {
  switch (s) {
    case Slot::Minutes:
    case Slot::Cleanup: return {value, "minutes"};
    case Slot::Speed: return {value, "mph"};
    case Slot::Hours: return {value, "hours"};
    default: return {value};
  }
}

enum class Family { Crash, Storm, Vote };

Family family_for(std::size_t index) {
  if (index % 25 == 24) return Family::Vote;
  return index % 2 == 0 ? Family::Crash : Family::Storm;
}

struct Draw {
  std::string city, month, day;
  std::string sev, people, cars, minutes, cleanup;
  std::string homes, schools, speed, hours;
  std::string damage, fund;
};

const std::string& pick(const std::vector<std::string>& pool, Rng& r) {
  return pool[r.uniform_index(pool.size())];
}

Draw draw_slots(Family f, Rng& r) {
  Draw d;
  d.city = pick(kCities, r);
  d.month = pick(kMonths, r);
  d.day = pick(kDays, r);
  switch (f) {
    case Family::Crash:
      d.sev = pick(kSeverities, r);
      d.people = pick(kPeople, r);
      d.cars = pick(kCars, r);
      d.minutes = pick(kMinutes, r);
      d.cleanup = pick(kCleanup, r);
      d.damage = pick(kDamage, r);
      d.fund = pick(kFund, r);
      break;
    case Family::Storm:
      d.speed = pick(kSpeed, r);
      d.homes = pick(kHomes, r);
      d.schools = pick(kSchools, r);
      d.hours = pick(kHours, r);
      d.damage = pick(kDamage, r);
      d.fund = pick(kFund, r);
      break;
    case Family::Vote:
      break;
  }
  return d;
}

const std::string& value_of(const Draw& d, Slot s) {
  switch (s) {
    case Slot::People: return d.people;
    case Slot::Cars: return d.cars;
    case Slot::Minutes: return d.minutes;
    case Slot::Cleanup: return d.cleanup;
    case Slot::Damage: return d.damage;
    case Slot::Fund: return d.fund;
    case Slot::Homes: return d.homes;
    case Slot::Schools: return d.schools;
    case Slot::Speed: return d.speed;
    case Slot::Hours: return d.hours;
  }
  throw std::logic_error("unknown slot");
}

std::string cap(std::string s) {
  if (!s.empty() && s[0] >= 'a' && s[0] <= 'z') s[0] = static_cast<char>(s[0] - 'a' + 'A');
  return s;
}

std::string render_article(Family f, const Draw& d) {
  switch (f) {
    case Family::Crash:
      return "A " + d.sev + " crash in " + d.city + " on " + d.month + " " + d.day + " left " +
             d.people + " people hurt and caused " + d.damage + " of damage. Police said " +
             d.cars + " cars were involved and the road was closed for " + d.minutes +
             " minutes. The cleanup took " + d.cleanup + " minutes and residents raised " +
             d.fund + " for the victims.";
    case Family::Storm:
      return "A storm hit " + d.city + " on " + d.month + " " + d.day + " with winds of " +
             d.speed + " mph. About " + d.homes + " homes lost power and " + d.schools +
             " schools closed while crews spent " + d.hours +
             " hours restoring lines. Damage reached " + d.damage +
             " and the council pledged " + d.fund + " for repairs.";
    case Family::Vote:
      return "The vote in " + d.city + " was held on " + d.month + " " + d.day +
             ". Officials counted ballots through the night and results were declared the "
             "next morning.";
  }
  throw std::logic_error("unknown family");
}

std::string render_summary(Family f, std::size_t variant, const Draw& d) {
  switch (f) {
    case Family::Crash:
      switch (variant) {
        case 0: return cap(d.people) + " people were hurt in a crash in " + d.city + ".";
        case 1: return "A crash in " + d.city + " caused " + d.damage + " of damage.";
        case 2: return "Police said " + d.cars + " cars were involved in " + d.city + ".";
        case 3: return "The road in " + d.city + " was closed for " + d.minutes + " minutes.";
        default:
          return cap(d.people) + " people were hurt and the road was closed for " + d.minutes +
                 " minutes.";
      }
    case Family::Storm:
      switch (variant) {
        case 0: return "About " + d.homes + " homes lost power in " + d.city + ".";
        case 1: return "Crews spent " + d.hours + " hours restoring power in " + d.city + ".";
        case 2: return "Damage reached " + d.damage + " after the storm in " + d.city + ".";
        case 3: return "The council pledged " + d.fund + " for repairs in " + d.city + ".";
        default:
          return "About " + d.homes + " homes lost power and crews spent " + d.hours +
                 " hours restoring lines.";
      }
    case Family::Vote:
      return "The vote in " + d.city + " was held on " + d.month + " " + d.day + ".";
  }
  throw std::logic_error("unknown family");
}

// Which slot each summary quantity span belongs to, in reading order.
std::vector<Slot> summary_slots(Family f, std::size_t variant) {
  switch (f) {
    case Family::Crash:
      switch (variant) {
        case 0: return {Slot::People};
        case 1: return {Slot::Damage};
        case 2: return {Slot::Cars};
        case 3: return {Slot::Minutes};
        default: return {Slot::People, Slot::Minutes};
      }
    case Family::Storm:
      switch (variant) {
        case 0: return {Slot::Homes};
        case 1: return {Slot::Hours};
        case 2: return {Slot::Damage};
        case 3: return {Slot::Fund};
        default: return {Slot::Homes, Slot::Hours};
      }
    case Family::Vote:
      return {};
  }
  throw std::logic_error("unknown family");
}

std::string pad4(std::size_t n) {
  std::string s = std::to_string(n);
  return std::string(s.size() < 4 ? 4 - s.size() : 0, '0') + s;
}

std::string join_words(const std::vector<std::string>& words) {
  std::string out;
  for (std::size_t i = 0; i < words.size(); ++i) {
    if (i > 0) out += ' ';
    out += words[i];
  }
  return out;
}

}  // namespace

std::vector<CorpusRecord> make_toy_corpus(std::size_t count, std::uint64_t seed) {
  std::vector<CorpusRecord> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    Family f = family_for(i);
    std::size_t variant = (i / 2) % 5;
    Rng r = Rng::keyed(seed, "toy/slots", i);
    Draw d = draw_slots(f, r);
    out.push_back(CorpusRecord::from_text("toy-" + pad4(i), render_article(f, d),
                                          render_summary(f, variant, d)));
  }
  return out;
}

std::vector<ToyBeam> make_toy_beams(std::size_t count, std::size_t k, std::uint64_t seed) {
  if (k < 2 || k > 5)
    throw ConfigError("beam size must be between 2 and 5, got " + std::to_string(k));
  std::vector<ToyBeam> out;
  out.reserve(count);
  for (std::size_t b = 0; b < count; ++b) {
    // Crash and Storm records only; Vote records have nothing to corrupt.
    Family f = b % 2 == 0 ? Family::Crash : Family::Storm;
    std::size_t variant = (b / 2) % 5;
    Rng r = Rng::keyed(seed, "beam/slots", b);
    Draw d = draw_slots(f, r);
    std::string article = render_article(f, d);
    std::string faithful = render_summary(f, variant, d);

    TokenSeq tokens = tokenize(faithful);
    std::vector<QuantitySpan> spans = tag_quantities(tokens);
    std::vector<Slot> slots = summary_slots(f, variant);
    if (spans.size() != slots.size())
      throw std::logic_error("toy summary tagged " + std::to_string(spans.size()) +
                             " spans, template has " + std::to_string(slots.size()));

    // Per span, the partner pool minus the article's own partner value, in a
    // shuffled order; candidate c takes the c-th entry, so corrupted
    // candidates never repeat a replacement.
    std::vector<std::vector<std::string>> choices(spans.size());
    for (std::size_t j = 0; j < spans.size(); ++j) {
      Slot partner = partner_of(slots[j]);
      for (const std::string& v : pool_of(partner))
        if (v != value_of(d, partner)) choices[j].push_back(v);
      Rng::keyed(seed, "beam/pick", b * 8 + j).shuffle(choices[j]);
      if (choices[j].size() < k - 1) throw std::logic_error("partner pool too small");
    }

    std::vector<BeamCandidate> made(k);
    made[0].text = faithful;
    for (std::size_t c = 1; c < k; ++c) {
      std::vector<std::string> words;
      std::size_t pos = 0;
      for (std::size_t j = 0; j < spans.size(); ++j) {
        for (; pos < spans[j].token_start; ++pos) words.push_back(tokens[pos].text);
        for (const std::string& w : span_tokens(partner_of(slots[j]), choices[j][c - 1]))
          words.push_back(w);
        pos = spans[j].token_end;
      }
      for (; pos < tokens.size(); ++pos) words.push_back(tokens[pos].text);
      made[c].text = join_words(words);
    }

    std::vector<std::size_t> perm(k);
    for (std::size_t p = 0; p < k; ++p) perm[p] = p;
    Rng::keyed(seed, "beam/order", b).shuffle(perm);

    ToyBeam tb;
    tb.beam.id = "beam-" + pad4(b);
    tb.beam.article_text = std::move(article);
    tb.beam.candidates.resize(k);
    for (std::size_t p = 0; p < k; ++p) {
      tb.beam.candidates[p] = std::move(made[perm[p]]);
      tb.beam.candidates[p].beam_rank = static_cast<int>(p);
      if (perm[p] == 0) tb.faithful = p;
    }
    out.push_back(std::move(tb));
  }
  return out;
}

}  // namespace herman
