#include "herman/io.hpp"

#include <json.hpp>

#include <fstream>
#include <utility>

#include "herman/errors.hpp"

namespace herman {

namespace {

using nlohmann::json;

json header_line(const FileHeader& h) {
  return json{{"_type", "header"},
              {"tool", "herman"},
              {"tool_version", h.tool_version},
              {"config_hash", h.config_hash},
              {"seed", h.seed}};
}

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw DataError("cannot open " + path + " for writing");
  return out;
}

std::ifstream open_in(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw DataError("cannot open " + path);
  return in;
}

std::string where(const std::string& path, std::size_t line_no) {
  return path + ":" + std::to_string(line_no);
}

// Parses one JSONL line; returns a null json for blank and header lines.
json parse_line(const std::string& path, std::size_t line_no, const std::string& line) {
  std::size_t first = line.find_first_not_of(" \t\r");
  if (first == std::string::npos) return json();
  json j = json::parse(line, nullptr, false);
  if (j.is_discarded()) throw DataError(where(path, line_no) + ": invalid JSON");
  if (!j.is_object()) throw DataError(where(path, line_no) + ": expected a JSON object");
  if (j.value("_type", "") == "header") return json();
  return j;
}

std::string require_string(const json& j, const char* key, const std::string& at) {
  auto it = j.find(key);
  if (it == j.end()) throw DataError(at + ": missing field \"" + key + "\"");
  if (it->is_number_integer()) return std::to_string(it->get<long long>());
  if (!it->is_string()) throw DataError(at + ": field \"" + key + "\" must be a string");
  return it->get<std::string>();
}

template <typename Fn>
void for_each_record(const std::string& path, Fn&& fn) {
  std::ifstream in = open_in(path);
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    json j = parse_line(path, line_no, line);
    if (j.is_null()) continue;
    fn(j, line_no);
  }
}

json span_json(const QuantitySpan& s) {
  return json{{"type", quantity_type_name(s.qtype)},
              {"token_start", s.token_start},
              {"token_end", s.token_end},
              {"surface", s.surface},
              {"normalized", s.normalized}};
}

std::vector<std::string> token_texts(const TokenSeq& tokens) {
  std::vector<std::string> out;
  out.reserve(tokens.size());
  for (const Token& t : tokens) out.push_back(t.text);
  return out;
}

}  // namespace

std::vector<CorpusRecord> read_corpus(const std::string& path) {
  std::vector<CorpusRecord> records;
  for_each_record(path, [&](const json& j, std::size_t line_no) {
    std::string at = where(path, line_no);
    records.push_back(CorpusRecord::from_text(require_string(j, "id", at),
                                              require_string(j, "article", at),
                                              require_string(j, "summary", at)));
  });
  return records;
}

void write_corpus(const std::string& path, const std::vector<CorpusRecord>& records,
                  const FileHeader& header) {
  std::ofstream out = open_out(path);
  out << header_line(header).dump() << '\n';
  for (const CorpusRecord& r : records) {
    json j{{"id", r.id}, {"article", r.article_text}, {"summary", r.summary_text}};
    out << j.dump() << '\n';
  }
}

void write_dataset(const std::string& path, const std::vector<LabeledInstance>& instances,
                   const FileHeader& header) {
  std::ofstream out = open_out(path);
  out << header_line(header).dump() << '\n';
  for (const LabeledInstance& inst : instances) {
    json y = json::array();
    for (TagLabel t : inst.y) y.push_back(tag_label_name(t));
    json j{{"id", inst.record.id},
           {"variant", inst.z == ZLabel::Verified ? "verified" : "unverified"},
           {"article_tokens", token_texts(inst.record.article)},
           {"summary_tokens", token_texts(inst.record.summary)},
           {"y", std::move(y)},
           {"m", inst.m},
           {"z", z_label_name(inst.z)}};
    out << j.dump() << '\n';
  }
}

std::vector<LabeledInstance> read_dataset(const std::string& path) {
  std::vector<LabeledInstance> instances;
  for_each_record(path, [&](const json& j, std::size_t line_no) {
    std::string at = where(path, line_no);
    LabeledInstance inst;
    inst.record.id = require_string(j, "id", at);
    try {
      auto article = j.at("article_tokens").get<std::vector<std::string>>();
      auto summary = j.at("summary_tokens").get<std::vector<std::string>>();
      std::tie(inst.record.article_text, inst.record.article) = layout_tokens(article);
      std::tie(inst.record.summary_text, inst.record.summary) = layout_tokens(summary);
      for (const auto& name : j.at("y").get<std::vector<std::string>>()) {
        TagLabel t;
        if (!tag_label_from_name(name, t)) throw DataError(at + ": unknown tag \"" + name + "\"");
        inst.y.push_back(t);
      }
      inst.m = j.at("m").get<std::vector<std::uint8_t>>();
      ZLabel z;
      if (!z_label_from_name(j.at("z").get<std::string>(), z))
        throw DataError(at + ": unknown z label");
      inst.z = z;
    } catch (const json::exception& e) {
      throw DataError(at + ": " + e.what());
    }
    try {
      inst.validate();
    } catch (const DataError& e) {
      throw DataError(at + ": " + e.what());
    }
    instances.push_back(std::move(inst));
  });
  return instances;
}

void write_spans(const std::string& path, const std::vector<CorpusRecord>& records,
                 const FileHeader& header) {
  std::ofstream out = open_out(path);
  out << header_line(header).dump() << '\n';
  for (const CorpusRecord& r : records) {
    json article_spans = json::array(), summary_spans = json::array();
    for (const QuantitySpan& s : tag_quantities(r.article)) article_spans.push_back(span_json(s));
    for (const QuantitySpan& s : tag_quantities(r.summary)) summary_spans.push_back(span_json(s));
    json j{{"id", r.id},
           {"article_spans", std::move(article_spans)},
           {"summary_spans", std::move(summary_spans)}};
    out << j.dump() << '\n';
  }
}

std::vector<Beam> read_beams(const std::string& path) {
  std::vector<Beam> beams;
  for_each_record(path, [&](const json& j, std::size_t line_no) {
    std::string at = where(path, line_no);
    Beam beam;
    beam.id = require_string(j, "id", at);
    beam.article_text = require_string(j, "article", at);
    auto it = j.find("candidates");
    if (it == j.end() || !it->is_array() || it->empty())
      throw DataError(at + ": beam needs a non-empty candidates array");
    std::vector<bool> seen;
    for (const json& c : *it) {
      BeamCandidate cand;
      cand.text = require_string(c, "text", at);
      try {
        cand.beam_rank = c.at("beam_rank").get<int>();
        if (c.contains("model_score")) cand.model_score = c.at("model_score").get<double>();
      } catch (const json::exception& e) {
        throw DataError(at + ": " + e.what());
      }
      if (cand.beam_rank < 0) throw DataError(at + ": negative beam_rank");
      if (static_cast<std::size_t>(cand.beam_rank) >= seen.size())
        seen.resize(cand.beam_rank + 1, false);
      if (seen[cand.beam_rank])
        throw DataError(at + ": duplicate beam_rank " + std::to_string(cand.beam_rank));
      seen[cand.beam_rank] = true;
      beam.candidates.push_back(std::move(cand));
    }
    beams.push_back(std::move(beam));
  });
  return beams;
}

namespace {

json candidate_json(const BeamCandidate& c) {
  json j{{"text", c.text}, {"beam_rank", c.beam_rank}};
  if (c.model_score) j["model_score"] = *c.model_score;
  return j;
}

}  // namespace

void write_beams(const std::string& path, const std::vector<Beam>& beams,
                 const FileHeader& header) {
  std::ofstream out = open_out(path);
  out << header_line(header).dump() << '\n';
  for (const Beam& b : beams) {
    json cands = json::array();
    for (const BeamCandidate& c : b.candidates) cands.push_back(candidate_json(c));
    json j{{"id", b.id}, {"article", b.article_text}, {"candidates", std::move(cands)}};
    out << j.dump() << '\n';
  }
}

void write_ranked(const std::string& path, const std::vector<RankedBeam>& ranked,
                  const FileHeader& header) {
  std::ofstream out = open_out(path);
  out << header_line(header).dump() << '\n';
  for (const RankedBeam& rb : ranked) {
    json cands = json::array();
    for (std::size_t i = 0; i < rb.beam.candidates.size(); ++i) {
      json c = candidate_json(rb.beam.candidates[i]);
      c["verification_score"] = rb.scores[i];
      cands.push_back(std::move(c));
    }
    json j{{"id", rb.beam.id},
           {"article", rb.beam.article_text},
           {"candidates", std::move(cands)},
           {"selected", rb.selected},
           {"selected_text", rb.beam.candidates[rb.selected].text}};
    out << j.dump() << '\n';
  }
}

}  // namespace herman
