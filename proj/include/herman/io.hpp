#ifndef HERMAN_IO_HPP
#define HERMAN_IO_HPP

#include <cstdint>
#include <string>
#include <vector>

#include "herman/labels.hpp"
#include "herman/quantity.hpp"
#include "herman/rerank.hpp"
#include "herman/token.hpp"

namespace herman {

// Provenance header written as the first line of every output file, so any
// artifact can be traced to the tool build, config and seed that produced it.
struct FileHeader {
  std::string tool_version;
  std::string config_hash;
  std::uint64_t seed = 0;
};

// Corpus files: one {"id", "article", "summary"} object per line. Readers
// skip header lines and report the line number of any malformed record.
std::vector<CorpusRecord> read_corpus(const std::string& path);
void write_corpus(const std::string& path, const std::vector<CorpusRecord>& records,
                  const FileHeader& header);

// Labeled datasets: one {"id", "variant", "article_tokens", "summary_tokens",
// "y", "m", "z"} object per instance.
void write_dataset(const std::string& path, const std::vector<LabeledInstance>& instances,
                   const FileHeader& header);
std::vector<LabeledInstance> read_dataset(const std::string& path);

// tag-quantities output: per record, both span lists with indices, types,
// surface and normalized forms.
void write_spans(const std::string& path, const std::vector<CorpusRecord>& records,
                 const FileHeader& header);

// Beam files: {"id", "article", "candidates": [{"text", "beam_rank",
// "model_score"?}]} per line. beam_rank must be unique within a beam.
std::vector<Beam> read_beams(const std::string& path);
void write_beams(const std::string& path, const std::vector<Beam>& beams,
                 const FileHeader& header);
void write_ranked(const std::string& path, const std::vector<RankedBeam>& ranked,
                  const FileHeader& header);

}  // namespace herman

#endif
