// Writes the bundled toy corpus and, optionally, a matching beam file for
// rerank experiments. Both are pure functions of (count, seed), so rebuilding
// with the same arguments reproduces the checked-in files byte for byte.

#include <CLI11.hpp>

#include <cstdint>
#include <cstdio>
#include <string>
#include <vector>

#include "herman/errors.hpp"
#include "herman/io.hpp"
#include "herman/rng.hpp"
#include "herman/toy.hpp"
#include "herman/version.hpp"

namespace {

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generate the synthetic toy corpus with planted quantities"};

  std::string out = "data/toy_corpus.jsonl";
  std::string beams_out;
  std::string beam_refs_out;
  std::size_t count = 500;
  std::size_t beam_count = 200;
  std::size_t beam_k = 5;
  std::uint64_t seed = 7;
  app.add_option("--out", out, "corpus output path");
  app.add_option("--count", count, "number of records");
  app.add_option("--seed", seed, "generator seed");
  app.add_option("--beams-out", beams_out, "also write a beam file here");
  app.add_option("--beam-refs-out", beam_refs_out,
                 "reference corpus for the beams (id + article + faithful summary)");
  app.add_option("--beam-count", beam_count, "number of beams");
  app.add_option("--beam-k", beam_k, "candidates per beam");
  CLI11_PARSE(app, argc, argv);

  try {
    herman::FileHeader header;
    header.tool_version = herman::kToolVersion;
    std::string config = "count=" + std::to_string(count) + ",seed=" + std::to_string(seed);
    header.config_hash = hex64(herman::fnv1a64(config));
    header.seed = seed;

    herman::write_corpus(out, herman::make_toy_corpus(count, seed), header);
    std::printf("wrote %zu records to %s\n", count, out.c_str());

    if (!beams_out.empty()) {
      std::vector<herman::ToyBeam> toy =
          herman::make_toy_beams(beam_count, beam_k, seed + 1);
      if (!beam_refs_out.empty()) {
        std::vector<herman::CorpusRecord> refs;
        refs.reserve(toy.size());
        for (const herman::ToyBeam& tb : toy)
          refs.push_back(herman::CorpusRecord::from_text(
              tb.beam.id, tb.beam.article_text,
              tb.beam.candidates[tb.faithful].text));
        herman::write_corpus(beam_refs_out, refs, header);
        std::printf("wrote %zu beam references to %s\n", refs.size(),
                    beam_refs_out.c_str());
      }
      std::vector<herman::Beam> beams;
      beams.reserve(toy.size());
      for (herman::ToyBeam& tb : toy) beams.push_back(std::move(tb.beam));
      herman::write_beams(beams_out, beams, header);
      std::printf("wrote %zu beams to %s\n", beam_count, beams_out.c_str());
    }
  } catch (const herman::ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const herman::DataError& e) {
    std::fprintf(stderr, "data error: %s\n", e.what());
    return 3;
  }
  return 0;
}
