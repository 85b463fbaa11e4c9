#ifndef HERMAN_VOCAB_HPP
#define HERMAN_VOCAB_HPP

#include <cstddef>
#include <string>
#include <unordered_map>
#include <vector>

#include "herman/token.hpp"

namespace herman {

// Token-to-id mapping with two reserved slots. Id 0 pads batches, id 1 is
// the out-of-vocabulary bucket; real words start at 2, ordered by descending
// corpus frequency with alphabetical ties so a rebuild is reproducible.
class Vocab {
 public:
  static constexpr int kPad = 0;
  static constexpr int kUnk = 1;

  Vocab();
  explicit Vocab(std::vector<std::string> words);  // full word list incl. reserved

  int id(const std::string& token) const;  // kUnk for unknown tokens
  const std::string& word(int id) const;
  std::size_t size() const { return words_.size(); }
  const std::vector<std::string>& words() const { return words_; }

  std::vector<int> ids(const TokenSeq& tokens, std::size_t max_len) const;

 private:
  std::vector<std::string> words_;
  std::unordered_map<std::string, int> index_;
};

// Frequency counter feeding Vocab::build-style construction.
class VocabBuilder {
 public:
  void add(const std::string& token);
  void add_all(const TokenSeq& tokens);

  // Keeps the max_size - 2 most frequent words.
  Vocab build(std::size_t max_size) const;

 private:
  std::unordered_map<std::string, std::size_t> counts_;
};

}  // namespace herman

#endif
