#include "herman/vocab.hpp"

#include <algorithm>

#include "herman/errors.hpp"

namespace herman {

Vocab::Vocab() : Vocab(std::vector<std::string>{"<pad>", "<unk>"}) {}

Vocab::Vocab(std::vector<std::string> words) : words_(std::move(words)) {
  if (words_.size() < 2 || words_[kPad] != "<pad>" || words_[kUnk] != "<unk>")
    throw DataError("vocab: word list must start with <pad>, <unk>");
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (!index_.emplace(words_[i], static_cast<int>(i)).second)
      throw DataError("vocab: duplicate word " + words_[i]);
  }
}

int Vocab::id(const std::string& token) const {
  auto it = index_.find(token);
  return it == index_.end() ? kUnk : it->second;
}

const std::string& Vocab::word(int id) const {
  if (id < 0 || static_cast<std::size_t>(id) >= words_.size())
    throw DataError("vocab: id out of range");
  return words_[static_cast<std::size_t>(id)];
}

std::vector<int> Vocab::ids(const TokenSeq& tokens, std::size_t max_len) const {
  std::size_t n = std::min(tokens.size(), max_len);
  std::vector<int> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = id(tokens[i].text);
  return out;
}

void VocabBuilder::add(const std::string& token) { ++counts_[token]; }

void VocabBuilder::add_all(const TokenSeq& tokens) {
  for (const Token& t : tokens) add(t.text);
}

Vocab VocabBuilder::build(std::size_t max_size) const {
  if (max_size < 2) throw ConfigError("vocab: size must be at least 2");
  std::vector<std::pair<std::string, std::size_t>> items(counts_.begin(), counts_.end());
  std::sort(items.begin(), items.end(), [](const auto& a, const auto& b) {
    if (a.second != b.second) return a.second > b.second;
    return a.first < b.first;
  });
  std::vector<std::string> words = {"<pad>", "<unk>"};
  for (const auto& [word, count] : items) {
    if (words.size() >= max_size) break;
    words.push_back(word);
  }
  return Vocab(std::move(words));
}

}  // namespace herman
