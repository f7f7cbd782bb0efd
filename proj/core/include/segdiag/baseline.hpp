#pragma once

#include <string>
#include <unordered_set>
#include <vector>

#include "segdiag/corpus.hpp"

namespace segdiag {

// Vocabulary for dictionary matching; non-empty by construction.
class MatchDict {
 public:
  static MatchDict from_sentences(const std::vector<Sentence>& sentences);
  static MatchDict from_words(const std::vector<std::u32string>& words);

  bool contains(const std::u32string& word) const { return vocab_.contains(word); }
  std::size_t max_word_len() const { return max_len_; }
  std::size_t size() const { return vocab_.size(); }

 private:
  std::unordered_set<std::u32string> vocab_;
  std::size_t max_len_ = 0;
};

// Forward maximum matching: greedy longest dictionary prefix, single-character
// fallback for unmatched characters. Output ranges tile the input.
std::vector<CharRange> segment_fmm(std::u32string_view chars, const MatchDict& dict);

Sentence segment_sentence_fmm(std::u32string_view chars, const MatchDict& dict);

}  // namespace segdiag
