#include "segdiag/baseline.hpp"

namespace segdiag {

MatchDict MatchDict::from_sentences(const std::vector<Sentence>& sentences) {
  MatchDict dict;
  for (const auto& s : sentences) {
    for (std::size_t i = 0; i < s.word_count(); ++i) {
      const auto word = s.word_chars(i);
      dict.max_len_ = std::max(dict.max_len_, word.size());
      dict.vocab_.emplace(word);
    }
  }
  if (dict.vocab_.empty()) throw ValidationError("match dictionary is empty");
  return dict;
}

MatchDict MatchDict::from_words(const std::vector<std::u32string>& words) {
  MatchDict dict;
  for (const auto& word : words) {
    if (word.empty()) throw ValidationError("dictionary word must be non-empty");
    dict.max_len_ = std::max(dict.max_len_, word.size());
    dict.vocab_.insert(word);
  }
  if (dict.vocab_.empty()) throw ValidationError("match dictionary is empty");
  return dict;
}

std::vector<CharRange> segment_fmm(std::u32string_view chars, const MatchDict& dict) {
  if (chars.empty()) throw ValidationError("segment_fmm: empty input");
  std::vector<CharRange> ranges;
  std::u32string probe;
  std::size_t pos = 0;
  while (pos < chars.size()) {
    std::size_t len = std::min(dict.max_word_len(), chars.size() - pos);
    while (len > 1) {
      probe.assign(chars.substr(pos, len));
      if (dict.contains(probe)) break;
      --len;
    }
    ranges.push_back({static_cast<std::uint32_t>(pos), static_cast<std::uint32_t>(pos + len)});
    pos += len;
  }
  return ranges;
}

Sentence segment_sentence_fmm(std::u32string_view chars, const MatchDict& dict) {
  std::vector<std::u32string> words;
  for (const CharRange r : segment_fmm(chars, dict)) {
    words.emplace_back(chars.substr(r.start, r.length()));
  }
  return Sentence::from_words(std::move(words));
}

}  // namespace segdiag
