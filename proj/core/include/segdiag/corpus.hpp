#pragma once

#include <compare>
#include <cstdint>
#include <filesystem>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "segdiag/errors.hpp"

namespace segdiag {

// Half-open character range [start, end) in Unicode scalar values.
struct CharRange {
  std::uint32_t start = 0;
  std::uint32_t end = 0;

  std::uint32_t length() const { return end - start; }
  friend auto operator<=>(const CharRange&, const CharRange&) = default;
};

// One BMES tag per character of a word: "S" for single-character words,
// "B" (M*) "E" otherwise.
using LabelSeq = std::string;

inline constexpr char kTagB = 'B';
inline constexpr char kTagM = 'M';
inline constexpr char kTagE = 'E';
inline constexpr char kTagS = 'S';

// B=0 M=1 E=2 S=3; -1 for anything else.
int tag_index(char tag);

// The unique gold BMES pattern for a word of the given length.
LabelSeq derive_labels(std::size_t word_length);

// A sentence as a character sequence plus its gold word ranges. Word ranges
// are non-empty, adjacent and tile the characters exactly; instances are
// immutable after construction.
class Sentence {
 public:
  Sentence() = default;

  // Word strings must be non-empty and free of separator characters.
  static Sentence from_words(const std::vector<std::string>& utf8_words);
  static Sentence from_words(std::vector<std::u32string> words);

  const std::u32string& chars() const { return chars_; }
  std::size_t char_count() const { return chars_.size(); }

  const std::vector<CharRange>& words() const { return words_; }
  std::size_t word_count() const { return words_.size(); }

  std::u32string_view word_chars(std::size_t i) const;
  std::string word_text(std::size_t i) const;

  // Words joined by a single ASCII space (no trailing newline).
  std::string to_line() const;

  friend bool operator==(const Sentence&, const Sentence&) = default;

 private:
  std::u32string chars_;
  std::vector<CharRange> words_;
};

// One gold (or predicted) word occurrence.
struct Span {
  std::uint32_t sentence_index = 0;
  CharRange range;
  std::string text;  // UTF-8
  LabelSeq labels;

  std::size_t char_len() const { return labels.size(); }
  friend bool operator==(const Span&, const Span&) = default;
};

// Spans sorted by start, labels from derive_labels.
std::vector<Span> extract_spans(const Sentence& sentence, std::uint32_t sentence_index);
std::vector<Span> extract_spans(const std::vector<Sentence>& sentences);

struct Corpus {
  std::string name;
  std::vector<Sentence> train;
  std::vector<Sentence> dev;
  std::vector<Sentence> test;
};

// Optional character substitution applied at load time (e.g. a user-supplied
// traditional-to-simplified table).
using CharMap = std::unordered_map<char32_t, char32_t>;

// Two whitespace-separated columns per line, one source and one replacement
// character each. '#' starts a comment line.
CharMap load_char_map(const std::filesystem::path& path);

struct ParsedFile {
  std::vector<Sentence> sentences;
  std::size_t blank_lines_skipped = 0;
};

// Whitespace-segmented text, one sentence per line, UTF-8, LF or CRLF.
// Lines containing only whitespace are skipped and counted. Invalid UTF-8
// raises Utf8Error naming the absolute byte offset in the file.
ParsedFile parse_segmented_file(const std::filesystem::path& path, const CharMap* char_map = nullptr);
ParsedFile parse_segmented_text(std::string_view text, const CharMap* char_map = nullptr);

// Inverse of parsing: one line per sentence, single spaces, LF endings.
std::string to_segmented_text(const std::vector<Sentence>& sentences);
void write_segmented_file(const std::filesystem::path& path, const std::vector<Sentence>& sentences);

}  // namespace segdiag
