#include "segdiag/corpus.hpp"

#include <fstream>
#include <sstream>

#include "segdiag/utf8.hpp"

namespace segdiag {

int tag_index(char tag) {
  switch (tag) {
    case kTagB: return 0;
    case kTagM: return 1;
    case kTagE: return 2;
    case kTagS: return 3;
    default: return -1;
  }
}

LabelSeq derive_labels(std::size_t word_length) {
  if (word_length == 0) throw ValidationError("derive_labels: word length must be >= 1");
  if (word_length == 1) return LabelSeq(1, kTagS);
  LabelSeq labels(word_length, kTagM);
  labels.front() = kTagB;
  labels.back() = kTagE;
  return labels;
}

Sentence Sentence::from_words(const std::vector<std::string>& utf8_words) {
  std::vector<std::u32string> words;
  words.reserve(utf8_words.size());
  for (const auto& w : utf8_words) words.push_back(utf8_decode(w));
  return from_words(std::move(words));
}

Sentence Sentence::from_words(std::vector<std::u32string> words) {
  if (words.empty()) throw ValidationError("sentence must contain at least one word");
  Sentence s;
  s.words_.reserve(words.size());
  for (const auto& w : words) {
    if (w.empty()) throw ValidationError("sentence word must be non-empty");
    for (char32_t c : w) {
      if (is_unicode_space(c)) throw ValidationError("sentence word contains a separator character");
    }
    const auto start = static_cast<std::uint32_t>(s.chars_.size());
    s.chars_ += w;
    s.words_.push_back({start, static_cast<std::uint32_t>(s.chars_.size())});
  }
  return s;
}

std::u32string_view Sentence::word_chars(std::size_t i) const {
  const CharRange r = words_[i];
  return std::u32string_view(chars_).substr(r.start, r.length());
}

std::string Sentence::word_text(std::size_t i) const { return utf8_encode(word_chars(i)); }

std::string Sentence::to_line() const {
  std::string out;
  for (std::size_t i = 0; i < words_.size(); ++i) {
    if (i > 0) out.push_back(' ');
    out += utf8_encode(word_chars(i));
  }
  return out;
}

std::vector<Span> extract_spans(const Sentence& sentence, std::uint32_t sentence_index) {
  std::vector<Span> spans;
  spans.reserve(sentence.word_count());
  for (std::size_t i = 0; i < sentence.word_count(); ++i) {
    const CharRange r = sentence.words()[i];
    spans.push_back(Span{sentence_index, r, sentence.word_text(i), derive_labels(r.length())});
  }
  return spans;
}

std::vector<Span> extract_spans(const std::vector<Sentence>& sentences) {
  std::vector<Span> spans;
  for (std::size_t i = 0; i < sentences.size(); ++i) {
    auto s = extract_spans(sentences[i], static_cast<std::uint32_t>(i));
    spans.insert(spans.end(), s.begin(), s.end());
  }
  return spans;
}

namespace {

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) throw IoError("read failure on " + path.string());
  return std::move(buf).str();
}

void apply_char_map(std::u32string& chars, const CharMap& map) {
  for (char32_t& c : chars) {
    if (auto it = map.find(c); it != map.end()) c = it->second;
  }
}

}  // namespace

CharMap load_char_map(const std::filesystem::path& path) {
  const std::string text = read_file(path);
  CharMap map;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    std::string_view line(text.data() + pos, eol - pos);
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    ++line_no;
    pos = eol + 1;
    if (line.empty() || line.front() == '#') {
      if (pos > text.size()) break;
      continue;
    }
    std::u32string u32 = utf8_decode(line);
    std::vector<std::u32string> cols;
    std::u32string cur;
    for (char32_t c : u32) {
      if (is_unicode_space(c)) {
        if (!cur.empty()) cols.push_back(std::exchange(cur, {}));
      } else {
        cur.push_back(c);
      }
    }
    if (!cur.empty()) cols.push_back(cur);
    if (cols.empty()) continue;
    if (cols.size() != 2 || cols[0].size() != 1 || cols[1].size() != 1) {
      throw ValidationError("char map " + path.string() + " line " + std::to_string(line_no) +
                            ": expected two single-character columns");
    }
    map[cols[0][0]] = cols[1][0];
    if (pos > text.size()) break;
  }
  return map;
}

ParsedFile parse_segmented_text(std::string_view text, const CharMap* char_map) {
  ParsedFile result;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t eol = text.find('\n', pos);
    const std::size_t line_start = pos;
    std::string_view line;
    if (eol == std::string::npos) {
      line = text.substr(pos);
      pos = text.size();
    } else {
      line = text.substr(pos, eol - pos);
      pos = eol + 1;
    }
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);

    std::u32string chars;
    try {
      chars = utf8_decode(line);
    } catch (const Utf8Error& e) {
      throw Utf8Error("invalid UTF-8 at byte offset " + std::to_string(line_start + e.byte_offset()),
                      line_start + e.byte_offset());
    }
    if (char_map) apply_char_map(chars, *char_map);

    std::vector<std::u32string> words;
    std::u32string cur;
    for (char32_t c : chars) {
      if (is_unicode_space(c)) {
        if (!cur.empty()) words.push_back(std::exchange(cur, {}));
      } else {
        cur.push_back(c);
      }
    }
    if (!cur.empty()) words.push_back(std::move(cur));

    if (words.empty()) {
      if (!line.empty()) ++result.blank_lines_skipped;
      continue;
    }
    result.sentences.push_back(Sentence::from_words(std::move(words)));
  }
  return result;
}

ParsedFile parse_segmented_file(const std::filesystem::path& path, const CharMap* char_map) {
  return parse_segmented_text(read_file(path), char_map);
}

std::string to_segmented_text(const std::vector<Sentence>& sentences) {
  std::string out;
  for (const auto& s : sentences) {
    out += s.to_line();
    out.push_back('\n');
  }
  return out;
}

void write_segmented_file(const std::filesystem::path& path, const std::vector<Sentence>& sentences) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << to_segmented_text(sentences);
  if (!out) throw IoError("write failure on " + path.string());
}

}  // namespace segdiag
