#include "segdiag/attributes.hpp"

#include "segdiag/numeric.hpp"
#include "segdiag/utf8.hpp"

namespace segdiag {

void TrainingStats::add_word(std::string_view word, const LabelSeq& labels, std::int64_t n) {
  if (n <= 0) throw ValidationError("count must be positive");
  for (char t : labels) {
    if (tag_index(t) < 0) throw ValidationError("label sequence contains a non-BMES tag");
  }
  auto& per_label = word_label_counts_.try_emplace(std::string(word)).first->second;
  per_label[labels] += n;
  word_counts_.try_emplace(std::string(word)).first->second += n;
  total_word_tokens_ += n;
}

void TrainingStats::add_char(char32_t c, char tag, std::int64_t n) {
  if (n <= 0) throw ValidationError("count must be positive");
  const int t = tag_index(tag);
  if (t < 0) throw ValidationError("non-BMES tag");
  char_label_counts_.try_emplace(c).first->second[static_cast<std::size_t>(t)] += n;
  total_char_tokens_ += n;
}

void TrainingStats::add_sentence(const Sentence& sentence) {
  for (std::size_t i = 0; i < sentence.word_count(); ++i) {
    const auto word = sentence.word_chars(i);
    const LabelSeq labels = derive_labels(word.size());
    add_word(utf8_encode(word), labels);
    for (std::size_t k = 0; k < word.size(); ++k) add_char(word[k], labels[k]);
  }
}

std::int64_t TrainingStats::word_count(std::string_view word) const {
  auto it = word_counts_.find(word);
  return it == word_counts_.end() ? 0 : it->second;
}

std::int64_t TrainingStats::word_label_count(std::string_view word, const LabelSeq& labels) const {
  auto it = word_label_counts_.find(word);
  if (it == word_label_counts_.end()) return 0;
  auto jt = it->second.find(labels);
  return jt == it->second.end() ? 0 : jt->second;
}

std::int64_t TrainingStats::char_count(char32_t c) const {
  auto it = char_label_counts_.find(c);
  if (it == char_label_counts_.end()) return 0;
  std::int64_t total = 0;
  for (std::int64_t v : it->second) total += v;
  return total;
}

std::int64_t TrainingStats::char_label_count(char32_t c, char tag) const {
  const int t = tag_index(tag);
  if (t < 0) return 0;
  auto it = char_label_counts_.find(c);
  return it == char_label_counts_.end() ? 0 : it->second[static_cast<std::size_t>(t)];
}

bool TrainingStats::in_vocabulary(std::string_view word) const {
  return word_counts_.find(word) != word_counts_.end();
}

TrainingStats& TrainingStats::merge(const TrainingStats& other) {
  for (const auto& [word, per_label] : other.word_label_counts_) {
    auto& mine = word_label_counts_.try_emplace(word).first->second;
    for (const auto& [labels, n] : per_label) mine[labels] += n;
  }
  for (const auto& [word, n] : other.word_counts_) {
    word_counts_.try_emplace(word).first->second += n;
  }
  for (const auto& [c, per_tag] : other.char_label_counts_) {
    auto& mine = char_label_counts_.try_emplace(c).first->second;
    for (std::size_t t = 0; t < per_tag.size(); ++t) mine[t] += per_tag[t];
  }
  total_word_tokens_ += other.total_word_tokens_;
  total_char_tokens_ += other.total_char_tokens_;
  return *this;
}

TrainingStats build_training_stats(const std::vector<Sentence>& train) {
  if (train.empty()) throw ValidationError("training set is empty");
  TrainingStats stats;
  for (const auto& s : train) stats.add_sentence(s);
  return stats;
}

double psi_word(std::string_view word, const LabelSeq& labels, const TrainingStats& stats) {
  const std::int64_t total = stats.word_count(word);
  if (total == 0) return 0.0;
  return static_cast<double>(stats.word_label_count(word, labels)) / static_cast<double>(total);
}

double psi_char(char32_t c, char tag, const TrainingStats& stats) {
  const std::int64_t total = stats.char_count(c);
  if (total == 0) return 0.0;
  return static_cast<double>(stats.char_label_count(c, tag)) / static_cast<double>(total);
}

std::string_view attribute_name(Attribute a) {
  switch (a) {
    case Attribute::kWLen: return "wLen";
    case Attribute::kSLen: return "sLen";
    case Attribute::kODen: return "oDen";
    case Attribute::kWFre: return "wFre";
    case Attribute::kCFre: return "cFre";
    case Attribute::kWCon: return "wCon";
    case Attribute::kCCon: return "cCon";
  }
  return "?";
}

std::optional<Attribute> attribute_from_name(std::string_view name) {
  for (Attribute a : kAllAttributes) {
    if (attribute_name(a) == name) return a;
  }
  return std::nullopt;
}

bool attribute_is_integer(Attribute a) {
  return a == Attribute::kWLen || a == Attribute::kSLen;
}

double attribute_value(const AttributeVector& v, Attribute a) {
  switch (a) {
    case Attribute::kWLen: return v.wlen;
    case Attribute::kSLen: return v.slen;
    case Attribute::kODen: return v.oden;
    case Attribute::kWFre: return v.wfre;
    case Attribute::kCFre: return v.cfre;
    case Attribute::kWCon: return v.wcon;
    case Attribute::kCCon: return v.ccon;
  }
  return 0.0;
}

std::string_view slen_unit_name(SlenUnit u) {
  return u == SlenUnit::kChar ? "char" : "word";
}

std::optional<SlenUnit> slen_unit_from_name(std::string_view name) {
  if (name == "char") return SlenUnit::kChar;
  if (name == "word") return SlenUnit::kWord;
  return std::nullopt;
}

double sentence_oov_density(const Sentence& sentence, const TrainingStats& stats) {
  std::int64_t oov = 0;
  for (std::size_t i = 0; i < sentence.word_count(); ++i) {
    if (!stats.in_vocabulary(sentence.word_text(i))) ++oov;
  }
  return static_cast<double>(oov) / static_cast<double>(sentence.word_count());
}

AttributeVector attribute_vector(const Span& span, const Sentence& sentence,
                                 const TrainingStats& stats, SlenUnit slen_unit) {
  if (stats.total_word_tokens() == 0 || stats.total_char_tokens() == 0) {
    throw ValidationError("attribute_vector: empty training stats");
  }
  AttributeVector v;
  v.wlen = static_cast<double>(span.char_len());
  v.slen = static_cast<double>(slen_unit == SlenUnit::kChar ? sentence.char_count()
                                                            : sentence.word_count());
  v.oden = sentence_oov_density(sentence, stats);
  v.wfre = static_cast<double>(stats.word_count(span.text)) /
           static_cast<double>(stats.total_word_tokens());
  v.wcon = psi_word(span.text, span.labels, stats);

  const std::u32string chars = utf8_decode(span.text);
  StableSum cfre;
  StableSum ccon;
  for (std::size_t k = 0; k < chars.size(); ++k) {
    cfre.add(static_cast<double>(stats.char_count(chars[k])) /
             static_cast<double>(stats.total_char_tokens()));
    ccon.add(psi_char(chars[k], span.labels[k], stats));
  }
  v.cfre = cfre.value() / static_cast<double>(chars.size());
  v.ccon = ccon.value() / static_cast<double>(chars.size());
  return v;
}

}  // namespace segdiag
