#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <unordered_map>
#include <vector>

#include "segdiag/corpus.hpp"

namespace segdiag {

struct StringHash {
  using is_transparent = void;
  std::size_t operator()(std::string_view s) const noexcept { return std::hash<std::string_view>{}(s); }
};

template <typename V>
using StringMap = std::unordered_map<std::string, V, StringHash, std::equal_to<>>;

// Token-level counts over a training corpus: word occurrences keyed by their
// label sequence plus per-character tag counts. Append-only while building,
// then treated as immutable (safe to share across threads).
class TrainingStats {
 public:
  void add_word(std::string_view word, const LabelSeq& labels, std::int64_t n = 1);
  void add_char(char32_t c, char tag, std::int64_t n = 1);
  void add_sentence(const Sentence& sentence);

  std::int64_t word_count(std::string_view word) const;
  std::int64_t word_label_count(std::string_view word, const LabelSeq& labels) const;
  std::int64_t char_count(char32_t c) const;
  std::int64_t char_label_count(char32_t c, char tag) const;

  std::int64_t total_word_tokens() const { return total_word_tokens_; }
  std::int64_t total_char_tokens() const { return total_char_tokens_; }

  bool in_vocabulary(std::string_view word) const;
  std::size_t vocabulary_size() const { return word_counts_.size(); }

  // Pointwise count addition; commutative and associative.
  TrainingStats& merge(const TrainingStats& other);

 private:
  StringMap<StringMap<std::int64_t>> word_label_counts_;
  StringMap<std::int64_t> word_counts_;
  std::unordered_map<char32_t, std::array<std::int64_t, 4>> char_label_counts_;
  std::int64_t total_word_tokens_ = 0;
  std::int64_t total_char_tokens_ = 0;
};

// Rejects an empty training set.
TrainingStats build_training_stats(const std::vector<Sentence>& train);

// Label consistency of a word occurrence: share of the word's training
// occurrences carrying exactly this label sequence, 0 for unseen words.
double psi_word(std::string_view word, const LabelSeq& labels, const TrainingStats& stats);

// Character-level analogue over BMES tags.
double psi_char(char32_t c, char tag, const TrainingStats& stats);

// The seven per-word attributes.
enum class Attribute { kWLen, kSLen, kODen, kWFre, kCFre, kWCon, kCCon };

inline constexpr std::array<Attribute, 7> kAllAttributes = {
    Attribute::kWLen, Attribute::kSLen, Attribute::kODen, Attribute::kWFre,
    Attribute::kCFre, Attribute::kWCon, Attribute::kCCon};

std::string_view attribute_name(Attribute a);
std::optional<Attribute> attribute_from_name(std::string_view name);

// wLen and sLen take integer values; the rest are ratios in [0, 1].
bool attribute_is_integer(Attribute a);

struct AttributeVector {
  double wlen = 0;
  double slen = 0;
  double oden = 0;
  double wfre = 0;
  double cfre = 0;
  double wcon = 0;
  double ccon = 0;
};

double attribute_value(const AttributeVector& v, Attribute a);

enum class SlenUnit { kChar, kWord };

std::string_view slen_unit_name(SlenUnit u);
std::optional<SlenUnit> slen_unit_from_name(std::string_view name);

// Fraction of the sentence's words absent from the training vocabulary.
double sentence_oov_density(const Sentence& sentence, const TrainingStats& stats);

// Attributes of one span in its sentence. Sentence-level attributes (sLen,
// oDen) are taken from `sentence`, so predicted spans evaluated against the
// gold sentence land in the same buckets as their gold twins.
AttributeVector attribute_vector(const Span& span, const Sentence& sentence,
                                 const TrainingStats& stats, SlenUnit slen_unit = SlenUnit::kChar);

}  // namespace segdiag
