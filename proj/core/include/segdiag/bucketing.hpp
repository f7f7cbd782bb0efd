#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "segdiag/attributes.hpp"
#include "segdiag/corpus.hpp"

namespace segdiag {

// Left-closed attribute intervals; bucket k covers [lower[k], lower[k+1]),
// the last bucket is unbounded above. Built from gold values only.
struct BucketSpec {
  Attribute attribute = Attribute::kWLen;
  std::vector<double> lower;         // ascending left edges, lower[0] = observed min
  std::vector<std::string> labels;   // display names, parallel to lower

  std::size_t size() const { return lower.size(); }

  // Values below lower[0] (possible for predicted spans) clamp to bucket 0.
  std::size_t bucket_of(double value) const;
};

// Equal-mass boundaries over the given values. Duplicate boundaries (too few
// distinct values) are merged away, so the result may have fewer buckets than
// requested; callers can compare size() against n_buckets to warn.
BucketSpec make_buckets(std::vector<double> values, std::size_t n_buckets, Attribute attribute);

struct BucketResult {
  std::size_t bucket_index = 0;
  std::int64_t gold_count = 0;
  std::int64_t pred_count = 0;
  std::int64_t match_count = 0;
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

struct Prf {
  double precision = 0;
  double recall = 0;
  double f1 = 0;
};

double f1_score(double precision, double recall);

// Exact span identity on (sentence_index, char_range). Gold spans fill the
// recall side of their bucket, predicted spans the precision side; a matched
// pair lands in one bucket because identical spans share attribute values.
std::vector<BucketResult> bucket_f1(std::span<const Span> gold, std::span<const double> gold_values,
                                    std::span<const Span> pred, std::span<const double> pred_values,
                                    const BucketSpec& spec);

// Corpus-level span precision/recall/F1 over aligned sentence lists.
Prf corpus_f1(const std::vector<Sentence>& gold, const std::vector<Sentence>& pred);
Prf corpus_f1_spans(std::span<const Span> gold, std::span<const Span> pred);

// Bucket F1 per model, attribute and bucket (the fine-grained performance
// table behind all model-wise and dataset-wise measures).
struct PerformanceTensor {
  std::vector<std::string> models;
  std::vector<Attribute> attributes;
  std::vector<BucketSpec> specs;                          // parallel to attributes
  std::vector<std::vector<std::vector<double>>> values;   // [model][attribute][bucket]
  std::vector<Prf> corpus;                                // per model
};

struct ModelPrediction {
  std::string name;
  const std::vector<Sentence>* sentences = nullptr;
};

// Gold and every prediction must align sentence-by-sentence on the same
// character stream. Bucket specs are computed once from gold attributes.
PerformanceTensor build_tensor(const std::vector<Sentence>& gold, const TrainingStats& stats,
                               const std::vector<ModelPrediction>& models, std::size_t n_buckets,
                               SlenUnit slen_unit = SlenUnit::kChar);

// Alignment check shared by build_tensor and the CLI: equal sentence counts
// and identical character streams.
void require_aligned(const std::vector<Sentence>& gold, const std::vector<Sentence>& pred);

}  // namespace segdiag
