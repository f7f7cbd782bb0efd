#include "segdiag/bucketing.hpp"

#include <algorithm>

#include "segdiag/parallel.hpp"

namespace segdiag {

std::size_t BucketSpec::bucket_of(double value) const {
  // last k with lower[k] <= value
  auto it = std::upper_bound(lower.begin(), lower.end(), value);
  if (it == lower.begin()) return 0;
  return static_cast<std::size_t>(std::distance(lower.begin(), it)) - 1;
}

namespace {

std::vector<std::string> bucket_labels(std::size_t n) {
  if (n == 1) return {"ALL"};
  if (n == 2) return {"S", "L"};
  if (n == 3) return {"S", "M", "L"};
  std::vector<std::string> labels;
  labels.reserve(n);
  for (std::size_t i = 1; i <= n; ++i) labels.push_back("Q" + std::to_string(i));
  return labels;
}

}  // namespace

BucketSpec make_buckets(std::vector<double> values, std::size_t n_buckets, Attribute attribute) {
  if (values.empty()) throw ValidationError("make_buckets: no attribute values");
  if (n_buckets < 2) throw ValidationError("make_buckets: need at least 2 buckets");
  std::sort(values.begin(), values.end());

  BucketSpec spec;
  spec.attribute = attribute;
  const std::size_t n = values.size();
  for (std::size_t k = 0; k < n_buckets; ++k) {
    const double edge = values[k * n / n_buckets];
    if (spec.lower.empty() || edge > spec.lower.back()) spec.lower.push_back(edge);
  }
  spec.labels = bucket_labels(spec.lower.size());
  return spec;
}

double f1_score(double precision, double recall) {
  const double denom = precision + recall;
  return denom == 0.0 ? 0.0 : 2.0 * precision * recall / denom;
}

namespace {

auto span_key(const Span& s) { return std::tuple(s.sentence_index, s.range.start, s.range.end); }

void require_sorted(std::span<const Span> spans, const char* what) {
  for (std::size_t i = 1; i < spans.size(); ++i) {
    if (span_key(spans[i - 1]) >= span_key(spans[i])) {
      throw ValidationError(std::string(what) + " spans are not sorted and distinct");
    }
  }
}

// Sorted-order intersection; span lists come out of extract_spans sorted by
// (sentence_index, start, end).
template <typename OnMatch>
void for_each_match(std::span<const Span> gold, std::span<const Span> pred, OnMatch on_match) {
  require_sorted(gold, "gold");
  require_sorted(pred, "predicted");
  auto key = [](const Span& s) { return std::tuple(s.sentence_index, s.range.start, s.range.end); };
  std::size_t i = 0, j = 0;
  while (i < gold.size() && j < pred.size()) {
    const auto a = key(gold[i]);
    const auto b = key(pred[j]);
    if (a == b) {
      on_match(i, j);
      ++i;
      ++j;
    } else if (a < b) {
      ++i;
    } else {
      ++j;
    }
  }
}

}  // namespace

std::vector<BucketResult> bucket_f1(std::span<const Span> gold, std::span<const double> gold_values,
                                    std::span<const Span> pred, std::span<const double> pred_values,
                                    const BucketSpec& spec) {
  if (gold.size() != gold_values.size() || pred.size() != pred_values.size()) {
    throw ValidationError("bucket_f1: spans and attribute values differ in length");
  }
  std::vector<BucketResult> results(spec.size());
  for (std::size_t k = 0; k < results.size(); ++k) results[k].bucket_index = k;

  for (std::size_t i = 0; i < gold.size(); ++i) {
    ++results[spec.bucket_of(gold_values[i])].gold_count;
  }
  for (std::size_t j = 0; j < pred.size(); ++j) {
    ++results[spec.bucket_of(pred_values[j])].pred_count;
  }
  for_each_match(gold, pred, [&](std::size_t i, std::size_t) {
    ++results[spec.bucket_of(gold_values[i])].match_count;
  });

  for (auto& r : results) {
    r.precision = r.pred_count == 0 ? 0.0
                                    : static_cast<double>(r.match_count) / static_cast<double>(r.pred_count);
    r.recall = r.gold_count == 0 ? 0.0
                                 : static_cast<double>(r.match_count) / static_cast<double>(r.gold_count);
    r.f1 = f1_score(r.precision, r.recall);
  }
  return results;
}

Prf corpus_f1_spans(std::span<const Span> gold, std::span<const Span> pred) {
  std::int64_t matches = 0;
  for_each_match(gold, pred, [&](std::size_t, std::size_t) { ++matches; });
  Prf out;
  out.precision = pred.empty() ? 0.0 : static_cast<double>(matches) / static_cast<double>(pred.size());
  out.recall = gold.empty() ? 0.0 : static_cast<double>(matches) / static_cast<double>(gold.size());
  out.f1 = f1_score(out.precision, out.recall);
  return out;
}

void require_aligned(const std::vector<Sentence>& gold, const std::vector<Sentence>& pred) {
  if (gold.size() != pred.size()) {
    throw ValidationError("gold has " + std::to_string(gold.size()) + " sentences but prediction has " +
                          std::to_string(pred.size()));
  }
  for (std::size_t i = 0; i < gold.size(); ++i) {
    if (gold[i].chars() != pred[i].chars()) {
      throw ValidationError("sentence " + std::to_string(i) +
                            ": prediction characters do not match gold");
    }
  }
}

Prf corpus_f1(const std::vector<Sentence>& gold, const std::vector<Sentence>& pred) {
  require_aligned(gold, pred);
  return corpus_f1_spans(extract_spans(gold), extract_spans(pred));
}

PerformanceTensor build_tensor(const std::vector<Sentence>& gold, const TrainingStats& stats,
                               const std::vector<ModelPrediction>& models, std::size_t n_buckets,
                               SlenUnit slen_unit) {
  if (models.empty()) throw ValidationError("build_tensor: no models");
  for (const auto& m : models) require_aligned(gold, *m.sentences);

  const std::vector<Span> gold_spans = extract_spans(gold);
  if (gold_spans.empty()) throw ValidationError("build_tensor: gold test set is empty");

  std::vector<AttributeVector> gold_attrs(gold_spans.size());
  parallel_for(gold_spans.size(), [&](std::size_t i) {
    gold_attrs[i] = attribute_vector(gold_spans[i], gold[gold_spans[i].sentence_index], stats, slen_unit);
  });

  PerformanceTensor tensor;
  tensor.attributes.assign(kAllAttributes.begin(), kAllAttributes.end());
  tensor.specs.reserve(tensor.attributes.size());
  std::vector<std::vector<double>> gold_values(tensor.attributes.size());
  for (std::size_t j = 0; j < tensor.attributes.size(); ++j) {
    auto& column = gold_values[j];
    column.resize(gold_spans.size());
    for (std::size_t i = 0; i < gold_spans.size(); ++i) {
      column[i] = attribute_value(gold_attrs[i], tensor.attributes[j]);
    }
    tensor.specs.push_back(make_buckets(column, n_buckets, tensor.attributes[j]));
  }

  tensor.values.resize(models.size());
  tensor.corpus.resize(models.size());
  for (const auto& m : models) tensor.models.push_back(m.name);

  parallel_for(models.size(), [&](std::size_t mi) {
    const std::vector<Span> pred_spans = extract_spans(*models[mi].sentences);
    std::vector<AttributeVector> pred_attrs(pred_spans.size());
    for (std::size_t i = 0; i < pred_spans.size(); ++i) {
      pred_attrs[i] =
          attribute_vector(pred_spans[i], gold[pred_spans[i].sentence_index], stats, slen_unit);
    }
    tensor.corpus[mi] = corpus_f1_spans(gold_spans, pred_spans);
    auto& slices = tensor.values[mi];
    slices.resize(tensor.attributes.size());
    for (std::size_t j = 0; j < tensor.attributes.size(); ++j) {
      std::vector<double> pred_values(pred_spans.size());
      for (std::size_t i = 0; i < pred_spans.size(); ++i) {
        pred_values[i] = attribute_value(pred_attrs[i], tensor.attributes[j]);
      }
      const auto buckets = bucket_f1(gold_spans, gold_values[j], pred_spans, pred_values, tensor.specs[j]);
      slices[j].reserve(buckets.size());
      for (const auto& b : buckets) slices[j].push_back(b.f1);
    }
  });
  return tensor;
}

}  // namespace segdiag
