#include <doctest.h>

#include <random>

#include "segdiag/bucketing.hpp"
#include "testutil.hpp"

using namespace segdiag;
namespace tu = segdiag::testutil;

namespace {

struct AttributedSpans {
  std::vector<Span> spans;
  std::vector<double> values;
};

AttributedSpans attributed(const std::vector<Sentence>& sentences, const std::vector<Sentence>& ctx,
                           const TrainingStats& stats, Attribute attr) {
  AttributedSpans out;
  out.spans = extract_spans(sentences);
  out.values.reserve(out.spans.size());
  for (const auto& span : out.spans) {
    out.values.push_back(
        attribute_value(attribute_vector(span, ctx[span.sentence_index], stats, SlenUnit::kChar), attr));
  }
  return out;
}

}  // namespace

TEST_CASE("make_buckets produces quantile boundaries") {
  const BucketSpec spec = make_buckets({1, 1, 2, 2, 3, 4}, 3, Attribute::kWLen);
  REQUIRE(spec.size() == 3);
  CHECK(spec.lower == std::vector<double>{1, 2, 3});
  CHECK(spec.labels == std::vector<std::string>{"S", "M", "L"});
  CHECK(spec.bucket_of(1) == 0);
  CHECK(spec.bucket_of(2) == 1);
  CHECK(spec.bucket_of(2.5) == 1);
  CHECK(spec.bucket_of(3) == 2);
  CHECK(spec.bucket_of(99) == 2);
  CHECK(spec.bucket_of(0.5) == 0);  // below observed range clamps to bucket 0
}

TEST_CASE("make_buckets merges duplicate boundaries") {
  const BucketSpec constant = make_buckets({5, 5, 5, 5}, 3, Attribute::kWLen);
  CHECK(constant.size() == 1);
  CHECK(constant.labels == std::vector<std::string>{"ALL"});

  const BucketSpec two = make_buckets({0, 0, 0, 1, 1, 1}, 3, Attribute::kODen);
  CHECK(two.size() == 2);

  CHECK_THROWS_AS(make_buckets({}, 3, Attribute::kWLen), ValidationError);
  CHECK_THROWS_AS(make_buckets({1, 2, 3}, 1, Attribute::kWLen), ValidationError);
}

TEST_CASE("make_buckets covers the full observed range") {
  std::mt19937_64 rng(5);
  for (int iter = 0; iter < 25; ++iter) {
    std::vector<double> values;
    const std::size_t n = 2 + rng() % 40;
    for (std::size_t i = 0; i < n; ++i) values.push_back((rng() % 1000) / 1000.0);
    const BucketSpec spec = make_buckets(values, 3, Attribute::kWCon);
    // quantile oracle by sorting: every value falls in a bucket and the
    // bucket edges are data points
    for (double v : values) {
      const std::size_t k = spec.bucket_of(v);
      CHECK(v >= spec.lower[k]);
      if (k + 1 < spec.size()) CHECK(v < spec.lower[k + 1]);
    }
    CHECK(spec.lower.front() == *std::min_element(values.begin(), values.end()));
  }
}

TEST_CASE("equal-mass property on distinct values") {
  std::mt19937_64 rng(6);
  for (int iter = 0; iter < 10; ++iter) {
    std::vector<double> values;
    const std::size_t n = 30;
    for (std::size_t i = 0; i < n; ++i) values.push_back(static_cast<double>(i) + (rng() % 10) * 1e-4);
    const std::size_t buckets = 2 + rng() % 4;
    const BucketSpec spec = make_buckets(values, buckets, Attribute::kCFre);
    REQUIRE(spec.size() == buckets);
    std::vector<std::size_t> counts(buckets, 0);
    for (double v : values) ++counts[spec.bucket_of(v)];
    for (std::size_t c : counts) {
      CHECK(c >= n / buckets - 1);
      CHECK(c <= n / buckets + 2);
    }
  }
}

TEST_CASE("corpus_f1 hand-enumerated example") {
  const auto gold = tu::sents({{"a", "b", "c"}});
  const auto pred = tu::sents({{"ab", "c"}});
  const Prf prf = corpus_f1(gold, pred);
  CHECK(prf.precision == 0.5);
  CHECK(prf.recall == doctest::Approx(1.0 / 3).epsilon(1e-15));
  CHECK(prf.f1 == doctest::Approx(0.4).epsilon(1e-15));

  const Prf perfect = corpus_f1(gold, gold);
  CHECK(perfect.precision == 1.0);
  CHECK(perfect.recall == 1.0);
  CHECK(perfect.f1 == 1.0);

  const auto merged = tu::sents({{"abc"}});
  const Prf zero = corpus_f1(gold, merged);
  CHECK(zero.recall == 0.0);
  CHECK(zero.f1 == 0.0);
}

TEST_CASE("corpus_f1 rejects misaligned inputs") {
  const auto gold = tu::sents({{"a", "b"}, {"c"}});
  const auto fewer = tu::sents({{"a", "b"}});
  CHECK_THROWS_AS(corpus_f1(gold, fewer), ValidationError);
  const auto different = tu::sents({{"a", "b"}, {"d"}});
  CHECK_THROWS_AS(corpus_f1(gold, different), ValidationError);
}

TEST_CASE("bucket_f1: perfect predictions give all-ones buckets") {
  const auto gold = tu::sents({{"图书", "在"}, {"水", "图书", "在"}});
  const TrainingStats stats = build_training_stats(gold);
  const auto g = attributed(gold, gold, stats, Attribute::kWLen);
  const BucketSpec spec = make_buckets(g.values, 2, Attribute::kWLen);
  for (const auto& b : bucket_f1(g.spans, g.values, g.spans, g.values, spec)) {
    if (b.gold_count > 0) {
      CHECK(b.precision == 1.0);
      CHECK(b.recall == 1.0);
      CHECK(b.f1 == 1.0);
      CHECK(b.match_count == b.gold_count);
    }
  }
}

TEST_CASE("bucket_f1: single-char predictions zero out multi-char buckets") {
  const auto gold = tu::sents({{"图书", "在"}, {"节假日", "会"}, {"关闭", "水"}});
  const TrainingStats stats = build_training_stats(gold);

  std::vector<Sentence> pred;
  for (const auto& s : gold) {
    std::vector<std::u32string> chars;
    for (char32_t c : s.chars()) chars.push_back(std::u32string(1, c));
    pred.push_back(Sentence::from_words(std::move(chars)));
  }

  const auto g = attributed(gold, gold, stats, Attribute::kWLen);
  const auto p = attributed(pred, gold, stats, Attribute::kWLen);
  const BucketSpec spec = make_buckets(g.values, 2, Attribute::kWLen);
  const auto buckets = bucket_f1(g.spans, g.values, p.spans, p.values, spec);

  // brute-force match enumeration as oracle
  CHECK(tu::oracle_match_count(g.spans, p.spans) == 3);  // the three single-char gold words
  for (std::size_t k = 0; k < buckets.size(); ++k) {
    if (spec.lower[k] >= 2) {
      CHECK(buckets[k].recall == 0.0);
      CHECK(buckets[k].match_count == 0);
    }
  }
}

TEST_CASE("micro-aggregation reproduces corpus-level scores") {
  std::mt19937_64 rng(31);
  const auto vocab = tu::random_vocabulary(rng, 25);
  for (int iter = 0; iter < 15; ++iter) {
    const auto gold = tu::random_corpus(rng, vocab, 10);
    const auto pred = tu::random_resegmentation(rng, gold);
    const TrainingStats stats = build_training_stats(gold);

    for (const Attribute attr : kAllAttributes) {
      const auto g = attributed(gold, gold, stats, attr);
      const auto p = attributed(pred, gold, stats, attr);
      BucketSpec spec;
      try {
        spec = make_buckets(g.values, 3, attr);
      } catch (const ValidationError&) {
        continue;  // constant attribute with <2 distinct values
      }
      const auto buckets = bucket_f1(g.spans, g.values, p.spans, p.values, spec);

      std::int64_t gold_total = 0, pred_total = 0, match_total = 0;
      for (const auto& b : buckets) {
        gold_total += b.gold_count;
        pred_total += b.pred_count;
        match_total += b.match_count;
      }
      CHECK(gold_total == static_cast<std::int64_t>(g.spans.size()));
      CHECK(pred_total == static_cast<std::int64_t>(p.spans.size()));
      CHECK(match_total == static_cast<std::int64_t>(tu::oracle_match_count(g.spans, p.spans)));

      const Prf corpus = corpus_f1_spans(g.spans, p.spans);
      double weighted_recall = 0;
      for (const auto& b : buckets) {
        weighted_recall +=
            (static_cast<double>(b.gold_count) / static_cast<double>(g.spans.size())) * b.recall;
      }
      CHECK(weighted_recall == doctest::Approx(corpus.recall).epsilon(1e-12));
    }
  }
}

TEST_CASE("build_tensor fills every cell deterministically") {
  std::mt19937_64 rng(41);
  const auto vocab = tu::random_vocabulary(rng, 20);
  const auto gold = tu::random_corpus(rng, vocab, 12);
  const auto pred_a = tu::random_resegmentation(rng, gold);
  const TrainingStats stats = build_training_stats(gold);

  const std::vector<ModelPrediction> models = {{"exact", &gold}, {"noisy", &pred_a}, {"noisy2", &pred_a}};
  const PerformanceTensor t = build_tensor(gold, stats, models, 3);

  REQUIRE(t.models.size() == 3);
  REQUIRE(t.attributes.size() == 7);
  for (std::size_t j = 0; j < t.attributes.size(); ++j) {
    REQUIRE(t.specs[j].size() >= 1);
    for (std::size_t i = 0; i < t.models.size(); ++i) {
      REQUIRE(t.values[i][j].size() == t.specs[j].size());
    }
  }
  // the exact model is all ones
  for (const auto& slice : t.values[0]) {
    for (double f1 : slice) CHECK(f1 == 1.0);
  }
  CHECK(t.corpus[0].f1 == 1.0);
  // identical prediction files give identical slices
  CHECK(t.values[1] == t.values[2]);

  const PerformanceTensor again = build_tensor(gold, stats, models, 3);
  CHECK(again.values == t.values);

  const auto misaligned = tu::random_corpus(rng, vocab, 12);
  CHECK_THROWS_AS(build_tensor(gold, stats, {{"bad", &misaligned}}, 3), ValidationError);
}

TEST_CASE("tensor cells equal a brute-force per-bucket scorer") {
  std::mt19937_64 rng(47);
  const auto vocab = tu::random_vocabulary(rng, 18);
  const auto gold = tu::random_corpus(rng, vocab, 10);
  const auto pred_a = tu::random_resegmentation(rng, gold, 0.4);
  const auto pred_b = tu::random_resegmentation(rng, gold, 0.7);
  const TrainingStats stats = build_training_stats(gold);

  const PerformanceTensor t =
      build_tensor(gold, stats, {{"a", &pred_a}, {"b", &pred_b}}, 3);

  const std::vector<const std::vector<Sentence>*> preds = {&pred_a, &pred_b};
  for (std::size_t mi = 0; mi < preds.size(); ++mi) {
    for (std::size_t j = 0; j < t.attributes.size(); ++j) {
      const Attribute attr = t.attributes[j];
      const auto g = attributed(gold, gold, stats, attr);
      const auto pa = attributed(*preds[mi], gold, stats, attr);
      const BucketSpec& spec = t.specs[j];
      for (std::size_t k = 0; k < spec.size(); ++k) {
        // assign spans to this bucket by value, then score with the
        // set-based matcher
        std::vector<Span> bucket_gold, bucket_pred;
        for (std::size_t i = 0; i < g.spans.size(); ++i) {
          if (spec.bucket_of(g.values[i]) == k) bucket_gold.push_back(g.spans[i]);
        }
        for (std::size_t i = 0; i < pa.spans.size(); ++i) {
          if (spec.bucket_of(pa.values[i]) == k) bucket_pred.push_back(pa.spans[i]);
        }
        const auto matches = static_cast<double>(tu::oracle_match_count(bucket_gold, bucket_pred));
        const double precision = bucket_pred.empty() ? 0.0 : matches / bucket_pred.size();
        const double recall = bucket_gold.empty() ? 0.0 : matches / bucket_gold.size();
        const double f1 =
            precision + recall == 0 ? 0.0 : 2 * precision * recall / (precision + recall);
        CHECK(t.values[mi][j][k] == doctest::Approx(f1).epsilon(1e-12));
      }
    }
  }
}

TEST_CASE("bucket specs depend on gold attributes only, never on predictions") {
  std::mt19937_64 rng(43);
  const auto vocab = tu::random_vocabulary(rng, 20);
  const auto gold = tu::random_corpus(rng, vocab, 10);
  const auto pred_a = tu::random_resegmentation(rng, gold, 0.2);
  const auto pred_b = tu::random_resegmentation(rng, gold, 0.8);
  const TrainingStats stats = build_training_stats(gold);

  const PerformanceTensor ta = build_tensor(gold, stats, {{"a", &pred_a}}, 3);
  const PerformanceTensor tb = build_tensor(gold, stats, {{"b", &pred_b}}, 3);
  REQUIRE(ta.specs.size() == tb.specs.size());
  for (std::size_t j = 0; j < ta.specs.size(); ++j) {
    CHECK(ta.specs[j].lower == tb.specs[j].lower);
    CHECK(ta.specs[j].labels == tb.specs[j].labels);
  }
}
