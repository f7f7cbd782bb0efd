#include <doctest.h>

#include <random>

#include "segdiag/baseline.hpp"
#include "segdiag/bucketing.hpp"
#include "segdiag/crossdata.hpp"
#include "testutil.hpp"

using namespace segdiag;
namespace tu = segdiag::testutil;

TEST_CASE("psi_corpus trivial endpoints") {
  const auto train = tu::sents({{"图书", "在"}, {"水", "在"}});
  const TrainingStats stats = build_training_stats(train);

  // test drawn from training sentences, labels canonical -> 1.0
  CHECK(psi_corpus(stats, extract_spans(train)) == 1.0);

  const auto disjoint = tu::sents({{"节假日", "会"}});
  CHECK(psi_corpus(stats, extract_spans(disjoint)) == 0.0);
}

TEST_CASE("psi_corpus four-type worked example") {
  // types with psi {1, 0.5, 0, 1} and frequencies {0.4, 0.2, 0.2, 0.2} -> 0.7
  TrainingStats stats;
  stats.add_word("aa", "BE", 2);             // psi(aa,BE) = 1
  stats.add_word("b", "S", 1);               // psi(b,S) = 0.5
  stats.add_word("b", "B", 1);               //   (note: synthetic non-canonical row)
  stats.add_word("d", "S", 3);               // psi(d,S) = 1
                                             // c unseen -> psi 0
  std::vector<Span> spans;
  auto push = [&](const std::string& text, const LabelSeq& labels, int copies) {
    for (int i = 0; i < copies; ++i) {
      Span s;
      s.sentence_index = static_cast<std::uint32_t>(spans.size());
      s.range = {0, static_cast<std::uint32_t>(labels.size())};
      s.text = text;
      s.labels = labels;
      spans.push_back(s);
    }
  };
  push("aa", "BE", 4);
  push("b", "S", 2);
  push("c", "S", 2);
  push("d", "S", 2);

  CHECK(psi_corpus(stats, spans) == doctest::Approx(0.7).epsilon(1e-15));
}

TEST_CASE("type-weighted psi equals token-level expectation") {
  std::mt19937_64 rng(201);
  for (int iter = 0; iter < 30; ++iter) {
    const auto vocab = tu::random_vocabulary(rng, 18);
    const auto train = tu::random_corpus(rng, vocab, 15);
    // test shares part of the vocabulary so psi values are mixed
    auto test_vocab = vocab;
    const auto extra = tu::random_vocabulary(rng, 6, 5);
    test_vocab.insert(test_vocab.end(), extra.begin(), extra.end());
    const auto test = tu::random_corpus(rng, test_vocab, 12);

    const TrainingStats stats = build_training_stats(train);
    const auto spans = extract_spans(test);
    const double typed = psi_corpus(stats, spans);
    const double token = tu::oracle_psi_token_level(stats, spans);
    CHECK(std::abs(typed - token) <= 1e-12);
    CHECK(typed >= 0.0);
    CHECK(typed <= 1.0);
  }
}

TEST_CASE("build_psi_matrix fills every train/test pair") {
  const tu::CriterionPair pair = tu::make_criterion_pair(77);
  std::vector<TrainingStats> train(2);
  train[0] = build_training_stats(pair.a.train);
  train[1] = build_training_stats(pair.b.train);
  std::vector<TestTypeCounts> test(2);
  test[0] = count_test_types(extract_spans(pair.a.test));
  test[1] = count_test_types(extract_spans(pair.b.test));

  const PsiMatrix psi = build_psi_matrix(train, test);
  REQUIRE(psi.size() == 2);
  for (std::size_t i = 0; i < 2; ++i) {
    for (std::size_t j = 0; j < 2; ++j) {
      CHECK(psi[i][j] == psi_corpus(train[i], test[j]));
      CHECK(psi[i][j] >= 0.0);
      CHECK(psi[i][j] <= 1.0);
    }
  }
  CHECK(psi[0][0] > psi[1][0]);

  CHECK_THROWS_AS(build_psi_matrix(train, std::span<const TestTypeCounts>(test.data(), 1)),
                  ValidationError);
}

TEST_CASE("criterion conflict lowers psi directionally") {
  for (std::uint64_t seed : {1ull, 2ull, 3ull, 9ull}) {
    const tu::CriterionPair pair = tu::make_criterion_pair(seed);
    const TrainingStats a = build_training_stats(pair.a.train);
    const TrainingStats b = build_training_stats(pair.b.train);
    const auto a_test = extract_spans(pair.a.test);
    CHECK(psi_corpus(a, a_test) > psi_corpus(b, a_test));
  }
}

TEST_CASE("build_cross_tensor fills u_hat by the in-domain gap") {
  std::vector<CrossCell> cells;
  cells.push_back({0, 0, 0, 0.9});
  cells.push_back({1, 0, 0, 0.72});
  cells.push_back({1, 1, 0, 0.8});
  // u[0][1][0] left missing
  const CrossTensor t = build_cross_tensor({"src", "tgt"}, {"m"}, cells);

  CHECK(*t.u_hat[0][0][0] == 0.0);
  CHECK(*t.u_hat[1][1][0] == 0.0);
  CHECK(*t.u_hat[1][0][0] == ((0.9 - 0.72) / 0.9));
  CHECK(*t.u_hat[1][0][0] == doctest::Approx(0.2).epsilon(1e-12));
  CHECK_FALSE(t.u[0][1][0].has_value());
  CHECK_FALSE(t.u_hat[0][1][0].has_value());
  CHECK(t.present_cells() == 3);
  CHECK(t.total_cells() == 4);

  // equal transfer and in-domain scores give zero gap; a transfer that beats
  // in-domain goes negative
  const CrossTensor t2 =
      build_cross_tensor({"a", "b"}, {"m"}, std::vector<CrossCell>{{0, 1, 0, 0.95}, {1, 1, 0, 0.9}});
  CHECK(*t2.u_hat[0][1][0] < 0.0);
  const CrossTensor t3 =
      build_cross_tensor({"a", "b"}, {"m"}, std::vector<CrossCell>{{0, 1, 0, 0.9}, {1, 1, 0, 0.9}});
  CHECK(*t3.u_hat[0][1][0] == 0.0);

  // zero in-domain F1 leaves the column undefined
  const CrossTensor t4 =
      build_cross_tensor({"a", "b"}, {"m"}, std::vector<CrossCell>{{0, 1, 0, 0.5}, {1, 1, 0, 0.0}});
  CHECK_FALSE(t4.u_hat[0][1][0].has_value());

  CHECK_THROWS_AS(build_cross_tensor({"a"}, {"m"}, std::vector<CrossCell>{{0, 0, 0, 0.5}, {0, 0, 0, 0.6}}),
                  ValidationError);
  CHECK_THROWS_AS(build_cross_tensor({"a"}, {"m"}, std::vector<CrossCell>{{1, 0, 0, 0.5}}),
                  ValidationError);
}

TEST_CASE("u_hat is antitone in the transfer score") {
  std::mt19937_64 rng(202);
  for (int iter = 0; iter < 50; ++iter) {
    const double in_domain = 0.5 + (rng() % 50) / 100.0;
    const double lo = (rng() % 80) / 100.0;
    const double hi = lo + 0.01 + (rng() % 10) / 100.0;
    const auto t_lo =
        build_cross_tensor({"a", "b"}, {"m"}, std::vector<CrossCell>{{0, 1, 0, lo}, {1, 1, 0, in_domain}});
    const auto t_hi =
        build_cross_tensor({"a", "b"}, {"m"}, std::vector<CrossCell>{{0, 1, 0, hi}, {1, 1, 0, in_domain}});
    CHECK(*t_lo.u_hat[0][1][0] > *t_hi.u_hat[0][1][0]);
  }
}

TEST_CASE("psi_u_correlation recovers monotone constructions") {
  const std::size_t nd = 4;
  Matrix<double> psi(nd, std::vector<double>(nd));
  std::vector<CrossCell> up, down;
  std::mt19937_64 rng(203);
  for (std::size_t i = 0; i < nd; ++i) {
    for (std::size_t j = 0; j < nd; ++j) {
      psi[i][j] = 0.3 + 0.1 * static_cast<double>((i * nd + j) % 7);
      up.push_back({i, j, 0, psi[i][j] * 0.5 + 0.2});        // strictly increasing in psi
      down.push_back({i, j, 0, 1.0 - psi[i][j] * 0.5});      // strictly decreasing
    }
  }
  const CrossTensor inc = build_cross_tensor({"a", "b", "c", "d"}, {"m"}, up);
  const CorrelationReport r = psi_u_correlation(psi, inc, 0);
  CHECK(*r.pooled == 1.0);
  for (const auto& per : r.per_target) CHECK(*per == 1.0);

  const CrossTensor dec = build_cross_tensor({"a", "b", "c", "d"}, {"m"}, down);
  CHECK(*psi_u_correlation(psi, dec, 0).pooled == -1.0);
}

TEST_CASE("psi_u_correlation matches the definitional oracle on a random grid") {
  std::mt19937_64 rng(204);
  const std::size_t nd = 4;
  Matrix<double> psi(nd, std::vector<double>(nd));
  std::vector<CrossCell> cells;
  for (std::size_t i = 0; i < nd; ++i) {
    for (std::size_t j = 0; j < nd; ++j) {
      psi[i][j] = (rng() % 100) / 100.0;
      cells.push_back({i, j, 0, (rng() % 100) / 100.0});
    }
  }
  const CrossTensor t = build_cross_tensor({"a", "b", "c", "d"}, {"m"}, cells);
  const CorrelationReport r = psi_u_correlation(psi, t, 0);
  for (std::size_t j = 0; j < nd; ++j) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < nd; ++i) {
      xs.push_back(psi[i][j]);
      ys.push_back(*t.u[i][j][0]);
    }
    CHECK(*r.per_target[j] == doctest::Approx(tu::oracle_spearman(xs, ys)).epsilon(1e-12));
  }

  // pooled excludes the diagonal
  std::vector<double> xs, ys;
  for (std::size_t i = 0; i < nd; ++i) {
    for (std::size_t j = 0; j < nd; ++j) {
      if (i == j) continue;
      xs.push_back(psi[i][j]);
      ys.push_back(*t.u[i][j][0]);
    }
  }
  CHECK(*r.pooled == doctest::Approx(tu::oracle_spearman(xs, ys)).epsilon(1e-12));
}

TEST_CASE("psi_u_correlation leaves sparse targets undefined") {
  const CrossTensor t = build_cross_tensor({"a", "b"}, {"m"}, std::vector<CrossCell>{{0, 0, 0, 0.9}});
  Matrix<double> psi = {{1.0, 0.4}, {0.5, 1.0}};
  const CorrelationReport r = psi_u_correlation(psi, t, 0);
  CHECK_FALSE(r.per_target[0].has_value());  // single pair
  CHECK_FALSE(r.per_target[1].has_value());  // no pairs
  CHECK_FALSE(r.pooled.has_value());
}

TEST_CASE("distance_edges formula, symmetry and failure modes") {
  // Z_ii = 1, Z_ij = 0.5 -> off-diagonal weights 1.0
  Matrix<double> z = {{1.0, 0.5, 0.5}, {0.5, 1.0, 0.5}, {0.5, 0.5, 1.0}};
  const OptMatrix w = distance_edges(z);
  for (std::size_t i = 0; i < 3; ++i) {
    CHECK(*w[i][i] == 2.0);
    for (std::size_t j = 0; j < 3; ++j) {
      if (i != j) CHECK(*w[i][j] == 1.0);
    }
  }

  // symmetric Z with constant diagonal d: W = 2 Z_ij / d
  Matrix<double> zs = {{0.8, 0.3}, {0.3, 0.8}};
  CHECK(*distance_edges(zs)[0][1] == doctest::Approx(2 * 0.3 / 0.8).epsilon(1e-15));

  // asymmetric 3x3 against the direct formula
  std::mt19937_64 rng(205);
  Matrix<double> za(3, std::vector<double>(3));
  for (auto& row : za) {
    for (auto& v : row) v = 0.2 + (rng() % 80) / 100.0;
  }
  const OptMatrix wa = distance_edges(za);
  for (std::size_t i = 0; i < 3; ++i) {
    for (std::size_t j = 0; j < 3; ++j) {
      CHECK(*wa[i][j] == doctest::Approx(za[i][j] / za[j][j] + za[j][i] / za[i][i]).epsilon(1e-15));
      CHECK(*wa[i][j] == *wa[j][i]);  // exact symmetry
    }
  }

  // zero diagonal wipes that row/column
  Matrix<double> zz = {{0.0, 0.5}, {0.5, 1.0}};
  const OptMatrix wz = distance_edges(zz);
  CHECK_FALSE(wz[0][1].has_value());
  CHECK_FALSE(wz[0][0].has_value());
  CHECK(wz[1][1].has_value());

  CHECK_THROWS_AS(distance_edges(Matrix<double>{{1.0, 2.0}}), ValidationError);
}
