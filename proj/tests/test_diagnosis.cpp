#include <doctest.h>

#include <random>

#include "segdiag/diagnosis.hpp"
#include "segdiag/errors.hpp"

using namespace segdiag;

namespace {

AttributeSlice slice(const std::string& attr, std::vector<double> f1) {
  AttributeSlice s;
  s.attribute = attr;
  s.f1 = std::move(f1);
  const std::vector<std::string> sml = {"S", "M", "L"};
  for (std::size_t i = 0; i < s.f1.size(); ++i) {
    s.labels.push_back(i < sml.size() ? sml[i] : "Q" + std::to_string(i + 1));
  }
  return s;
}

}  // namespace

TEST_CASE("self_diagnose finds the worst bucket and the gap") {
  const auto result = self_diagnose({slice("wCon", {0.80, 0.95, 0.99})});
  REQUIRE(result.size() == 1);
  CHECK(result[0].attribute == "wCon");
  CHECK(result[0].worst_bucket == 0);
  CHECK(result[0].worst_bucket_label == "S");
  CHECK(result[0].worst_f1 == 0.80);
  CHECK(result[0].gap == doctest::Approx(0.19).epsilon(1e-15));
}

TEST_CASE("self_diagnose tie and constant rules") {
  const auto constant = self_diagnose({slice("wLen", {0.9, 0.9, 0.9})});
  CHECK(constant[0].worst_bucket == 0);
  CHECK(constant[0].gap == 0.0);

  const auto tied = self_diagnose({slice("wLen", {0.95, 0.7, 0.7})});
  CHECK(tied[0].worst_bucket == 1);  // lower index of the two minima
}

TEST_CASE("self_diagnose treats attributes independently") {
  const std::vector<AttributeSlice> slices = {slice("a", {0.5, 0.9}), slice("b", {0.9, 0.2}),
                                              slice("c", {0.7, 0.7, 0.1})};
  const auto forward = self_diagnose(slices);
  std::vector<AttributeSlice> shuffled = {slices[2], slices[0], slices[1]};
  const auto backward = self_diagnose(shuffled);
  for (const auto& entry : forward) {
    const auto it = std::find_if(backward.begin(), backward.end(),
                                 [&](const auto& e) { return e.attribute == entry.attribute; });
    REQUIRE(it != backward.end());
    CHECK(it->worst_bucket == entry.worst_bucket);
    CHECK(it->gap == entry.gap);
  }
}

TEST_CASE("aided_diagnose reports the largest loss bucket") {
  const auto result = aided_diagnose({slice("wCon", {0.9, 0.99})}, {slice("wCon", {0.95, 0.9})});
  REQUIRE(result.size() == 1);
  CHECK(result[0].mode == AidedMode::kALoses);
  CHECK(result[0].bucket == 0);
  CHECK(result[0].delta == doctest::Approx(-0.05).epsilon(1e-15));
}

TEST_CASE("aided_diagnose falls back to A's best bucket") {
  const auto result =
      aided_diagnose({slice("wLen", {0.9, 0.92, 0.99})}, {slice("wLen", {0.8, 0.9, 0.95})});
  REQUIRE(result.size() == 1);
  CHECK(result[0].mode == AidedMode::kABest);
  CHECK(result[0].bucket == 2);
  CHECK(result[0].delta == doctest::Approx(0.04).epsilon(1e-12));
}

TEST_CASE("aided_diagnose of a model against itself is A_best with delta 0") {
  const auto slices = {slice("wLen", {0.6, 0.8}), slice("oDen", {0.8, 0.6})};
  for (const auto& entry : aided_diagnose(slices, slices)) {
    CHECK(entry.mode == AidedMode::kABest);
    CHECK(entry.delta == 0.0);
  }
}

TEST_CASE("aided_diagnose never reports mutually losing buckets") {
  std::mt19937_64 rng(55);
  for (int iter = 0; iter < 200; ++iter) {
    const std::size_t buckets = 2 + rng() % 4;
    std::vector<double> a(buckets), b(buckets);
    for (std::size_t k = 0; k < buckets; ++k) {
      a[k] = (rng() % 100) / 100.0;
      b[k] = (rng() % 100) / 100.0;
    }
    const auto ab = aided_diagnose({slice("x", a)}, {slice("x", b)});
    const auto ba = aided_diagnose({slice("x", b)}, {slice("x", a)});
    if (ab[0].mode == AidedMode::kALoses) {
      // at ab's bucket A < B; the swapped run must find some bucket where
      // B < A, or B dominates A nowhere strictly and reports its best
      if (ba[0].mode == AidedMode::kALoses) {
        CHECK(ba[0].delta < 0);
        CHECK(a[ba[0].bucket] > b[ba[0].bucket]);
      }
    } else {
      for (std::size_t k = 0; k < buckets; ++k) CHECK(a[k] >= b[k]);
    }
  }
}

TEST_CASE("aided_diagnose validates bucket alignment") {
  CHECK_THROWS_AS(aided_diagnose({slice("x", {0.5, 0.6})}, {slice("x", {0.5, 0.6, 0.7})}),
                  ValidationError);
  CHECK_THROWS_AS(aided_diagnose({slice("x", {0.5})}, {slice("y", {0.5})}), ValidationError);
}
