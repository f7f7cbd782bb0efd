#include "segdiag/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "segdiag/errors.hpp"
#include "segdiag/numeric.hpp"

namespace segdiag {

std::vector<double> average_ranks(std::span<const double> values) {
  const std::size_t n = values.size();
  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(),
            [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<double> ranks(n);
  std::size_t i = 0;
  while (i < n) {
    std::size_t j = i;
    while (j + 1 < n && values[order[j + 1]] == values[order[i]]) ++j;
    const double avg = (static_cast<double>(i) + static_cast<double>(j)) / 2.0 + 1.0;
    for (std::size_t k = i; k <= j; ++k) ranks[order[k]] = avg;
    i = j + 1;
  }
  return ranks;
}

namespace {

// Regularized lower incomplete gamma P(a, x) by series expansion (x < a+1).
double gamma_p_series(double a, double x) {
  double term = 1.0 / a;
  double sum = term;
  for (int k = 1; k < 10000; ++k) {
    term *= x / (a + k);
    sum += term;
    if (std::abs(term) < std::abs(sum) * 1e-17) break;
  }
  return sum * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

// Regularized upper incomplete gamma Q(a, x) by Lentz continued fraction
// (x >= a+1).
double gamma_q_cf(double a, double x) {
  constexpr double kTiny = 1e-300;
  double b = x + 1.0 - a;
  double c = 1.0 / kTiny;
  double d = 1.0 / b;
  double h = d;
  for (int k = 1; k < 10000; ++k) {
    const double an = -static_cast<double>(k) * (static_cast<double>(k) - a);
    b += 2.0;
    d = an * d + b;
    if (std::abs(d) < kTiny) d = kTiny;
    c = b + an / c;
    if (std::abs(c) < kTiny) c = kTiny;
    d = 1.0 / d;
    const double delta = d * c;
    h *= delta;
    if (std::abs(delta - 1.0) < 1e-17) break;
  }
  return h * std::exp(-x + a * std::log(x) - std::lgamma(a));
}

}  // namespace

double chi2_sf(double x, int dof) {
  if (x < 0.0) throw ValidationError("chi2_sf: x must be >= 0");
  if (dof < 1) throw ValidationError("chi2_sf: dof must be >= 1");
  if (x == 0.0) return 1.0;
  const double a = static_cast<double>(dof) / 2.0;
  const double half = x / 2.0;
  if (half < a + 1.0) return 1.0 - gamma_p_series(a, half);
  return gamma_q_cf(a, half);
}

namespace {

struct RankedTable {
  std::vector<std::vector<double>> ranks;  // per block
  double tie_term = 0;                     // sum over blocks of sum(t^3 - t)
};

RankedTable rank_blocks(const std::vector<std::vector<double>>& table) {
  RankedTable out;
  out.ranks.reserve(table.size());
  for (const auto& block : table) {
    out.ranks.push_back(average_ranks(block));
    std::vector<double> sorted(block);
    std::sort(sorted.begin(), sorted.end());
    std::size_t i = 0;
    while (i < sorted.size()) {
      std::size_t j = i;
      while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
      const double t = static_cast<double>(j - i + 1);
      out.tie_term += t * t * t - t;
      i = j + 1;
    }
  }
  return out;
}

// Tie-corrected Friedman statistic from per-block rank rows.
double statistic_from_ranks(const std::vector<std::vector<double>>& ranks, double tie_term) {
  const auto n = static_cast<double>(ranks.size());
  const auto k = static_cast<double>(ranks.front().size());
  StableSum dev;
  for (std::size_t j = 0; j < ranks.front().size(); ++j) {
    StableSum col;
    for (const auto& row : ranks) col.add(row[j]);
    const double mean_rank = col.value() / n;
    const double d = mean_rank - (k + 1.0) / 2.0;
    dev.add(d * d);
  }
  const double q0 = 12.0 * n / (k * (k + 1.0)) * dev.value();
  const double correction = 1.0 - tie_term / (n * k * (k * k - 1.0));
  if (correction <= 0.0) return 0.0;  // every block fully tied
  return q0 / correction;
}

void validate_table(const std::vector<std::vector<double>>& table) {
  if (table.size() < 2) throw ValidationError("friedman: need at least 2 blocks");
  const std::size_t k = table.front().size();
  if (k < 2) throw ValidationError("friedman: need at least 2 treatments");
  for (const auto& row : table) {
    if (row.size() != k) throw ValidationError("friedman: ragged table");
  }
}

}  // namespace

FriedmanResult friedman(const std::vector<std::vector<double>>& table) {
  validate_table(table);
  const RankedTable ranked = rank_blocks(table);

  FriedmanResult result;
  result.n_blocks = table.size();
  result.k_treatments = table.front().size();
  result.dof = static_cast<int>(result.k_treatments) - 1;
  result.statistic = statistic_from_ranks(ranked.ranks, ranked.tie_term);
  result.p_value = chi2_sf(result.statistic, result.dof);
  return result;
}

double friedman_exact_p(const std::vector<std::vector<double>>& table) {
  validate_table(table);
  const std::size_t n = table.size();
  const std::size_t k = table.front().size();
  if (n * k > 12) throw ValidationError("friedman_exact_p: table too large (n*k must be <= 12)");

  const RankedTable ranked = rank_blocks(table);
  const double observed = statistic_from_ranks(ranked.ranks, ranked.tie_term);

  // Within-block rank multisets are fixed; enumerate every assignment of
  // each block's ranks to treatments.
  std::vector<std::vector<std::vector<double>>> block_perms(n);
  for (std::size_t b = 0; b < n; ++b) {
    std::vector<double> perm = ranked.ranks[b];
    std::sort(perm.begin(), perm.end());
    do {
      block_perms[b].push_back(perm);
    } while (std::next_permutation(perm.begin(), perm.end()));
  }

  std::uint64_t total = 0;
  std::uint64_t at_least = 0;
  std::vector<std::vector<double>> ranks(n);
  std::vector<std::size_t> choice(n, 0);
  constexpr double kSlack = 1e-9;  // observed must count as >= itself despite fp noise
  for (;;) {
    for (std::size_t b = 0; b < n; ++b) ranks[b] = block_perms[b][choice[b]];
    ++total;
    if (statistic_from_ranks(ranks, ranked.tie_term) >= observed - kSlack) ++at_least;

    std::size_t b = 0;
    while (b < n) {
      if (++choice[b] < block_perms[b].size()) break;
      choice[b] = 0;
      ++b;
    }
    if (b == n) break;
  }
  return static_cast<double>(at_least) / static_cast<double>(total);
}

}  // namespace segdiag
