#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace segdiag {

// 1-based ranks with tie groups averaged.
std::vector<double> average_ranks(std::span<const double> values);

// Upper tail of the chi-square distribution (regularized upper incomplete
// gamma Q(dof/2, x/2)).
double chi2_sf(double x, int dof);

struct FriedmanResult {
  double statistic = 0;
  int dof = 0;
  double p_value = 1;
  std::size_t n_blocks = 0;
  std::size_t k_treatments = 0;
};

// Rank-based test that the k treatments have equal effects across n blocks;
// tie-corrected statistic against the chi-square tail with k-1 dof. A fully
// degenerate table (every block constant) yields Q = 0, p = 1.
FriedmanResult friedman(const std::vector<std::vector<double>>& table);

// Exact permutation p-value P(Q >= observed) over all within-block treatment
// permutations. Feasible for n*k <= 12.
double friedman_exact_p(const std::vector<std::vector<double>>& table);

}  // namespace segdiag
