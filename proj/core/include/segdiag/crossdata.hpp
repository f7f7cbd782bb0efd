#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "segdiag/attributes.hpp"
#include "segdiag/corpus.hpp"

namespace segdiag {

// Unique (word, label sequence) types of a test set with token counts.
struct TestTypeCounts {
  StringMap<StringMap<std::int64_t>> counts;  // word -> labels -> tokens
  std::int64_t total = 0;
};

TestTypeCounts count_test_types(std::span<const Span> spans);

// Criterion discrepancy: expectation of psi_word over the test tokens,
// computed as a type-frequency-weighted sum. 1 means every test word is
// trained with exactly its test label; 0 means disjoint usage.
double psi_corpus(const TrainingStats& train, const TestTypeCounts& test);
double psi_corpus(const TrainingStats& train, std::span<const Span> test_spans);

template <typename T>
using Matrix = std::vector<std::vector<T>>;
using OptMatrix = Matrix<std::optional<double>>;

// psi[train][test] over every dataset pair, including the diagonal.
using PsiMatrix = Matrix<double>;

PsiMatrix build_psi_matrix(std::span<const TrainingStats> train,
                           std::span<const TestTypeCounts> test);

// Cross-dataset F1 per (source, target, model) with the relative in-domain
// gap u_hat = (u[tgt][tgt] - u[src][tgt]) / u[tgt][tgt]. Cells without a
// prediction run stay absent; a zero in-domain diagonal makes that target's
// u_hat column undefined.
struct CrossTensor {
  std::vector<std::string> datasets;
  std::vector<std::string> models;
  std::vector<Matrix<std::optional<double>>> u;      // [source][target][model]
  std::vector<Matrix<std::optional<double>>> u_hat;  // same shape

  std::size_t present_cells() const;
  std::size_t total_cells() const;
};

struct CrossCell {
  std::size_t source = 0;
  std::size_t target = 0;
  std::size_t model = 0;
  double f1 = 0;
};

CrossTensor build_cross_tensor(std::vector<std::string> datasets, std::vector<std::string> models,
                               std::span<const CrossCell> cells);

// Spearman between a dataset-pair measure and one model's cross-dataset F1:
// per target over sources, plus a pooled coefficient over all off-diagonal
// pairs. Undefined cells are dropped pairwise; fewer than 2 surviving pairs
// leaves the coefficient undefined.
struct CorrelationReport {
  std::vector<std::optional<double>> per_target;
  std::optional<double> pooled;
};

CorrelationReport psi_u_correlation(const Matrix<double>& psi, const CrossTensor& tensor,
                                    std::size_t model);

// Undirected dataset-distance weights w[i][j] = z[i][j]/z[j][j] + z[j][i]/z[i][i];
// exact symmetry by construction, diagonal 2. Rows/columns with an undefined
// or zero diagonal yield undefined edges.
OptMatrix distance_edges(const OptMatrix& z);
OptMatrix distance_edges(const Matrix<double>& z);

}  // namespace segdiag
