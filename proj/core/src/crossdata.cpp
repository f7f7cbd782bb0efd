#include "segdiag/crossdata.hpp"

#include "segdiag/measures.hpp"
#include "segdiag/numeric.hpp"
#include "segdiag/parallel.hpp"

namespace segdiag {

TestTypeCounts count_test_types(std::span<const Span> spans) {
  TestTypeCounts out;
  for (const auto& span : spans) {
    auto& per_label = out.counts.try_emplace(span.text).first->second;
    per_label.try_emplace(span.labels).first->second += 1;
    ++out.total;
  }
  return out;
}

double psi_corpus(const TrainingStats& train, const TestTypeCounts& test) {
  if (test.total == 0) throw ValidationError("psi_corpus: empty test set");
  StableSum sum;
  for (const auto& [word, per_label] : test.counts) {
    for (const auto& [labels, tokens] : per_label) {
      sum.add(psi_word(word, labels, train) * static_cast<double>(tokens));
    }
  }
  return sum.value() / static_cast<double>(test.total);
}

double psi_corpus(const TrainingStats& train, std::span<const Span> test_spans) {
  return psi_corpus(train, count_test_types(test_spans));
}

PsiMatrix build_psi_matrix(std::span<const TrainingStats> train,
                           std::span<const TestTypeCounts> test) {
  if (train.size() != test.size()) throw ValidationError("build_psi_matrix: axis mismatch");
  const std::size_t nd = train.size();
  PsiMatrix psi(nd, std::vector<double>(nd));
  parallel_for(nd * nd, [&](std::size_t cell) {
    psi[cell / nd][cell % nd] = psi_corpus(train[cell / nd], test[cell % nd]);
  });
  return psi;
}

std::size_t CrossTensor::present_cells() const {
  std::size_t n = 0;
  for (const auto& m : u) {
    for (const auto& row : m) {
      for (const auto& cell : row) {
        if (cell.has_value()) ++n;
      }
    }
  }
  return n;
}

std::size_t CrossTensor::total_cells() const {
  return datasets.size() * datasets.size() * models.size();
}

CrossTensor build_cross_tensor(std::vector<std::string> datasets, std::vector<std::string> models,
                               std::span<const CrossCell> cells) {
  CrossTensor tensor;
  tensor.datasets = std::move(datasets);
  tensor.models = std::move(models);
  const std::size_t nd = tensor.datasets.size();
  const std::size_t nm = tensor.models.size();
  tensor.u.assign(nd, Matrix<std::optional<double>>(nd, std::vector<std::optional<double>>(nm)));
  tensor.u_hat = tensor.u;

  for (const auto& cell : cells) {
    if (cell.source >= nd || cell.target >= nd || cell.model >= nm) {
      throw ValidationError("cross cell index out of range");
    }
    auto& slot = tensor.u[cell.source][cell.target][cell.model];
    if (slot.has_value()) throw ValidationError("duplicate cross cell");
    slot = cell.f1;
  }

  for (std::size_t i = 0; i < nd; ++i) {
    for (std::size_t j = 0; j < nd; ++j) {
      for (std::size_t k = 0; k < nm; ++k) {
        const auto& transfer = tensor.u[i][j][k];
        const auto& in_domain = tensor.u[j][j][k];
        if (!transfer.has_value() || !in_domain.has_value()) continue;
        if (i == j) {
          tensor.u_hat[i][j][k] = 0.0;
        } else if (*in_domain > 0.0) {
          tensor.u_hat[i][j][k] = (*in_domain - *transfer) / *in_domain;
        }
      }
    }
  }
  return tensor;
}

CorrelationReport psi_u_correlation(const Matrix<double>& psi, const CrossTensor& tensor,
                                    std::size_t model) {
  const std::size_t nd = tensor.datasets.size();
  if (psi.size() != nd) throw ValidationError("psi matrix does not match tensor datasets");
  if (model >= tensor.models.size()) throw ValidationError("model index out of range");

  CorrelationReport report;
  report.per_target.resize(nd);

  std::vector<double> pooled_psi, pooled_u;
  for (std::size_t j = 0; j < nd; ++j) {
    std::vector<double> xs, ys;
    for (std::size_t i = 0; i < nd; ++i) {
      const auto& cell = tensor.u[i][j][model];
      if (!cell.has_value()) continue;
      xs.push_back(psi.at(i).at(j));
      ys.push_back(*cell);
      if (i != j) {
        pooled_psi.push_back(psi[i][j]);
        pooled_u.push_back(*cell);
      }
    }
    if (xs.size() >= 2) report.per_target[j] = spearman(xs, ys);
  }
  if (pooled_psi.size() >= 2) report.pooled = spearman(pooled_psi, pooled_u);
  return report;
}

OptMatrix distance_edges(const OptMatrix& z) {
  const std::size_t n = z.size();
  for (const auto& row : z) {
    if (row.size() != n) throw ValidationError("distance_edges: matrix not square");
  }
  OptMatrix w(n, std::vector<std::optional<double>>(n));
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = i; j < n; ++j) {
      const auto& zii = z[i][i];
      const auto& zjj = z[j][j];
      if (!zii.has_value() || !zjj.has_value() || *zii == 0.0 || *zjj == 0.0) continue;
      if (!z[i][j].has_value() || !z[j][i].has_value()) continue;
      const double weight = *z[i][j] / *zjj + *z[j][i] / *zii;
      w[i][j] = weight;
      w[j][i] = weight;
    }
  }
  return w;
}

OptMatrix distance_edges(const Matrix<double>& z) {
  OptMatrix opt(z.size());
  for (std::size_t i = 0; i < z.size(); ++i) {
    opt[i].assign(z[i].begin(), z[i].end());
  }
  return distance_edges(opt);
}

}  // namespace segdiag
