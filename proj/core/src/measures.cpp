#include "segdiag/measures.hpp"

#include <cmath>

#include "segdiag/numeric.hpp"
#include "segdiag/stats.hpp"

namespace segdiag {

std::optional<double> spearman(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size()) throw ValidationError("spearman: length mismatch");
  if (x.size() < 2) throw ValidationError("spearman: need at least 2 points");

  const std::vector<double> rx = average_ranks(x);
  const std::vector<double> ry = average_ranks(y);
  const double mx = mean(rx);
  const double my = mean(ry);

  StableSum sxy, sxx, syy;
  for (std::size_t i = 0; i < rx.size(); ++i) {
    const double dx = rx[i] - mx;
    const double dy = ry[i] - my;
    sxy.add(dx * dy);
    sxx.add(dx * dx);
    syy.add(dy * dy);
  }
  if (sxx.value() == 0.0 || syy.value() == 0.0) return std::nullopt;
  const double r = sxy.value() / std::sqrt(sxx.value() * syy.value());
  return std::clamp(r, -1.0, 1.0);
}

ModelWiseTable model_wise(const PerformanceTensor& tensor) {
  ModelWiseTable table;
  const std::size_t n_models = tensor.values.size();
  const std::size_t n_attrs = tensor.attributes.size();
  table.s_rho.assign(n_models, std::vector<std::optional<double>>(n_attrs));
  table.s_sigma.assign(n_models, std::vector<double>(n_attrs, 0.0));

  for (std::size_t i = 0; i < n_models; ++i) {
    for (std::size_t j = 0; j < n_attrs; ++j) {
      const std::vector<double>& slice = tensor.values[i][j];
      table.s_sigma[i][j] = population_stddev(slice);
      if (slice.size() >= 2) {
        std::vector<double> bucket_order(slice.size());
        for (std::size_t k = 0; k < slice.size(); ++k) bucket_order[k] = static_cast<double>(k + 1);
        table.s_rho[i][j] = spearman(slice, bucket_order);
      }
    }
  }
  return table;
}

double alpha_mu(std::span<const AttributeVector> attrs, Attribute attribute) {
  if (attrs.empty()) throw ValidationError("alpha_mu: no test words");
  StableSum sum;
  for (const auto& v : attrs) sum.add(attribute_value(v, attribute));
  return sum.value() / static_cast<double>(attrs.size());
}

DatasetWiseTable dataset_wise(const ModelWiseTable& table,
                              std::span<const double> alpha_mu_per_attribute) {
  if (table.s_rho.empty()) throw ValidationError("dataset_wise: no models");
  if (table.s_rho.front().size() != alpha_mu_per_attribute.size()) {
    throw ValidationError("dataset_wise: attribute axes disagree");
  }
  DatasetWiseTable out;
  out.alpha_mu.assign(alpha_mu_per_attribute.begin(), alpha_mu_per_attribute.end());
  out.alpha_rho.reserve(alpha_mu_per_attribute.size());
  for (std::size_t j = 0; j < alpha_mu_per_attribute.size(); ++j) {
    out.alpha_rho.push_back(alpha_rho(table, j));
  }
  return out;
}

AlphaRho alpha_rho(const ModelWiseTable& table, std::size_t attribute_index) {
  AlphaRho out;
  StableSum sum;
  std::size_t defined = 0;
  for (const auto& row : table.s_rho) {
    const auto& cell = row.at(attribute_index);
    if (cell.has_value()) {
      sum.add(std::abs(*cell));
      ++defined;
    } else {
      ++out.excluded;
    }
  }
  if (defined > 0) out.value = sum.value() / static_cast<double>(defined);
  return out;
}

}  // namespace segdiag
