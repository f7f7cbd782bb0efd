#pragma once

#include <optional>
#include <span>
#include <vector>

#include "segdiag/attributes.hpp"
#include "segdiag/bucketing.hpp"

namespace segdiag {

// Spearman rank correlation with tie-averaged ranks; empty when either input
// is constant (the coefficient is undefined, never silently 0).
std::optional<double> spearman(std::span<const double> x, std::span<const double> y);

// Per (model, attribute): rank correlation of bucket F1 against bucket order,
// and the population spread of the slice.
struct ModelWiseTable {
  std::vector<std::vector<std::optional<double>>> s_rho;  // [model][attribute]
  std::vector<std::vector<double>> s_sigma;               // [model][attribute]
};

ModelWiseTable model_wise(const PerformanceTensor& tensor);

// Mean attribute value over gold test words.
double alpha_mu(std::span<const AttributeVector> attrs, Attribute attribute);

// Mean absolute Spearman across models; undefined cells are excluded and
// counted, not imputed as zero.
struct AlphaRho {
  std::optional<double> value;
  std::size_t excluded = 0;
};

AlphaRho alpha_rho(const ModelWiseTable& table, std::size_t attribute_index);

// Dataset-level view: mean attribute value plus mean absolute correlation,
// one entry per attribute.
struct DatasetWiseTable {
  std::vector<double> alpha_mu;
  std::vector<AlphaRho> alpha_rho;
};

DatasetWiseTable dataset_wise(const ModelWiseTable& table,
                              std::span<const double> alpha_mu_per_attribute);

}  // namespace segdiag
