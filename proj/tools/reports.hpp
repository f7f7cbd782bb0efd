#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "segdiag/bucketing.hpp"
#include "segdiag/diagnosis.hpp"

namespace segdiag::cli {

// All emitted JSON is key-sorted (nlohmann::json object ordering), indented
// by two spaces and newline-terminated so goldens are byte-stable.
std::string dump_report(const nlohmann::json& j);

void write_text_file(const std::filesystem::path& path, const std::string& text);

// Fixed 6-decimal formatting for TSV ratio columns.
std::string format_ratio(double v);

nlohmann::json bucket_specs_json(const BucketSpec& spec);
nlohmann::json prf_json(const Prf& prf);

// One attribute block of an eval report: bucket_specs plus per-bucket counts
// and scores.
nlohmann::json attribute_report_json(const BucketSpec& spec, const std::vector<BucketResult>& buckets);

// Performance tensor file, carrying everything `measures` needs: values,
// bucket specs, per-model corpus F1, alpha_mu and the realized config.
nlohmann::json tensor_json(const PerformanceTensor& tensor, const std::string& dataset,
                           std::size_t buckets_requested, SlenUnit slen_unit,
                           const std::vector<double>& alpha_mu_per_attribute, std::size_t n_test_words);

struct TensorFile {
  PerformanceTensor tensor;
  std::string dataset;
  std::size_t buckets_requested = 3;
  SlenUnit slen_unit = SlenUnit::kChar;
  std::vector<double> alpha_mu;  // per attribute
  std::size_t n_test_words = 0;
};

TensorFile parse_tensor_file(const std::filesystem::path& path);

// An eval report parsed back for diagnosis: per-attribute slices plus the
// corpus score. Accepts both the single-attribute and the multi-attribute
// report shapes.
struct RunFile {
  std::string model;
  std::vector<AttributeSlice> slices;
  std::vector<BucketSpec> specs;
  Prf corpus;
};

RunFile parse_run_file(const std::filesystem::path& path);

nlohmann::json parse_json_file_checked(const std::filesystem::path& path);

}  // namespace segdiag::cli
