#include "reports.hpp"

#include <cstdio>
#include <fstream>

#include "segdiag/errors.hpp"

namespace segdiag::cli {

using nlohmann::json;

std::string dump_report(const json& j) { return j.dump(2) + "\n"; }

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << text;
  if (!out) throw IoError("write failure on " + path.string());
}

std::string format_ratio(double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.6f", v);
  return buf;
}

json bucket_specs_json(const BucketSpec& spec) {
  json out = json::array();
  for (std::size_t k = 0; k < spec.size(); ++k) {
    json b;
    b["label"] = spec.labels[k];
    b["lo"] = spec.lower[k];
    if (k + 1 < spec.size()) {
      b["hi"] = spec.lower[k + 1];
    } else {
      b["hi"] = nullptr;  // unbounded above
    }
    out.push_back(std::move(b));
  }
  return out;
}

json prf_json(const Prf& prf) {
  return json{{"precision", prf.precision}, {"recall", prf.recall}, {"f1", prf.f1}};
}

json attribute_report_json(const BucketSpec& spec, const std::vector<BucketResult>& buckets) {
  json out;
  out["attribute"] = std::string(attribute_name(spec.attribute));
  out["bucket_specs"] = bucket_specs_json(spec);
  json rows = json::array();
  for (const auto& b : buckets) {
    rows.push_back(json{{"label", spec.labels[b.bucket_index]},
                        {"gold_count", b.gold_count},
                        {"pred_count", b.pred_count},
                        {"match_count", b.match_count},
                        {"precision", b.precision},
                        {"recall", b.recall},
                        {"f1", b.f1}});
  }
  out["buckets"] = std::move(rows);
  return out;
}

json tensor_json(const PerformanceTensor& tensor, const std::string& dataset,
                 std::size_t buckets_requested, SlenUnit slen_unit,
                 const std::vector<double>& alpha_mu_per_attribute, std::size_t n_test_words) {
  json out;
  out["schema_version"] = 1;
  out["dataset"] = dataset;
  out["models"] = tensor.models;
  json attrs = json::array();
  for (const Attribute a : tensor.attributes) attrs.push_back(std::string(attribute_name(a)));
  out["attributes"] = std::move(attrs);

  json specs;
  json mu;
  for (std::size_t j = 0; j < tensor.attributes.size(); ++j) {
    const std::string name(attribute_name(tensor.attributes[j]));
    specs[name] = bucket_specs_json(tensor.specs[j]);
    mu[name] = alpha_mu_per_attribute.at(j);
  }
  out["bucket_specs"] = std::move(specs);
  out["alpha_mu"] = std::move(mu);
  out["n_test_words"] = n_test_words;

  json corpus;
  for (std::size_t i = 0; i < tensor.models.size(); ++i) {
    corpus[tensor.models[i]] = prf_json(tensor.corpus[i]);
  }
  out["corpus_f1"] = std::move(corpus);

  out["values"] = tensor.values;
  out["config"] = json{{"buckets_requested", buckets_requested},
                       {"slen_unit", std::string(slen_unit_name(slen_unit))}};
  return out;
}

json parse_json_file_checked(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::parse_error& e) {
    throw ValidationError(path.string() + ": " + e.what());
  }
  return j;
}

namespace {

BucketSpec bucket_spec_from_json(const json& arr, Attribute attribute, const std::string& ctx) {
  BucketSpec spec;
  spec.attribute = attribute;
  if (!arr.is_array() || arr.empty()) throw ValidationError(ctx + ": malformed bucket_specs");
  for (const json& b : arr) {
    spec.labels.push_back(b.at("label").get<std::string>());
    spec.lower.push_back(b.at("lo").get<double>());
  }
  return spec;
}

Prf prf_from_json(const json& j) {
  Prf prf;
  prf.precision = j.at("precision").get<double>();
  prf.recall = j.at("recall").get<double>();
  prf.f1 = j.at("f1").get<double>();
  return prf;
}

}  // namespace

TensorFile parse_tensor_file(const std::filesystem::path& path) {
  const json j = parse_json_file_checked(path);
  TensorFile file;
  try {
    file.dataset = j.at("dataset").get<std::string>();
    file.tensor.models = j.at("models").get<std::vector<std::string>>();
    for (const json& name : j.at("attributes")) {
      const auto attr = attribute_from_name(name.get<std::string>());
      if (!attr) throw ValidationError(path.string() + ": unknown attribute " + name.get<std::string>());
      file.tensor.attributes.push_back(*attr);
    }
    for (const Attribute a : file.tensor.attributes) {
      const std::string name(attribute_name(a));
      file.tensor.specs.push_back(
          bucket_spec_from_json(j.at("bucket_specs").at(name), a, path.string()));
      file.alpha_mu.push_back(j.at("alpha_mu").at(name).get<double>());
    }
    file.tensor.values = j.at("values").get<std::vector<std::vector<std::vector<double>>>>();
    for (const std::string& model : file.tensor.models) {
      file.tensor.corpus.push_back(prf_from_json(j.at("corpus_f1").at(model)));
    }
    file.n_test_words = j.at("n_test_words").get<std::size_t>();
    const json& config = j.at("config");
    file.buckets_requested = config.at("buckets_requested").get<std::size_t>();
    const auto unit = slen_unit_from_name(config.at("slen_unit").get<std::string>());
    if (!unit) throw ValidationError(path.string() + ": bad slen_unit");
    file.slen_unit = *unit;
  } catch (const json::exception& e) {
    throw ValidationError(path.string() + ": not a tensor file (" + e.what() + ")");
  }

  if (file.tensor.values.size() != file.tensor.models.size()) {
    throw ValidationError(path.string() + ": values do not match the model axis");
  }
  for (const auto& model_slices : file.tensor.values) {
    if (model_slices.size() != file.tensor.attributes.size()) {
      throw ValidationError(path.string() + ": values do not match the attribute axis");
    }
    for (std::size_t a = 0; a < model_slices.size(); ++a) {
      if (model_slices[a].size() != file.tensor.specs[a].size()) {
        throw ValidationError(path.string() + ": values do not match the bucket axis");
      }
    }
  }
  return file;
}

RunFile parse_run_file(const std::filesystem::path& path) {
  const json j = parse_json_file_checked(path);
  RunFile run;
  try {
    run.corpus = prf_from_json(j.at("corpus"));
    if (j.contains("config") && j["config"].contains("model")) {
      run.model = j["config"]["model"].get<std::string>();
    }
    const auto read_block = [&](const json& block) {
      const std::string name = block.at("attribute").get<std::string>();
      const auto attr = attribute_from_name(name);
      if (!attr) throw ValidationError(path.string() + ": unknown attribute " + name);
      const BucketSpec spec = bucket_spec_from_json(block.at("bucket_specs"), *attr, path.string());
      AttributeSlice slice;
      slice.attribute = name;
      slice.labels = spec.labels;
      for (const json& b : block.at("buckets")) slice.f1.push_back(b.at("f1").get<double>());
      if (slice.f1.size() != spec.size()) {
        throw ValidationError(path.string() + ": bucket rows do not match bucket_specs");
      }
      run.slices.push_back(std::move(slice));
      run.specs.push_back(spec);
    };
    if (j.contains("attributes")) {
      for (const json& block : j["attributes"]) read_block(block);
    } else {
      read_block(j);
    }
  } catch (const json::exception& e) {
    throw ValidationError(path.string() + ": not an eval report (" + e.what() + ")");
  }
  if (run.slices.empty()) throw ValidationError(path.string() + ": report has no attribute blocks");
  return run;
}

}  // namespace segdiag::cli
