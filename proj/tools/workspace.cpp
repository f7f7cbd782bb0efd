#include "workspace.hpp"

#include <fstream>
#include <set>

#include <json.hpp>

#include "segdiag/errors.hpp"

namespace segdiag::cli {

namespace {

using nlohmann::json;

json parse_json_file(const std::filesystem::path& path) {
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

std::filesystem::path resolve(const std::filesystem::path& base, const std::string& rel) {
  std::filesystem::path p(rel);
  if (p.is_absolute()) return p;
  return base / p;
}

std::filesystem::path require_file(const std::filesystem::path& p, const std::string& what) {
  if (!std::filesystem::exists(p)) throw ValidationError(what + " does not exist: " + p.string());
  return p;
}

std::string get_string(const json& j, const char* key, const std::string& ctx) {
  if (!j.contains(key) || !j[key].is_string()) {
    throw ValidationError(ctx + ": missing string field \"" + key + "\"");
  }
  return j[key].get<std::string>();
}

}  // namespace

const DatasetPaths& Workspace::dataset(const std::string& name) const {
  return datasets[dataset_index(name)];
}

std::size_t Workspace::dataset_index(const std::string& name) const {
  for (std::size_t i = 0; i < datasets.size(); ++i) {
    if (datasets[i].name == name) return i;
  }
  throw ValidationError("unknown dataset: " + name);
}

Workspace load_workspace(const std::filesystem::path& path) {
  const json j = parse_json_file(path);
  const std::filesystem::path base = path.parent_path();
  Workspace ws;

  if (!j.contains("datasets") || !j["datasets"].is_object() || j["datasets"].empty()) {
    throw ValidationError(path.string() + ": workspace needs a non-empty \"datasets\" object");
  }
  // json objects iterate in key order, so datasets come out name-sorted
  for (const auto& [name, spec] : j["datasets"].items()) {
    DatasetPaths d;
    d.name = name;
    if (spec.contains("train")) {
      d.train = require_file(resolve(base, spec["train"].get<std::string>()), "train of " + name);
    }
    if (spec.contains("dev")) {
      d.dev = require_file(resolve(base, spec["dev"].get<std::string>()), "dev of " + name);
    }
    if (spec.contains("test")) {
      d.test = require_file(resolve(base, spec["test"].get<std::string>()), "test of " + name);
    }
    ws.datasets.push_back(std::move(d));
  }

  for (const json& r : j.value("runs", json::array())) {
    RunEntry run;
    run.model = get_string(r, "model", "runs");
    run.dataset = get_string(r, "dataset", "runs");
    run.pred = require_file(resolve(base, get_string(r, "pred", "runs")), "pred of run");
    ws.dataset_index(run.dataset);
    ws.runs.push_back(std::move(run));
  }
  std::set<std::tuple<std::string, std::string>> run_keys;
  for (const auto& r : ws.runs) {
    if (!run_keys.insert({r.model, r.dataset}).second) {
      throw ValidationError("duplicate run entry for model " + r.model + " on " + r.dataset);
    }
  }

  for (const json& r : j.value("cross_runs", json::array())) {
    CrossRunEntry run;
    run.source = get_string(r, "source", "cross_runs");
    run.target = get_string(r, "target", "cross_runs");
    run.model = get_string(r, "model", "cross_runs");
    run.pred = require_file(resolve(base, get_string(r, "pred", "cross_runs")), "pred of cross run");
    ws.dataset_index(run.source);
    ws.dataset_index(run.target);
    ws.cross_runs.push_back(std::move(run));
  }
  std::set<std::tuple<std::string, std::string, std::string>> cross_keys;
  for (const auto& r : ws.cross_runs) {
    if (!cross_keys.insert({r.source, r.target, r.model}).second) {
      throw ValidationError("duplicate cross run (" + r.source + ", " + r.target + ", " + r.model + ")");
    }
  }

  if (j.contains("options")) {
    const json& o = j["options"];
    if (o.contains("buckets")) ws.options.buckets = o["buckets"].get<std::size_t>();
    if (o.contains("seed")) ws.options.seed = o["seed"].get<std::uint64_t>();
    if (o.contains("slen_unit")) {
      const auto unit = slen_unit_from_name(o["slen_unit"].get<std::string>());
      if (!unit) throw ValidationError("options.slen_unit must be \"char\" or \"word\"");
      ws.options.slen_unit = *unit;
    }
    if (o.contains("map")) {
      ws.options.char_map = require_file(resolve(base, o["map"].get<std::string>()), "options.map");
    }
  }
  if (ws.options.buckets < 2) throw ValidationError("options.buckets must be >= 2");
  return ws;
}

DatasetPaths load_dataset_descriptor(const std::filesystem::path& path) {
  const json j = parse_json_file(path);
  const std::filesystem::path base = path.parent_path();
  DatasetPaths d;
  d.name = get_string(j, "name", path.string());
  if (j.contains("train")) {
    d.train = require_file(resolve(base, j["train"].get<std::string>()), "train of " + d.name);
  }
  if (j.contains("dev")) {
    d.dev = require_file(resolve(base, j["dev"].get<std::string>()), "dev of " + d.name);
  }
  if (j.contains("test")) {
    d.test = require_file(resolve(base, j["test"].get<std::string>()), "test of " + d.name);
  }
  return d;
}

Corpus load_corpus(const DatasetPaths& paths, const CharMap* char_map) {
  Corpus c;
  c.name = paths.name;
  if (!paths.train.empty()) c.train = parse_segmented_file(paths.train, char_map).sentences;
  if (!paths.dev.empty()) c.dev = parse_segmented_file(paths.dev, char_map).sentences;
  if (!paths.test.empty()) c.test = parse_segmented_file(paths.test, char_map).sentences;
  return c;
}

}  // namespace segdiag::cli
