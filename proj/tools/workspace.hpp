#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include "segdiag/attributes.hpp"
#include "segdiag/corpus.hpp"

namespace segdiag::cli {

// Train/dev/test file locations for one named corpus.
struct DatasetPaths {
  std::string name;
  std::filesystem::path train;
  std::filesystem::path dev;   // may be empty
  std::filesystem::path test;  // may be empty
};

struct RunEntry {
  std::string model;
  std::string dataset;
  std::filesystem::path pred;
};

struct CrossRunEntry {
  std::string source;
  std::string target;
  std::string model;
  std::filesystem::path pred;
};

struct WorkspaceOptions {
  std::size_t buckets = 3;
  SlenUnit slen_unit = SlenUnit::kChar;
  std::uint64_t seed = 0;
  std::filesystem::path char_map;  // may be empty
};

// Parsed workspace file. Datasets are held in name-sorted order so every
// derived report is byte-stable.
struct Workspace {
  std::vector<DatasetPaths> datasets;
  std::vector<RunEntry> runs;
  std::vector<CrossRunEntry> cross_runs;
  WorkspaceOptions options;

  const DatasetPaths& dataset(const std::string& name) const;
  std::size_t dataset_index(const std::string& name) const;
};

// Loads and validates: unique names, referenced datasets known, every path
// resolvable relative to the workspace file's directory.
Workspace load_workspace(const std::filesystem::path& path);

// Single-dataset descriptor file {"name", "train", "dev", "test"} used by
// `segdiag select`.
DatasetPaths load_dataset_descriptor(const std::filesystem::path& path);

// Reads the splits named by the descriptor; missing path fields stay empty.
Corpus load_corpus(const DatasetPaths& paths, const CharMap* char_map = nullptr);

}  // namespace segdiag::cli
