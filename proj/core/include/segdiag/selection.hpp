#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "segdiag/attributes.hpp"
#include "segdiag/corpus.hpp"
#include "segdiag/crossdata.hpp"

namespace segdiag {

enum class SelectStrategy { kMax, kMin, kRand };

std::string_view select_strategy_name(SelectStrategy s);
std::optional<SelectStrategy> select_strategy_from_name(std::string_view name);

// Returns a fresh copy with all counts added pointwise.
TrainingStats merge_training(const TrainingStats& a, const TrainingStats& b);

struct SelectionStep {
  std::size_t chosen = 0;                                  // source index
  std::vector<std::optional<double>> candidate_scores;     // per source; empty slot = already picked
};

struct SelectionPlan {
  SelectStrategy strategy = SelectStrategy::kMax;
  std::optional<std::uint64_t> seed;     // rand only
  std::vector<std::string> source_names;
  std::vector<std::size_t> order;        // permutation of source indices
  std::vector<double> scores;            // measure of the chosen candidate per step
  std::vector<SelectionStep> steps;
};

// The pool-vs-dev measure driving the greedy order; defaults to psi_corpus.
using PoolMeasure = std::function<double(const TrainingStats& pool, const TestTypeCounts& dev)>;

// Greedily enqueues every source against the target dev set: the pool starts
// as the target training data and grows by the chosen source each step. All
// remaining candidates are scored per step; ties resolve to the lower source
// index, and kRand draws from a generator seeded as given.
SelectionPlan select_order(const Corpus& target, const std::vector<Corpus>& sources,
                           SelectStrategy strategy, std::uint64_t seed = 0,
                           const PoolMeasure& measure = {});

}  // namespace segdiag
