#include "segdiag/selection.hpp"

#include <random>
#include <unordered_set>

#include "segdiag/parallel.hpp"

namespace segdiag {

std::string_view select_strategy_name(SelectStrategy s) {
  switch (s) {
    case SelectStrategy::kMax: return "max";
    case SelectStrategy::kMin: return "min";
    case SelectStrategy::kRand: return "rand";
  }
  return "?";
}

std::optional<SelectStrategy> select_strategy_from_name(std::string_view name) {
  if (name == "max") return SelectStrategy::kMax;
  if (name == "min") return SelectStrategy::kMin;
  if (name == "rand") return SelectStrategy::kRand;
  return std::nullopt;
}

TrainingStats merge_training(const TrainingStats& a, const TrainingStats& b) {
  TrainingStats merged = a;
  merged.merge(b);
  return merged;
}

SelectionPlan select_order(const Corpus& target, const std::vector<Corpus>& sources,
                           SelectStrategy strategy, std::uint64_t seed, const PoolMeasure& measure) {
  if (target.dev.empty()) throw ValidationError("select_order: target dev set is empty");
  if (sources.empty()) throw ValidationError("select_order: no source corpora");
  std::unordered_set<std::string> names;
  for (const auto& s : sources) {
    if (!names.insert(s.name).second) {
      throw ValidationError("select_order: duplicate source name " + s.name);
    }
  }

  const PoolMeasure phi =
      measure ? measure : [](const TrainingStats& pool, const TestTypeCounts& dev) {
        return psi_corpus(pool, dev);
      };

  const TestTypeCounts dev_types = count_test_types(extract_spans(target.dev));

  TrainingStats pool;
  for (const auto& s : target.train) pool.add_sentence(s);
  std::vector<TrainingStats> source_stats(sources.size());
  parallel_for(sources.size(), [&](std::size_t k) {
    for (const auto& s : sources[k].train) source_stats[k].add_sentence(s);
  });

  SelectionPlan plan;
  plan.strategy = strategy;
  if (strategy == SelectStrategy::kRand) plan.seed = seed;
  for (const auto& s : sources) plan.source_names.push_back(s.name);

  std::mt19937_64 rng(seed);
  std::vector<bool> taken(sources.size(), false);

  for (std::size_t step = 0; step < sources.size(); ++step) {
    SelectionStep record;
    record.candidate_scores.resize(sources.size());

    std::vector<std::size_t> remaining;
    for (std::size_t k = 0; k < sources.size(); ++k) {
      if (!taken[k]) remaining.push_back(k);
    }
    std::vector<double> scores(remaining.size());
    parallel_for(remaining.size(), [&](std::size_t r) {
      scores[r] = phi(merge_training(pool, source_stats[remaining[r]]), dev_types);
    });
    for (std::size_t r = 0; r < remaining.size(); ++r) {
      record.candidate_scores[remaining[r]] = scores[r];
    }

    std::size_t pick = 0;
    switch (strategy) {
      case SelectStrategy::kMax:
        for (std::size_t r = 1; r < remaining.size(); ++r) {
          if (scores[r] > scores[pick]) pick = r;
        }
        break;
      case SelectStrategy::kMin:
        for (std::size_t r = 1; r < remaining.size(); ++r) {
          if (scores[r] < scores[pick]) pick = r;
        }
        break;
      case SelectStrategy::kRand:
        pick = static_cast<std::size_t>(rng() % remaining.size());
        break;
    }

    const std::size_t chosen = remaining[pick];
    record.chosen = chosen;
    plan.order.push_back(chosen);
    plan.scores.push_back(scores[pick]);
    plan.steps.push_back(std::move(record));
    pool.merge(source_stats[chosen]);
    taken[chosen] = true;
  }
  return plan;
}

}  // namespace segdiag
