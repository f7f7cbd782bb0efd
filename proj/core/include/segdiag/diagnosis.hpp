#pragma once

#include <string>
#include <vector>

namespace segdiag {

// One attribute's bucket F1 row, with display labels.
struct AttributeSlice {
  std::string attribute;
  std::vector<std::string> labels;
  std::vector<double> f1;
};

struct SelfDiagnosisEntry {
  std::string attribute;
  std::size_t worst_bucket = 0;
  std::string worst_bucket_label;
  double worst_f1 = 0;
  double gap = 0;  // best - worst
};

using SelfDiagnosis = std::vector<SelfDiagnosisEntry>;

// Worst bucket per attribute; ties resolve to the lower bucket index.
SelfDiagnosis self_diagnose(const std::vector<AttributeSlice>& slices);

enum class AidedMode { kALoses, kABest };

struct AidedDiagnosisEntry {
  std::string attribute;
  std::size_t bucket = 0;
  std::string bucket_label;
  double delta = 0;  // f1_A - f1_B at the reported bucket
  AidedMode mode = AidedMode::kABest;
};

using AidedDiagnosis = std::vector<AidedDiagnosisEntry>;

// Per attribute: the bucket where A trails B the most (mode kALoses), or, if
// A is at least as good everywhere, A's best bucket (mode kABest). Callers
// are expected to pass the holistically stronger model as A.
AidedDiagnosis aided_diagnose(const std::vector<AttributeSlice>& a,
                              const std::vector<AttributeSlice>& b);

}  // namespace segdiag
