#include "segdiag/diagnosis.hpp"

#include "segdiag/errors.hpp"

namespace segdiag {

SelfDiagnosis self_diagnose(const std::vector<AttributeSlice>& slices) {
  SelfDiagnosis out;
  out.reserve(slices.size());
  for (const auto& slice : slices) {
    if (slice.f1.empty() || slice.f1.size() != slice.labels.size()) {
      throw ValidationError("self_diagnose: malformed slice for " + slice.attribute);
    }
    std::size_t worst = 0;
    std::size_t best = 0;
    for (std::size_t k = 1; k < slice.f1.size(); ++k) {
      if (slice.f1[k] < slice.f1[worst]) worst = k;
      if (slice.f1[k] > slice.f1[best]) best = k;
    }
    out.push_back({slice.attribute, worst, slice.labels[worst], slice.f1[worst],
                   slice.f1[best] - slice.f1[worst]});
  }
  return out;
}

AidedDiagnosis aided_diagnose(const std::vector<AttributeSlice>& a,
                              const std::vector<AttributeSlice>& b) {
  if (a.size() != b.size()) throw ValidationError("aided_diagnose: attribute count mismatch");
  AidedDiagnosis out;
  out.reserve(a.size());
  for (std::size_t j = 0; j < a.size(); ++j) {
    const auto& sa = a[j];
    const auto& sb = b[j];
    if (sa.attribute != sb.attribute) {
      throw ValidationError("aided_diagnose: attribute order mismatch at index " + std::to_string(j));
    }
    if (sa.f1.size() != sb.f1.size()) {
      throw ValidationError("aided_diagnose: bucket count mismatch for " + sa.attribute);
    }
    if (sa.f1.empty() || sa.f1.size() != sa.labels.size()) {
      throw ValidationError("aided_diagnose: malformed slice for " + sa.attribute);
    }

    AidedDiagnosisEntry entry;
    entry.attribute = sa.attribute;

    bool a_loses = false;
    std::size_t pick = 0;
    for (std::size_t k = 0; k < sa.f1.size(); ++k) {
      const double delta = sa.f1[k] - sb.f1[k];
      if (delta < 0 && (!a_loses || delta < sa.f1[pick] - sb.f1[pick])) {
        a_loses = true;
        pick = k;
      }
    }
    if (a_loses) {
      entry.mode = AidedMode::kALoses;
    } else {
      // A >= B everywhere: report A's best bucket.
      pick = 0;
      for (std::size_t k = 1; k < sa.f1.size(); ++k) {
        if (sa.f1[k] > sa.f1[pick]) pick = k;
      }
      entry.mode = AidedMode::kABest;
    }
    entry.bucket = pick;
    entry.bucket_label = sa.labels[pick];
    entry.delta = sa.f1[pick] - sb.f1[pick];
    out.push_back(std::move(entry));
  }
  return out;
}

}  // namespace segdiag
