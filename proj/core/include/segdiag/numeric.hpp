#pragma once

#include <cmath>
#include <cstddef>
#include <span>

namespace segdiag {

// Neumaier compensated accumulator; order-dependent but far more accurate
// than naive summation for long mixed-magnitude sums.
class StableSum {
 public:
  void add(double x) {
    const double t = sum_ + x;
    if (std::abs(sum_) >= std::abs(x)) {
      comp_ += (sum_ - t) + x;
    } else {
      comp_ += (x - t) + sum_;
    }
    sum_ = t;
  }

  double value() const { return sum_ + comp_; }

 private:
  double sum_ = 0.0;
  double comp_ = 0.0;
};

inline double stable_sum(std::span<const double> xs) {
  StableSum s;
  for (double x : xs) s.add(x);
  return s.value();
}

inline double mean(std::span<const double> xs) {
  return xs.empty() ? 0.0 : stable_sum(xs) / static_cast<double>(xs.size());
}

// Population standard deviation (divides by N, not N-1).
inline double population_stddev(std::span<const double> xs) {
  if (xs.empty()) return 0.0;
  bool constant = true;
  for (double x : xs) constant = constant && x == xs.front();
  if (constant) return 0.0;
  const double m = mean(xs);
  StableSum sq;
  for (double x : xs) sq.add((x - m) * (x - m));
  return std::sqrt(sq.value() / static_cast<double>(xs.size()));
}

}  // namespace segdiag
