#pragma once

#include <cmath>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace covsel {

/// Edge-recovery confusion counts over unordered pairs i < j.
struct ConfusionCounts {
  long long tp = 0;
  long long tn = 0;
  long long fp = 0;
  long long fn = 0;
};

/// TP = |est ∩ true|, FP = |est \ true|, FN = |true \ est|, TN the rest of
/// the p(p-1)/2 pairs. Pairs must satisfy 0 <= i < j < p.
inline ConfusionCounts confusion(const std::vector<std::pair<int, int>>& est_edges,
                                 const std::vector<std::pair<int, int>>& true_edges,
                                 int p) {
  if (p < 1) throw std::invalid_argument("confusion: p must be positive");
  const auto check = [p](const std::pair<int, int>& e, const char* which) {
    if (e.first < 0 || e.second <= e.first || e.second >= p)
      throw std::invalid_argument(std::string("confusion: out-of-range pair in ") + which +
                                  " edge set: (" + std::to_string(e.first + 1) + ", " +
                                  std::to_string(e.second + 1) + ")");
  };
  std::set<std::pair<int, int>> est, truth;
  for (const auto& e : est_edges) {
    check(e, "estimated");
    est.insert(e);
  }
  for (const auto& e : true_edges) {
    check(e, "true");
    truth.insert(e);
  }

  ConfusionCounts c;
  for (const auto& e : est) {
    if (truth.count(e))
      ++c.tp;
    else
      ++c.fp;
  }
  for (const auto& e : truth)
    if (!est.count(e)) ++c.fn;
  c.tn = static_cast<long long>(p) * (p - 1) / 2 - c.tp - c.fp - c.fn;
  return c;
}

/// TP / (TP + FN); 0 when the denominator is 0.
inline double sensitivity(const ConfusionCounts& c) {
  const long long denom = c.tp + c.fn;
  return denom == 0 ? 0.0 : static_cast<double>(c.tp) / static_cast<double>(denom);
}

/// TN / (TN + FP); 0 when the denominator is 0.
inline double specificity(const ConfusionCounts& c) {
  const long long denom = c.tn + c.fp;
  return denom == 0 ? 0.0 : static_cast<double>(c.tn) / static_cast<double>(denom);
}

/// (TP*TN - FP*FN) / sqrt((TP+FP)(TP+FN)(TN+FP)(TN+FN)); 0 when any factor
/// of the denominator is 0.
inline double mcc(const ConfusionCounts& c) {
  const double f1 = static_cast<double>(c.tp + c.fp);
  const double f2 = static_cast<double>(c.tp + c.fn);
  const double f3 = static_cast<double>(c.tn + c.fp);
  const double f4 = static_cast<double>(c.tn + c.fn);
  if (f1 == 0 || f2 == 0 || f3 == 0 || f4 == 0) return 0.0;
  const double num = static_cast<double>(c.tp) * static_cast<double>(c.tn) -
                     static_cast<double>(c.fp) * static_cast<double>(c.fn);
  return num / std::sqrt(f1 * f2 * f3 * f4);
}

}  // namespace covsel
