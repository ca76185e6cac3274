#pragma once

#include <array>
#include <cstddef>
#include <span>
#include <vector>

namespace tcsaea {

using Point = std::vector<double>;
using PointSet = std::vector<Point>;

/// Bi-objective value. Index 0 is the fast objective, index 1 the slow one.
using ObjVec = std::array<double, 2>;

/// Axis-aligned box of decision variables.
struct Bounds {
  std::vector<double> lower;
  std::vector<double> upper;

  Bounds() = default;
  Bounds(std::vector<double> lo, std::vector<double> hi);

  static Bounds unit(std::size_t dim);

  std::size_t dim() const { return lower.size(); }
  double range(std::size_t k) const { return upper[k] - lower[k]; }
  bool contains(std::span<const double> x) const;
  void clip(std::span<double> x) const;
};

/// Pareto dominance for minimization.
inline bool dominates(const ObjVec& a, const ObjVec& b) {
  return a[0] <= b[0] && a[1] <= b[1] && (a[0] < b[0] || a[1] < b[1]);
}

/// Indices of the mutually nondominated members of `points`, in input order.
/// Exact duplicates are all retained.
std::vector<std::size_t> nondominated_indices(std::span<const ObjVec> points);

}  // namespace tcsaea
