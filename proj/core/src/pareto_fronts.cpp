#include <algorithm>
#include <cmath>
#include <numbers>
#include <set>

#include "tcsaea/errors.hpp"
#include "tcsaea/problems.hpp"

namespace tcsaea::problems {
namespace {

using std::numbers::pi;

std::vector<ObjVec> sample_curve(std::size_t count, double lo, double hi, auto&& f2_of_f1) {
  std::vector<ObjVec> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const double t = count == 1 ? 0.0 : static_cast<double>(i) / static_cast<double>(count - 1);
    const double f1 = lo + (hi - lo) * t;
    out.push_back({f1, f2_of_f1(f1)});
  }
  return out;
}

// Keeps `count` evenly spaced members (endpoints included) of an ordered set.
std::vector<ObjVec> thin(const std::vector<ObjVec>& ordered, std::size_t count) {
  if (ordered.size() <= count) return ordered;
  std::vector<ObjVec> out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) {
    const auto idx = static_cast<std::size_t>(
        std::llround(static_cast<double>(i) * static_cast<double>(ordered.size() - 1) /
                     static_cast<double>(count - 1)));
    out.push_back(ordered[idx]);
  }
  return out;
}

std::vector<ObjVec> nondominated_sorted(std::vector<ObjVec> pts) {
  std::vector<ObjVec> out;
  for (std::size_t i : nondominated_indices(pts)) out.push_back(pts[i]);
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

std::vector<ObjVec> dtlz7_front(std::size_t count) {
  const std::size_t dense = std::max<std::size_t>(20000, 50 * count);
  std::vector<ObjVec> pts;
  pts.reserve(dense);
  for (std::size_t i = 0; i < dense; ++i) {
    const double f1 = static_cast<double>(i) / static_cast<double>(dense - 1);
    pts.push_back({f1, 4.0 - f1 * (1.0 + std::sin(3.0 * pi * f1))});
  }
  return thin(nondominated_sorted(std::move(pts)), count);
}

std::vector<ObjVec> uf6_front(std::size_t count) {
  const std::size_t dense = std::max<std::size_t>(20000, 50 * count);
  std::vector<ObjVec> pts{{0.0, 1.0}};
  for (std::size_t i = 0; i < dense; ++i) {
    const double f1 = static_cast<double>(i) / static_cast<double>(dense - 1);
    if ((f1 >= 0.25 && f1 <= 0.5) || f1 >= 0.75) pts.push_back({f1, 1.0 - f1});
  }
  return thin(pts, count);
}

}  // namespace

std::vector<ObjVec> cm_onemax_grid_front(const CmOneMaxSpec& spec, int resolution) {
  if (resolution < 2) throw InvalidArgument("cm_onemax_grid_front: resolution must be >= 2");
  // Each coordinate takes values v/(res-1), v = 0..res-1. Track reachable
  // (sum x_i, sum |x_i - map_i|) pairs in integer grid units.
  const int steps = resolution - 1;
  std::set<std::pair<int, int>> reachable{{0, 0}};
  for (std::size_t i = 0; i < spec.n; ++i) {
    std::set<std::pair<int, int>> next;
    for (const auto& [a, b] : reachable) {
      for (int v = 0; v <= steps; ++v) {
        const int dist = spec.map[i] == 0 ? v : steps - v;
        next.emplace(a + v, b + dist);
      }
    }
    // Only the nondominated frontier can contribute to the final front.
    std::vector<std::pair<int, int>> ordered(next.begin(), next.end());
    reachable.clear();
    int best_b = std::numeric_limits<int>::max();
    for (const auto& [a, b] : ordered) {
      if (b < best_b) {
        reachable.emplace(a, b);
        best_b = b;
      }
    }
  }
  std::vector<ObjVec> out;
  for (const auto& [a, b] : reachable) {
    out.push_back({static_cast<double>(a) / steps, static_cast<double>(b) / steps});
  }
  return out;
}

std::vector<ObjVec> pareto_front_samples(const Problem& problem, std::size_t count) {
  if (count < 2) throw InvalidArgument("pareto_front_samples: count must be >= 2");
  switch (problem.family()) {
    case Family::Dtlz1:
    case Family::Dtlz1a:
      return sample_curve(count, 0.0, 0.5, [](double f1) { return 0.5 - f1; });
    case Family::Dtlz2:
    case Family::Dtlz3:
    case Family::Dtlz3a:
    case Family::Dtlz4:
    case Family::Dtlz5:
    case Family::Dtlz6: {
      std::vector<ObjVec> out;
      out.reserve(count);
      for (std::size_t i = 0; i < count; ++i) {
        const double a = static_cast<double>(i) / static_cast<double>(count - 1) * pi / 2.0;
        out.push_back({std::cos(a), std::sin(a)});
      }
      out.front() = {1.0, 0.0};
      out.back() = {0.0, 1.0};
      return out;
    }
    case Family::Dtlz7:
      return dtlz7_front(count);
    case Family::Uf1:
    case Family::Uf2:
    case Family::Uf3:
      return sample_curve(count, 0.0, 1.0, [](double f1) { return 1.0 - std::sqrt(f1); });
    case Family::Uf4:
      return sample_curve(count, 0.0, 1.0, [](double f1) { return 1.0 - f1 * f1; });
    case Family::Uf5: {
      std::vector<ObjVec> out;
      for (int i = 0; i <= 20; ++i) out.push_back({i / 20.0, 1.0 - i / 20.0});
      return out;
    }
    case Family::Uf6:
      return uf6_front(count);
    case Family::Uf7:
      return sample_curve(count, 0.0, 1.0, [](double f1) { return 1.0 - f1; });
    case Family::CmOneMax:
      return cm_onemax_grid_front(*problem.onemax());
  }
  throw InternalConsistency("pareto_front_samples: unhandled family");
}

}  // namespace tcsaea::problems
