#pragma once

#include <memory>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tcsaea/rng.hpp"
#include "tcsaea/types.hpp"

namespace tcsaea::problems {

enum class Family {
  Dtlz1, Dtlz1a, Dtlz2, Dtlz3, Dtlz3a, Dtlz4, Dtlz5, Dtlz6, Dtlz7,
  Uf1, Uf2, Uf3, Uf4, Uf5, Uf6, Uf7,
  CmOneMax,
};

struct ProblemSpec {
  std::string name;
  std::size_t n = 0;  ///< decision variables
  std::size_t m = 2;  ///< objectives
  Bounds bounds;
  std::size_t k = 0;  ///< DTLZ distance-variable count; 0 where not applicable
};

struct CmOneMaxSpec {
  std::size_t n = 10;
  double corr = 0.0;
  std::vector<int> map;  ///< reference value per dimension, each 0 or 1
  std::uint64_t seed = 0;
};

/// Immutable benchmark definition. Objective 1 is the fast objective and
/// objective 2 the slow one.
class Problem {
 public:
  Family family() const { return family_; }
  const ProblemSpec& spec() const { return spec_; }
  const std::string& name() const { return spec_.name; }
  std::size_t dim() const { return spec_.n; }
  const Bounds& bounds() const { return spec_.bounds; }
  /// Present only for cm-OneMax.
  const std::optional<CmOneMaxSpec>& onemax() const { return onemax_; }

  /// Throws InvalidArgument on wrong dimension or out-of-bounds input.
  ObjVec evaluate(std::span<const double> x) const;

  /// Human-readable identifier including instance parameters.
  std::string label() const;

 private:
  friend Problem make_dtlz(Family, std::size_t);
  friend Problem make_uf(Family, std::size_t);
  friend Problem make_problem(const CmOneMaxSpec&);

  Family family_ = Family::Dtlz2;
  ProblemSpec spec_;
  std::optional<CmOneMaxSpec> onemax_;
};

/// DTLZ family with `k` distance variables (n = k + 1). k = 0 selects the default
/// (5 for DTLZ1/1a, 20 for DTLZ7, 10 otherwise).
Problem make_dtlz(Family family, std::size_t k = 0);
/// UF family; n = 0 selects the default n = 30.
Problem make_uf(Family family, std::size_t n = 0);
Problem make_problem(const CmOneMaxSpec& spec);

/// map_i = 0 with probability (1 + corr) / 2, else 1.
CmOneMaxSpec make_cm_onemax(std::size_t n, double corr, Rng& rng);

struct ProblemOptions {
  std::string name;            ///< registry key, e.g. "dtlz2", "uf1", "cm-onemax"
  std::optional<std::size_t> n;
  double corr = 1.0;           ///< cm-OneMax only
  std::uint64_t map_seed = 0;  ///< cm-OneMax only
};

/// Registry lookup. Throws InvalidArgument for unknown names.
Problem make_problem(const ProblemOptions& options);
std::vector<std::string> registered_names();

/// Reference points on the true Pareto front. Continuous fronts are sampled
/// with `count` points; cm-OneMax and UF5 return their full discrete front.
std::vector<ObjVec> pareto_front_samples(const Problem& problem, std::size_t count);

/// Nondominated set of cm-OneMax on the grid {0, 1/(res-1), ..., 1}^n, found by
/// enumerating the reachable objective pairs.
std::vector<ObjVec> cm_onemax_grid_front(const CmOneMaxSpec& spec, int resolution = 21);

/// Bi-objective latency wrapper: objective 2 is slow, `tau` fast evaluations fit
/// into the time of one slow evaluation.
struct HeterogeneousProblem {
  std::shared_ptr<const Problem> problem;
  int tau = 5;
  static constexpr int slow_index = 2;

  HeterogeneousProblem(std::shared_ptr<const Problem> p, int tau_ratio);
};

}  // namespace tcsaea::problems
