#pragma once

#include <functional>
#include <optional>
#include <span>
#include <vector>

#include "tcsaea/rng.hpp"
#include "tcsaea/types.hpp"

namespace tcsaea::gp {
class SurrogateModel;
}

namespace tcsaea::evo {

struct Population {
  PointSet individuals;
  /// Empty, or one row per individual.
  std::vector<ObjVec> objectives;

  std::size_t size() const { return individuals.size(); }
  bool has_objectives() const { return !objectives.empty(); }
};

struct VariationConfig {
  double sbx_eta = 20.0;
  double sbx_prob = 1.0;
  double pm_eta = 20.0;
  /// Per-variable mutation probability; negative means 1/n.
  double pm_prob = -1.0;

  void validate() const;
};

/// One sample per stratum per dimension.
PointSet lhs_sample(std::size_t count, const Bounds& bounds, Rng& rng);

/// SBX crossover followed by polynomial mutation; offspring are clipped to
/// `bounds` and there are exactly as many offspring as parents.
PointSet variation(const PointSet& parents, const Bounds& bounds, const VariationConfig& cfg, Rng& rng);

/// Polynomial mutation applied to every variable of `x` (in place), then clipped.
void mutate_all(Point& x, const Bounds& bounds, double eta, Rng& rng);

struct ReferenceVectorSet {
  std::vector<ObjVec> vectors;  ///< unit norm, nonnegative
  std::vector<double> gamma;    ///< smallest angle to any other vector, radians

  std::size_t size() const { return vectors.size(); }
};

/// Simplex-lattice weights (i/h, 1 - i/h), i = 0..h, normalized.
ReferenceVectorSet reference_vectors(int h);

struct ApdChoice {
  std::size_t index;      ///< row of the objective matrix
  std::size_t reference;  ///< reference vector it was assigned to
  double apd;
};

/// Angle between a translated objective vector and a unit reference vector.
double angle_to(const ObjVec& f, const ObjVec& unit_ref);

/// Assignment of every row to its closest reference vector, with its APD.
std::vector<ApdChoice> apd_assign(std::span<const ObjVec> translated, const ReferenceVectorSet& refs,
                                  double progress, double alpha);

/// At most one solution per reference vector: the APD minimizer within each
/// nonempty partition. `translated` must already be shifted by the ideal point.
/// Result is ordered by reference vector.
std::vector<ApdChoice> apd_select(std::span<const ObjVec> translated, const ReferenceVectorSet& refs,
                                  double progress, double alpha = 2.0);

/// Subtracts the elementwise minimum.
std::vector<ObjVec> translate_by_ideal(std::span<const ObjVec> objectives);

struct RveaConfig {
  int w_max = 20;
  std::size_t population = 50;
  int divisions = 9;  ///< h; 10 reference vectors for two objectives
  double alpha = 2.0;
  VariationConfig variation{};
};

/// RVEA on surrogate means: objective 1 from `fast`, objective 2 from `slow`.
/// Consumes no true evaluations. `progress` is the outer budget fraction used
/// in the APD penalty. w_max == 0 returns `init` (with objectives attached).
Population surrogate_rvea(const gp::SurrogateModel& fast, const gp::SurrogateModel& slow,
                          const Population& init, const Bounds& bounds, double progress,
                          const RveaConfig& cfg, Rng& rng);

struct GaConfig {
  std::size_t population = 30;
  std::size_t tournament = 2;
  VariationConfig variation{};
};

struct Evaluated {
  Point x;
  double y;
};

using ScalarObjective = std::function<double(std::span<const double>)>;

/// Generational GA (tournament selection, elitism of one) minimizing `objective`
/// with exactly `budget` evaluations. Returns every evaluated pair in order.
/// If `init` is given it seeds the first generation (truncated or LHS-padded to
/// the population size). Throws InvalidArgument if budget < population size.
std::vector<Evaluated> soea_optimize(const ScalarObjective& objective, const Bounds& bounds,
                                     std::size_t budget, const GaConfig& cfg, Rng& rng,
                                     const PointSet* init = nullptr);

}  // namespace tcsaea::evo
