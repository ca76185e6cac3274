#pragma once

#include <string>
#include <vector>

#include "tcsaea/evo.hpp"
#include "tcsaea/rng.hpp"
#include "tcsaea/types.hpp"

namespace tcsaea::acquisition {

enum class BetaSchedule { Linear, Constant };

/// Lower-confidence-bound trade-off. The exploration weight decays from
/// beta_max to beta_min as the slow-evaluation budget is consumed.
struct AcquisitionConfig {
  double beta_max = 3.0;
  double beta_min = 0.5;
  BetaSchedule schedule = BetaSchedule::Linear;

  void validate() const;
  double beta(double progress) const;
};

BetaSchedule parse_schedule(const std::string& name);

/// mean - beta(progress) * std; lower is better.
double aaf_score(double mean, double stddev, double progress, const AcquisitionConfig& cfg);

struct Candidate {
  Point x;
  ObjVec mean;
  ObjVec stddev;
};

struct InfillSelection {
  PointSet points;
  std::vector<std::size_t> indices;  ///< into the candidate list
  bool truncated = false;            ///< u exceeded the number of candidates
};

/// Scores both objectives with aaf_score, runs APD selection on the scored
/// matrix and returns the u distinct candidates with the smallest APD.
InfillSelection select_infill(const std::vector<Candidate>& candidates, const evo::ReferenceVectorSet& refs,
                              double progress, std::size_t u, const AcquisitionConfig& cfg,
                              double apd_alpha = 2.0);

/// (tau - 1) LHS points per center, drawn from the box center +/- radius*range
/// and clipped to `bounds`. Output is grouped by center.
PointSet sample_additional(const PointSet& centers, int tau, const Bounds& bounds, Rng& rng,
                           double radius = 0.05);

/// Perturbs any point lying within `tol` (max-norm) of an archive member or of
/// an earlier point in the batch by a full polynomial-mutation step.
/// Returns the number of perturbed points.
std::size_t separate_from(PointSet& batch, const PointSet& archive, const Bounds& bounds, Rng& rng,
                          double eta = 20.0, double tol = 1e-12);

}  // namespace tcsaea::acquisition
