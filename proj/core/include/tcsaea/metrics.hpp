#pragma once

#include <span>
#include <string>
#include <vector>

#include "tcsaea/types.hpp"

namespace tcsaea::problems {
class Problem;
}

namespace tcsaea::metrics {

/// Mean over v in p_star of the Euclidean distance from v to its nearest
/// member of p. Throws InvalidArgument if either set is empty.
double igd(std::span<const ObjVec> p_star, std::span<const ObjVec> p);

/// Area dominated by `p` and bounded by `ref` (minimization). Points that do
/// not strictly dominate `ref` are ignored.
double hypervolume_2d(std::span<const ObjVec> p, const ObjVec& ref);

/// '+' : the first sample is significantly better (smaller), '-' : significantly
/// worse, '~' : no significant difference.
enum class Marker { Better, Worse, Similar };

/// "+", "−" or "≈".
std::string marker_symbol(Marker m);

struct RankSumResult {
  double p_value = 1.0;
  Marker marker = Marker::Similar;
  double rank_sum = 0.0;  ///< midrank sum of the first sample
  bool exact = false;
};

/// Two-sided Wilcoxon rank-sum test with midranks. Exact when both samples
/// have at most `exact_limit` members, normal approximation with continuity
/// and tie correction otherwise. Requires |a|, |b| >= 3.
RankSumResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b, double alpha = 0.05,
                                std::size_t exact_limit = 10);

struct MetricReport {
  double mean = 0.0;
  double std = 0.0;  ///< sample standard deviation; 0 for a single run
  double median = 0.0;
  std::vector<double> per_run;
};

MetricReport summarize(std::vector<double> per_run);
double median(std::vector<double> values);

/// Sampled true front and the hypervolume reference point derived from it.
struct ReferenceFront {
  std::vector<ObjVec> points;
  ObjVec hv_ref{};
};

/// hv_ref is 1.1 times the front's nadir; nonpositive components become 1.
ReferenceFront reference_front(const problems::Problem& problem, std::size_t count = 500);

}  // namespace tcsaea::metrics
