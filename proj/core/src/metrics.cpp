#include "tcsaea/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tcsaea/errors.hpp"
#include "tcsaea/problems.hpp"

namespace tcsaea::metrics {

double igd(std::span<const ObjVec> p_star, std::span<const ObjVec> p) {
  if (p_star.empty() || p.empty()) throw InvalidArgument("igd: empty point set");
  double total = 0.0;
  for (const ObjVec& v : p_star) {
    double best = std::numeric_limits<double>::infinity();
    for (const ObjVec& q : p) {
      const double d0 = v[0] - q[0];
      const double d1 = v[1] - q[1];
      best = std::min(best, d0 * d0 + d1 * d1);
    }
    total += std::sqrt(best);
  }
  return total / static_cast<double>(p_star.size());
}

double hypervolume_2d(std::span<const ObjVec> p, const ObjVec& ref) {
  std::vector<ObjVec> inside;
  for (const ObjVec& q : p) {
    if (q[0] < ref[0] && q[1] < ref[1]) inside.push_back(q);
  }
  std::sort(inside.begin(), inside.end());
  double area = 0.0;
  double ceiling = ref[1];
  for (const ObjVec& q : inside) {
    if (q[1] < ceiling) {
      area += (ref[0] - q[0]) * (ceiling - q[1]);
      ceiling = q[1];
    }
  }
  return area;
}

std::string marker_symbol(Marker m) {
  switch (m) {
    case Marker::Better: return "+";
    case Marker::Worse: return "−";
    case Marker::Similar: return "≈";
  }
  return "?";
}

MetricReport summarize(std::vector<double> per_run) {
  if (per_run.empty()) throw InvalidArgument("summarize: no runs");
  MetricReport r;
  const double n = static_cast<double>(per_run.size());
  r.mean = std::accumulate(per_run.begin(), per_run.end(), 0.0) / n;
  if (per_run.size() > 1) {
    double ss = 0.0;
    for (double v : per_run) ss += (v - r.mean) * (v - r.mean);
    r.std = std::sqrt(ss / (n - 1.0));
  }
  r.median = median(per_run);
  r.per_run = std::move(per_run);
  return r;
}

double median(std::vector<double> values) {
  if (values.empty()) throw InvalidArgument("median: empty input");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 == 1 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

ReferenceFront reference_front(const problems::Problem& problem, std::size_t count) {
  ReferenceFront out;
  out.points = problems::pareto_front_samples(problem, count);
  if (out.points.empty()) throw InternalConsistency("reference_front: empty front for " + problem.name());
  ObjVec nadir{-std::numeric_limits<double>::infinity(), -std::numeric_limits<double>::infinity()};
  for (const ObjVec& q : out.points) {
    nadir[0] = std::max(nadir[0], q[0]);
    nadir[1] = std::max(nadir[1], q[1]);
  }
  for (int k = 0; k < 2; ++k) {
    out.hv_ref[k] = nadir[k] > 0.0 ? 1.1 * nadir[k] : 1.0;
  }
  return out;
}

}  // namespace tcsaea::metrics
