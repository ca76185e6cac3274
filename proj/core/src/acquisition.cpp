#include "tcsaea/acquisition.hpp"

#include <algorithm>
#include <cmath>

#include "tcsaea/errors.hpp"

namespace tcsaea::acquisition {
namespace {

bool near(const Point& a, const Point& b, double tol) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::abs(a[k] - b[k]) > tol) return false;
  }
  return true;
}

}  // namespace

void AcquisitionConfig::validate() const {
  if (!(beta_min >= 0.0) || !(beta_max >= beta_min)) {
    throw InvalidArgument("acquisition: require beta_max >= beta_min >= 0");
  }
}

double AcquisitionConfig::beta(double progress) const {
  if (schedule == BetaSchedule::Constant) return beta_max;
  const double t = std::clamp(progress, 0.0, 1.0);
  return beta_max * (1.0 - t) + beta_min * t;
}

BetaSchedule parse_schedule(const std::string& name) {
  if (name == "linear") return BetaSchedule::Linear;
  if (name == "constant") return BetaSchedule::Constant;
  throw InvalidArgument("unknown acquisition schedule '" + name + "'");
}

double aaf_score(double mean, double stddev, double progress, const AcquisitionConfig& cfg) {
  return mean - cfg.beta(progress) * stddev;
}

InfillSelection select_infill(const std::vector<Candidate>& candidates, const evo::ReferenceVectorSet& refs,
                              double progress, std::size_t u, const AcquisitionConfig& cfg,
                              double apd_alpha) {
  if (candidates.empty()) throw InvalidArgument("select_infill: no candidates");
  if (u == 0) throw InvalidArgument("select_infill: u must be >= 1");

  InfillSelection out;
  if (u >= candidates.size()) {
    out.truncated = u > candidates.size();
    for (std::size_t i = 0; i < candidates.size(); ++i) {
      out.indices.push_back(i);
      out.points.push_back(candidates[i].x);
    }
    return out;
  }

  std::vector<ObjVec> scored;
  scored.reserve(candidates.size());
  for (const Candidate& c : candidates) {
    scored.push_back({aaf_score(c.mean[0], c.stddev[0], progress, cfg),
                      aaf_score(c.mean[1], c.stddev[1], progress, cfg)});
  }
  const std::vector<ObjVec> translated = evo::translate_by_ideal(scored);

  std::vector<evo::ApdChoice> picked = evo::apd_select(translated, refs, progress, apd_alpha);
  auto by_apd = [](const evo::ApdChoice& a, const evo::ApdChoice& b) {
    return a.apd < b.apd || (a.apd == b.apd && a.index < b.index);
  };
  std::sort(picked.begin(), picked.end(), by_apd);

  // Fill order: partition winners by APD, then everyone else by APD.
  std::vector<evo::ApdChoice> rest = evo::apd_assign(translated, refs, progress, apd_alpha);
  std::sort(rest.begin(), rest.end(), by_apd);
  std::vector<evo::ApdChoice> order = picked;
  for (const auto& c : rest) {
    const bool taken = std::any_of(picked.begin(), picked.end(),
                                   [&](const evo::ApdChoice& p) { return p.index == c.index; });
    if (!taken) order.push_back(c);
  }

  for (const auto& c : order) {
    if (out.points.size() == u) break;
    const Point& x = candidates[c.index].x;
    const bool dup = std::any_of(out.points.begin(), out.points.end(),
                                 [&](const Point& p) { return near(p, x, 1e-12); });
    if (dup) continue;
    out.indices.push_back(c.index);
    out.points.push_back(x);
  }
  return out;
}

PointSet sample_additional(const PointSet& centers, int tau, const Bounds& bounds, Rng& rng, double radius) {
  if (tau < 2) throw InvalidArgument("sample_additional: tau must be >= 2");
  const auto per_center = static_cast<std::size_t>(tau - 1);
  PointSet out;
  out.reserve(centers.size() * per_center);
  for (const Point& c : centers) {
    std::vector<double> lo(c.size()), hi(c.size());
    for (std::size_t k = 0; k < c.size(); ++k) {
      lo[k] = c[k] - radius * bounds.range(k);
      hi[k] = c[k] + radius * bounds.range(k);
    }
    for (Point& p : evo::lhs_sample(per_center, Bounds(std::move(lo), std::move(hi)), rng)) {
      bounds.clip(p);
      out.push_back(std::move(p));
    }
  }
  return out;
}

std::size_t separate_from(PointSet& batch, const PointSet& archive, const Bounds& bounds, Rng& rng, double eta,
                          double tol) {
  std::size_t perturbed = 0;
  for (std::size_t i = 0; i < batch.size(); ++i) {
    auto clashes = [&]() {
      for (const Point& a : archive) {
        if (near(a, batch[i], tol)) return true;
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (near(batch[j], batch[i], tol)) return true;
      }
      return false;
    };
    bool moved = false;
    for (int attempt = 0; attempt < 100 && clashes(); ++attempt) {
      evo::mutate_all(batch[i], bounds, eta, rng);
      moved = true;
    }
    if (moved) ++perturbed;
  }
  return perturbed;
}

}  // namespace tcsaea::acquisition
