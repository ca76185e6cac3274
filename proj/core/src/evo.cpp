#include "tcsaea/evo.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "tcsaea/errors.hpp"

namespace tcsaea::evo {
namespace {

double mutation_delta(double u, double eta) {
  const double e = 1.0 / (eta + 1.0);
  return u < 0.5 ? std::pow(2.0 * u, e) - 1.0 : 1.0 - std::pow(2.0 * (1.0 - u), e);
}

void sbx_pair(Point& a, Point& b, double eta, Rng& rng) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (!rng.bernoulli(0.5)) continue;
    if (std::abs(a[k] - b[k]) <= 1e-14) continue;
    const double u = rng.uniform();
    const double beta = u <= 0.5 ? std::pow(2.0 * u, 1.0 / (eta + 1.0))
                                 : std::pow(1.0 / (2.0 * (1.0 - u)), 1.0 / (eta + 1.0));
    const double x1 = a[k], x2 = b[k];
    a[k] = 0.5 * ((1.0 + beta) * x1 + (1.0 - beta) * x2);
    b[k] = 0.5 * ((1.0 - beta) * x1 + (1.0 + beta) * x2);
  }
}

void polynomial_mutation(Point& x, const Bounds& bounds, double eta, double prob, Rng& rng) {
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!rng.bernoulli(prob)) continue;
    x[k] += mutation_delta(rng.uniform(), eta) * bounds.range(k);
  }
}

}  // namespace

void VariationConfig::validate() const {
  if (!(sbx_eta > 0.0) || !(pm_eta > 0.0)) throw InvalidArgument("variation: eta must be > 0");
  if (!(sbx_prob >= 0.0 && sbx_prob <= 1.0)) throw InvalidArgument("variation: sbx_prob not in [0,1]");
  if (pm_prob > 1.0) throw InvalidArgument("variation: pm_prob > 1");
}

PointSet lhs_sample(std::size_t count, const Bounds& bounds, Rng& rng) {
  if (count == 0) throw InvalidArgument("lhs_sample: count must be >= 1");
  const std::size_t dim = bounds.dim();
  PointSet out(count, Point(dim));
  const double width = 1.0 / static_cast<double>(count);
  for (std::size_t k = 0; k < dim; ++k) {
    const std::vector<std::size_t> strata = rng.permutation(count);
    for (std::size_t i = 0; i < count; ++i) {
      // Stay strictly inside the stratum so that floating rounding cannot push
      // a sample over its upper edge.
      double t = (static_cast<double>(strata[i]) + rng.uniform()) * width;
      t = std::min(t, std::nextafter((static_cast<double>(strata[i]) + 1.0) * width, 0.0));
      out[i][k] = bounds.lower[k] + t * bounds.range(k);
    }
  }
  return out;
}

PointSet variation(const PointSet& parents, const Bounds& bounds, const VariationConfig& cfg, Rng& rng) {
  if (parents.empty()) throw InvalidArgument("variation: no parents");
  cfg.validate();
  const double pm_prob = cfg.pm_prob < 0.0 ? 1.0 / static_cast<double>(bounds.dim()) : cfg.pm_prob;
  PointSet out;
  out.reserve(parents.size());
  for (std::size_t i = 0; i < parents.size(); i += 2) {
    Point a = parents[i];
    Point b = i + 1 < parents.size() ? parents[i + 1] : parents[rng.index(parents.size())];
    if (rng.bernoulli(cfg.sbx_prob)) sbx_pair(a, b, cfg.sbx_eta, rng);
    polynomial_mutation(a, bounds, cfg.pm_eta, pm_prob, rng);
    bounds.clip(a);
    out.push_back(std::move(a));
    if (out.size() < parents.size()) {
      polynomial_mutation(b, bounds, cfg.pm_eta, pm_prob, rng);
      bounds.clip(b);
      out.push_back(std::move(b));
    }
  }
  return out;
}

void mutate_all(Point& x, const Bounds& bounds, double eta, Rng& rng) {
  polynomial_mutation(x, bounds, eta, 1.0, rng);
  bounds.clip(x);
}

ReferenceVectorSet reference_vectors(int h) {
  if (h < 1) throw InvalidArgument("reference_vectors: h must be >= 1");
  ReferenceVectorSet set;
  for (int i = 0; i <= h; ++i) {
    const double w1 = static_cast<double>(i) / h;
    const double w2 = 1.0 - w1;
    const double norm = std::hypot(w1, w2);
    set.vectors.push_back({w1 / norm, w2 / norm});
  }
  // Lattice runs from (0,1) to (1,0); present it from the f1 axis.
  std::reverse(set.vectors.begin(), set.vectors.end());
  set.gamma.assign(set.vectors.size(), std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < set.vectors.size(); ++i) {
    for (std::size_t j = 0; j < set.vectors.size(); ++j) {
      if (i != j) set.gamma[i] = std::min(set.gamma[i], angle_to(set.vectors[i], set.vectors[j]));
    }
  }
  return set;
}

double angle_to(const ObjVec& f, const ObjVec& unit_ref) {
  // atan2 keeps full precision near zero angle, where acos does not.
  const double cross = f[0] * unit_ref[1] - f[1] * unit_ref[0];
  const double dot = f[0] * unit_ref[0] + f[1] * unit_ref[1];
  if (cross == 0.0 && dot == 0.0) return 0.0;
  return std::atan2(std::abs(cross), dot);
}

std::vector<ObjVec> translate_by_ideal(std::span<const ObjVec> objectives) {
  if (objectives.empty()) return {};
  ObjVec ideal = objectives.front();
  for (const auto& f : objectives) {
    ideal[0] = std::min(ideal[0], f[0]);
    ideal[1] = std::min(ideal[1], f[1]);
  }
  std::vector<ObjVec> out;
  out.reserve(objectives.size());
  for (const auto& f : objectives) out.push_back({f[0] - ideal[0], f[1] - ideal[1]});
  return out;
}

std::vector<ApdChoice> apd_assign(std::span<const ObjVec> translated, const ReferenceVectorSet& refs,
                                  double progress, double alpha) {
  constexpr double kObjectives = 2.0;
  const double penalty_scale = kObjectives * std::pow(std::clamp(progress, 0.0, 1.0), alpha);
  std::vector<ApdChoice> out;
  out.reserve(translated.size());
  for (std::size_t i = 0; i < translated.size(); ++i) {
    std::size_t best = 0;
    double best_angle = std::numeric_limits<double>::infinity();
    for (std::size_t v = 0; v < refs.size(); ++v) {
      const double a = angle_to(translated[i], refs.vectors[v]);
      if (a < best_angle) {
        best_angle = a;
        best = v;
      }
    }
    const double gamma = std::isfinite(refs.gamma[best]) ? refs.gamma[best] : 1.0;
    const double norm = std::hypot(translated[i][0], translated[i][1]);
    out.push_back({i, best, (1.0 + penalty_scale * best_angle / gamma) * norm});
  }
  return out;
}

std::vector<ApdChoice> apd_select(std::span<const ObjVec> translated, const ReferenceVectorSet& refs,
                                  double progress, double alpha) {
  const std::vector<ApdChoice> assigned = apd_assign(translated, refs, progress, alpha);
  std::vector<std::optional<ApdChoice>> best(refs.size());
  for (const ApdChoice& c : assigned) {
    auto& slot = best[c.reference];
    if (!slot || c.apd < slot->apd) slot = c;
  }
  std::vector<ApdChoice> out;
  for (const auto& slot : best) {
    if (slot) out.push_back(*slot);
  }
  return out;
}

std::vector<Evaluated> soea_optimize(const ScalarObjective& objective, const Bounds& bounds,
                                     std::size_t budget, const GaConfig& cfg, Rng& rng, const PointSet* init) {
  const std::size_t pop_size = cfg.population;
  if (pop_size < 2) throw InvalidArgument("soea_optimize: population must be >= 2");
  if (budget < pop_size) throw InvalidArgument("soea_optimize: budget smaller than population size");
  if (cfg.tournament < 1) throw InvalidArgument("soea_optimize: tournament size must be >= 1");

  std::vector<Evaluated> history;
  history.reserve(budget);

  PointSet start;
  if (init != nullptr) {
    start.assign(init->begin(), init->begin() + static_cast<std::ptrdiff_t>(std::min(init->size(), pop_size)));
  }
  if (start.size() < pop_size) {
    for (Point& p : lhs_sample(pop_size - start.size(), bounds, rng)) start.push_back(std::move(p));
  }

  std::vector<Evaluated> pop;
  for (Point& x : start) {
    const double y = objective(x);
    history.push_back({x, y});
    pop.push_back({std::move(x), y});
  }

  auto tournament = [&]() -> const Point& {
    std::size_t best = rng.index(pop.size());
    for (std::size_t t = 1; t < cfg.tournament; ++t) {
      const std::size_t c = rng.index(pop.size());
      if (pop[c].y < pop[best].y) best = c;
    }
    return pop[best].x;
  };

  while (history.size() < budget) {
    PointSet parents;
    parents.reserve(pop_size);
    for (std::size_t i = 0; i < pop_size; ++i) parents.push_back(tournament());
    PointSet children = variation(parents, bounds, cfg.variation, rng);
    const std::size_t take = std::min(children.size(), budget - history.size());

    const auto elite = std::min_element(pop.begin(), pop.end(),
                                        [](const Evaluated& a, const Evaluated& b) { return a.y < b.y; });
    Evaluated best_prev = *elite;

    std::vector<Evaluated> next;
    next.reserve(pop_size);
    for (std::size_t i = 0; i < take; ++i) {
      const double y = objective(children[i]);
      history.push_back({children[i], y});
      next.push_back({std::move(children[i]), y});
    }
    // Unevaluated slots (final partial generation) keep previous members.
    for (std::size_t i = take; i < pop_size && i < pop.size(); ++i) next.push_back(pop[i]);

    auto worst = std::max_element(next.begin(), next.end(),
                                  [](const Evaluated& a, const Evaluated& b) { return a.y < b.y; });
    const bool elite_kept = std::any_of(next.begin(), next.end(),
                                        [&](const Evaluated& e) { return e.y <= best_prev.y; });
    if (!elite_kept) *worst = std::move(best_prev);
    pop = std::move(next);
  }
  return history;
}

}  // namespace tcsaea::evo
