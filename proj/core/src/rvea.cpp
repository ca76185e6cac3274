#include "tcsaea/evo.hpp"
#include "tcsaea/gp.hpp"

namespace tcsaea::evo {
namespace {

std::vector<ObjVec> predict_means(const gp::SurrogateModel& fast, const gp::SurrogateModel& slow,
                                  const PointSet& xs) {
  std::vector<ObjVec> out;
  out.reserve(xs.size());
  for (const Point& x : xs) out.push_back({fast.predict_mean(x), slow.predict_mean(x)});
  return out;
}

}  // namespace

Population surrogate_rvea(const gp::SurrogateModel& fast, const gp::SurrogateModel& slow,
                          const Population& init, const Bounds& bounds, double progress,
                          const RveaConfig& cfg, Rng& rng) {
  Population pop{init.individuals, predict_means(fast, slow, init.individuals)};
  if (cfg.w_max <= 0 || pop.individuals.empty()) return pop;

  const ReferenceVectorSet refs = reference_vectors(cfg.divisions);
  for (int w = 0; w < cfg.w_max; ++w) {
    PointSet parents;
    parents.reserve(cfg.population);
    for (std::size_t i = 0; i < cfg.population; ++i) parents.push_back(pop.individuals[rng.index(pop.size())]);
    PointSet offspring = variation(parents, bounds, cfg.variation, rng);
    std::vector<ObjVec> off_obj = predict_means(fast, slow, offspring);

    Population merged = std::move(pop);
    for (std::size_t i = 0; i < offspring.size(); ++i) {
      merged.individuals.push_back(std::move(offspring[i]));
      merged.objectives.push_back(off_obj[i]);
    }
    const std::vector<ObjVec> translated = translate_by_ideal(merged.objectives);
    pop = Population{};
    for (const ApdChoice& c : apd_select(translated, refs, progress, cfg.alpha)) {
      pop.individuals.push_back(std::move(merged.individuals[c.index]));
      pop.objectives.push_back(merged.objectives[c.index]);
    }
  }
  return pop;
}

}  // namespace tcsaea::evo
