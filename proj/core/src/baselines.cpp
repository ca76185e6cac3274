#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "run_state.hpp"
#include "tcsaea/evo.hpp"

namespace tcsaea::sched {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

bool close(const Point& a, const Point& b, double tol) {
  for (std::size_t k = 0; k < a.size(); ++k) {
    if (std::abs(a[k] - b[k]) > tol) return false;
  }
  return true;
}

/// Environmental selection on true objective values.
evo::Population rvea_survivors(evo::Population merged, const evo::ReferenceVectorSet& refs, double progress) {
  const std::vector<ObjVec> translated = evo::translate_by_ideal(merged.objectives);
  evo::Population next;
  for (const evo::ApdChoice& c : evo::apd_select(translated, refs, progress)) {
    next.individuals.push_back(std::move(merged.individuals[c.index]));
    next.objectives.push_back(merged.objectives[c.index]);
  }
  return next;
}

PointSet pick(const PointSet& pool, std::size_t count, Rng& rng) {
  PointSet out;
  out.reserve(count);
  for (std::size_t i = 0; i < count; ++i) out.push_back(pool[rng.index(pool.size())]);
  return out;
}

/// Lowest-f values, at most `count`, distinct at 1e-12.
PointSet best_by_fast(const std::vector<evo::Evaluated>& evals, std::size_t count) {
  std::vector<std::size_t> order(evals.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return evals[a].y < evals[b].y; });
  PointSet out;
  for (std::size_t i : order) {
    if (out.size() == count) break;
    const bool dup = std::any_of(out.begin(), out.end(), [&](const Point& p) { return close(p, evals[i].x, 1e-12); });
    if (!dup) out.push_back(evals[i].x);
  }
  return out;
}

enum class Interleave { Brood, Speculative };

/// Generational MOEA on true values whose idle fast capacity is spent either on
/// brood offspring or on a speculative fast-objective GA.
RunRecord interleaved(Scheme scheme, Interleave mode, const problems::HeterogeneousProblem& hp,
                      const AlgorithmConfig& cfg) {
  detail::RunState st(scheme, hp, cfg);
  Rng rng(cfg.seed);
  const Bounds& bounds = st.bounds();
  BudgetLedger& ledger = st.ledger();
  const std::size_t popsize = cfg.baseline_population;
  const auto surplus_per_slow = static_cast<std::size_t>(st.tau() - 1);
  const evo::ReferenceVectorSet refs = evo::reference_vectors(static_cast<int>(popsize) - 1);
  evo::GaConfig ga;
  ga.variation = cfg.variation;
  ga.population = std::min(ga.population, popsize);

  // Fast work done while `pending` slow evaluations run; returns extra mating
  // material (brood) or injected individuals (speculative).
  auto fill_idle = [&](std::size_t pending, const PointSet& pool) -> PointSet {
    const std::size_t budget = pending * surplus_per_slow;
    if (budget == 0) return {};
    std::vector<evo::Evaluated> evals;
    if (mode == Interleave::Brood || budget < ga.population) {
      PointSet brood = evo::variation(pick(pool, budget, rng), bounds, cfg.variation, rng);
      for (Point& x : brood) {
        const double y = st.evaluate_fast(x);
        evals.push_back({std::move(x), y});
      }
    } else {
      const evo::ScalarObjective f = [&](std::span<const double> x) { return st.evaluate_fast(x); };
      evals = evo::soea_optimize(f, bounds, budget, ga, rng, &pool);
    }
    const std::size_t keep = mode == Interleave::Brood ? popsize : cfg.speculative_injection;
    return best_by_fast(evals, keep);
  };

  evo::Population pop;
  const PointSet init = evo::lhs_sample(cfg.n_train, bounds, rng);
  PointSet extra = fill_idle(init.size(), init);
  for (const Point& x : init) {
    pop.individuals.push_back(x);
    pop.objectives.push_back(st.evaluate_both(x));
  }
  pop = rvea_survivors(std::move(pop), refs, ledger.progress());
  st.record_iteration(0, 0, kNaN, GpSource::DsOnly, true);

  for (std::size_t gen = 1; !ledger.exhausted(); ++gen) {
    PointSet mating = pop.individuals;
    if (mode == Interleave::Brood) mating.insert(mating.end(), extra.begin(), extra.end());
    PointSet offspring = evo::variation(pick(mating, popsize, rng), bounds, cfg.variation, rng);
    if (mode == Interleave::Speculative) {
      for (std::size_t i = 0; i < extra.size() && i < offspring.size(); ++i) {
        offspring[offspring.size() - 1 - i] = extra[i];
      }
    }
    if (offspring.size() > ledger.slow_remaining()) offspring.resize(ledger.slow_remaining());

    extra = fill_idle(offspring.size(), mode == Interleave::Brood ? mating : pop.individuals);
    evo::Population merged = pop;
    for (const Point& x : offspring) {
      merged.individuals.push_back(x);
      merged.objectives.push_back(st.evaluate_both(x));
    }
    pop = rvea_survivors(std::move(merged), refs, ledger.progress());
    st.record_iteration(gen, 0, kNaN, GpSource::DsOnly, true);
  }
  return st.finish();
}

}  // namespace

RunRecord run_fast_first(const problems::HeterogeneousProblem& hp, const AlgorithmConfig& cfg) {
  detail::RunState st(Scheme::FastFirst, hp, cfg);
  Rng rng(cfg.seed);
  BudgetLedger& ledger = st.ledger();

  // Phase 1. The phase-2 points keep their fast values, so no fast budget is
  // held back for them.
  const std::size_t budget = ledger.fe_f_max();
  evo::GaConfig ga;
  ga.variation = cfg.variation;
  const evo::ScalarObjective f = [&](std::span<const double> x) { return st.evaluate_fast(x); };
  const std::vector<evo::Evaluated> evals = evo::soea_optimize(f, st.bounds(), budget, ga, rng);

  std::vector<std::size_t> order(evals.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return evals[a].y < evals[b].y; });
  PointSet chosen;
  for (std::size_t i : order) {
    if (chosen.size() == cfg.fe_s_max) break;
    const bool dup = std::any_of(chosen.begin(), chosen.end(), [&](const Point& p) { return close(p, evals[i].x, 1e-9); });
    if (!dup) chosen.push_back(evals[i].x);
  }

  // Phase 2: slow evaluations only. The trace follows the same batch
  // boundaries as the surrogate schemes (n_train, then u at a time).
  std::size_t next_boundary = std::min(cfg.n_train, chosen.size());
  std::size_t iteration = 0;
  for (std::size_t i = 0; i < chosen.size(); ++i) {
    ledger.charge_slow();
    const ObjVec y = hp.problem->evaluate(chosen[i]);
    st.record().archive.push_back({chosen[i], y});
    if (i + 1 == next_boundary || i + 1 == chosen.size()) {
      st.record_iteration(iteration++, 0, kNaN, GpSource::DsOnly, false);
      next_boundary = std::min(next_boundary + cfg.u, chosen.size());
    }
  }
  return st.finish();
}

RunRecord run_brood_interleaving(const problems::HeterogeneousProblem& problem, const AlgorithmConfig& cfg) {
  return interleaved(Scheme::BroodInterleaving, Interleave::Brood, problem, cfg);
}

RunRecord run_speculative_interleaving(const problems::HeterogeneousProblem& problem, const AlgorithmConfig& cfg) {
  return interleaved(Scheme::SpeculativeInterleaving, Interleave::Speculative, problem, cfg);
}

}  // namespace tcsaea::sched
