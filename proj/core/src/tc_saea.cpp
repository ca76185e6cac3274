#include <cmath>
#include <limits>
#include <memory>
#include <optional>

#include "run_state.hpp"
#include "tcsaea/acquisition.hpp"
#include "tcsaea/gp.hpp"
#include "tcsaea/transfer.hpp"

namespace tcsaea::sched {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

gp::FitConfig fit_config(const Bounds& bounds, std::uint64_t seed) {
  gp::FitConfig c;
  c.bounds = bounds;
  c.seed = seed;
  return c;
}

bool in_archive(const Point& x, const std::vector<ArchiveEntry>& archive) {
  for (const auto& e : archive) {
    bool same = true;
    for (std::size_t k = 0; k < x.size() && same; ++k) same = std::abs(e.x[k] - x[k]) <= 1e-12;
    if (same) return true;
  }
  return false;
}

/// Fast-objective evaluations made while the initial slow batch is pending.
void harvest_initial_fast(detail::RunState& st, transfer::TrainingSets& sets, std::size_t budget,
                          const AlgorithmConfig& cfg, Rng& rng) {
  if (budget == 0) return;
  evo::GaConfig ga;
  ga.variation = cfg.variation;
  if (budget >= ga.population) {
    const evo::ScalarObjective f = [&](std::span<const double> x) { return st.evaluate_fast(x); };
    for (auto& e : evo::soea_optimize(f, st.bounds(), budget, ga, rng)) sets.add_fast_only(e.x, e.y);
  } else {
    for (Point& x : evo::lhs_sample(budget, st.bounds(), rng)) sets.add_fast_only(x, st.evaluate_fast(x));
  }
}

/// RVEA start: last iteration's survivors plus the nondominated archive,
/// padded with LHS points to the RVEA population size.
PointSet search_start(const PointSet& survivors, const detail::RunState& st, std::size_t size, Rng& rng) {
  PointSet init = survivors;
  const std::vector<ObjVec> objs = st.archive_objectives();
  const auto& archive = st.record().archive;
  for (std::size_t i : nondominated_indices(objs)) init.push_back(archive[i].x);
  if (init.size() < size) {
    for (Point& x : evo::lhs_sample(size - init.size(), st.bounds(), rng)) init.push_back(std::move(x));
  }
  return init;
}

/// Shared by the TC variants (`extra_fast`) and the waiting baseline.
RunRecord drive(Scheme scheme, const problems::HeterogeneousProblem& hp, const AlgorithmConfig& cfg,
                bool extra_fast) {
  detail::RunState st(scheme, hp, cfg);
  Rng rng(cfg.seed);
  Rng fit_seeds = rng.split();
  const Bounds& bounds = st.bounds();
  const int tau = st.tau();
  const bool transfer_on = extra_fast && cfg.variant != Variant::NT;
  BudgetLedger& ledger = st.ledger();
  RunRecord& rec = st.record();

  transfer::TrainingSets sets;
  for (Point& x : evo::lhs_sample(cfg.n_train, bounds, rng)) {
    const ObjVec f = st.evaluate_both(x);
    sets.add_both(x, f[0], f[1]);
  }
  if (extra_fast) {
    const std::size_t lockstep_cap = ledger.fast_remaining() - static_cast<std::size_t>(tau) * ledger.slow_remaining();
    const std::size_t budget =
        std::min(cfg.init_fast_budget.value_or(cfg.n_train * static_cast<std::size_t>(tau - 1)), lockstep_cap);
    harvest_initial_fast(st, sets, budget, cfg, rng);
  }
  st.record_iteration(0, 0, kNaN, GpSource::DsOnly, extra_fast);

  const evo::ReferenceVectorSet refs = evo::reference_vectors(cfg.rvea_divisions);
  evo::RveaConfig rvea;
  rvea.w_max = cfg.w_max;
  rvea.population = cfg.rvea_population;
  rvea.divisions = cfg.rvea_divisions;
  rvea.variation = cfg.variation;

  PointSet survivors;
  std::optional<gp::GpModel> gp_s_next;
  GpSource next_source = GpSource::DsOnly;

  for (std::size_t k = 1; !ledger.exhausted(); ++k) {
    const double progress = ledger.progress();
    Rng cap_rng = rng.split();
    const std::uint64_t seed = fit_seeds.next();

    const transfer::LabeledSet ds = transfer::cap_training_set(sets.slow, cfg.n_max, cap_rng);
    const transfer::LabeledSet df = transfer::cap_training_set(sets.fast, cfg.n_max, cap_rng);
    const gp::GpModel gp_f = gp::fit(df.x, df.y, fit_config(bounds, seed));
    const gp::GpModel gp_s_pure = gp::fit(ds.x, ds.y, fit_config(bounds, mix_seed(seed + 1)));
    rec.gp_s_training.push_back(GpSource::DsOnly);

    std::unique_ptr<gp::SurrogateModel> co;
    if (transfer_on) {
      const transfer::LabeledSet dc = transfer::cap_training_set(sets.diff, cfg.n_max, cap_rng);
      if (cfg.variant == Variant::TCP) {
        co = std::make_unique<transfer::QuadraticModel>(transfer::QuadraticModel::fit(dc.x, dc.y, bounds));
      } else {
        co = std::make_unique<gp::GpModel>(gp::fit(dc.x, dc.y, fit_config(bounds, mix_seed(seed + 2))));
      }
    }

    const gp::GpModel& gp_s_search = gp_s_next ? *gp_s_next : gp_s_pure;
    const GpSource source = gp_s_next ? next_source : GpSource::DsOnly;

    evo::Population start{search_start(survivors, st, cfg.rvea_population, rng), {}};
    const evo::Population pop = evo::surrogate_rvea(gp_f, gp_s_search, start, bounds, progress, rvea, rng);
    survivors = pop.individuals;

    std::vector<acquisition::Candidate> candidates;
    for (const Point& x : pop.individuals) {
      const gp::Prediction pf = gp_f.predict(x);
      const gp::Prediction ps = gp_s_search.predict(x);
      candidates.push_back({x, {pf.mean, ps.mean}, {pf.stddev(), ps.stddev()}});
    }
    PointSet batch = acquisition::select_infill(candidates, refs, progress, cfg.u, cfg.acquisition).points;
    acquisition::separate_from(batch, st.archive_points(), bounds, rng);
    if (batch.size() > ledger.slow_remaining()) batch.resize(ledger.slow_remaining());
    for (const Point& x : batch) {
      const ObjVec f = st.evaluate_both(x);
      sets.add_both(x, f[0], f[1]);
    }

    double mse = kNaN;
    if (extra_fast) {
      transfer::TransferBatch tb;
      tb.x = acquisition::sample_additional(batch, tau, bounds, rng);
      for (const Point& x : tb.x) {
        tb.y_fast.push_back(st.evaluate_fast(x));
        sets.add_fast_only(x, tb.y_fast.back());
      }
      if (transfer_on && tb.size() > 0) {
        transfer::synthesize_slow_labels(*co, tb);
        if (cfg.diagnostics) {
          std::vector<double> truth;
          for (std::size_t i = 0; i < tb.size(); ++i) truth.push_back(st.peek_slow(tb.x[i]) - tb.y_fast[i]);
          mse = transfer::co_surrogate_mse(*co, tb.x, truth);
        }
        transfer::select_transferable(gp_s_pure, tb);
        transfer::LabeledSet admitted;
        for (std::size_t i = 0; i < tb.size(); ++i) {
          const bool take = cfg.variant == Variant::NS || tb.selected[i];
          if (!take || in_archive(tb.x[i], rec.archive)) continue;
          admitted.append(tb.x[i], tb.y_synth[i]);
          rec.transfers.push_back({tb.x[i], tb.y_synth[i], tb.slow_mean[i], tb.slow_sigma[i], k});
        }
        if (!cfg.accumulate_transfer) sets.transferable = transfer::LabeledSet{};
        sets.transferable.append(admitted);
      }
    }

    gp_s_next.reset();
    if (transfer_on && k % static_cast<std::size_t>(tau) != 0 && !sets.transferable.empty() && !ledger.exhausted()) {
      transfer::LabeledSet augmented = sets.slow;
      augmented.append(sets.transferable);
      augmented = transfer::cap_training_set(augmented, cfg.n_max, cap_rng);
      gp_s_next.emplace(gp::fit(augmented.x, augmented.y, fit_config(bounds, mix_seed(seed + 3))));
      next_source = cfg.variant == Variant::NS ? GpSource::DsPlusDa : GpSource::DsPlusDt;
      rec.gp_s_training.push_back(next_source);
    }
    st.record_iteration(k, sets.transferable.size(), mse, source, extra_fast);
  }
  sets.check_invariants();
  return st.finish();
}

}  // namespace

RunRecord run_tc_saea(const problems::HeterogeneousProblem& problem, const AlgorithmConfig& cfg) {
  Scheme scheme = Scheme::Tc;
  switch (cfg.variant) {
    case Variant::TC: scheme = Scheme::Tc; break;
    case Variant::NT: scheme = Scheme::Nt; break;
    case Variant::NS: scheme = Scheme::Ns; break;
    case Variant::TCP: scheme = Scheme::Tcp; break;
  }
  return drive(scheme, problem, cfg, true);
}

RunRecord run_waiting(const problems::HeterogeneousProblem& problem, const AlgorithmConfig& cfg) {
  return drive(Scheme::Waiting, problem, cfg, false);
}

}  // namespace tcsaea::sched
