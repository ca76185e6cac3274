#include "run_state.hpp"

namespace tcsaea::sched::detail {

RunState::RunState(Scheme scheme, const problems::HeterogeneousProblem& hp, const AlgorithmConfig& cfg)
    : problem_(hp.problem),
      tau_(hp.tau),
      ledger_(cfg.fe_s_max, hp.tau),
      reference_(metrics::reference_front(*hp.problem, cfg.reference_points)),
      start_(std::chrono::steady_clock::now()) {
  cfg.validate();
  record_.scheme = scheme;
  record_.problem = problem_->label();
  record_.config = cfg;
  record_.config.tau = hp.tau;
}

ObjVec RunState::evaluate_both(const Point& x) {
  ledger_.charge_slow();
  ledger_.charge_fast();
  const ObjVec f = problem_->evaluate(x);
  record_.archive.push_back({x, f});
  return f;
}

double RunState::evaluate_fast(std::span<const double> x) {
  ledger_.charge_fast();
  return problem_->evaluate(x)[0];
}

PointSet RunState::archive_points() const {
  PointSet out;
  out.reserve(record_.archive.size());
  for (const auto& e : record_.archive) out.push_back(e.x);
  return out;
}

std::vector<ObjVec> RunState::archive_objectives() const {
  std::vector<ObjVec> out;
  out.reserve(record_.archive.size());
  for (const auto& e : record_.archive) out.push_back(e.f);
  return out;
}

void RunState::record_iteration(std::size_t iteration, std::size_t dt_size, double mse, GpSource source,
                                bool lockstep) {
  IterationRecord it;
  it.iteration = iteration;
  it.fe_s_used = ledger_.fe_s_used();
  it.fe_f_used = ledger_.fe_f_used();
  it.dt_size = dt_size;
  it.cosurrogate_mse = mse;
  it.gp_s_source = source;
  const std::vector<ObjVec> objs = archive_objectives();
  if (!objs.empty()) {
    std::vector<ObjVec> nd;
    for (std::size_t i : nondominated_indices(objs)) nd.push_back(objs[i]);
    it.igd = metrics::igd(reference_.points, nd);
    it.hv = metrics::hypervolume_2d(nd, reference_.hv_ref);
  } else {
    it.igd = std::numeric_limits<double>::quiet_NaN();
  }
  if (lockstep && !ledger_.in_lockstep()) record_.lockstep_held = false;
  record_.trace.push_back(it);
}

RunRecord RunState::finish() {
  const std::vector<ObjVec> objs = archive_objectives();
  record_.front.clear();
  for (std::size_t i : nondominated_indices(objs)) record_.front.push_back(record_.archive[i]);
  record_.fe_s_used = ledger_.fe_s_used();
  record_.fe_f_used = ledger_.fe_f_used();
  record_.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
  return std::move(record_);
}

}  // namespace tcsaea::sched::detail
