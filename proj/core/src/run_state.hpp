#pragma once

// Bookkeeping shared by the TC-SAEA driver and the baselines.

#include <chrono>

#include "tcsaea/metrics.hpp"
#include "tcsaea/sched.hpp"

namespace tcsaea::sched::detail {

class RunState {
 public:
  RunState(Scheme scheme, const problems::HeterogeneousProblem& hp, const AlgorithmConfig& cfg);

  const problems::Problem& problem() const { return *problem_; }
  const Bounds& bounds() const { return problem_->bounds(); }
  int tau() const { return tau_; }
  BudgetLedger& ledger() { return ledger_; }
  RunRecord& record() { return record_; }
  const RunRecord& record() const { return record_; }

  /// Both objectives; charges one slow and one fast evaluation and archives.
  ObjVec evaluate_both(const Point& x);
  /// Fast objective only; charges one fast evaluation.
  double evaluate_fast(std::span<const double> x);
  /// Uncharged slow value, for diagnostics only.
  double peek_slow(const Point& x) const { return problem_->evaluate(x)[1]; }

  /// Appends a trace entry; `lockstep` says whether the scheme promises
  /// fe_f == tau * fe_s at this boundary.
  void record_iteration(std::size_t iteration, std::size_t dt_size, double mse, GpSource source,
                        bool lockstep);
  PointSet archive_points() const;
  std::vector<ObjVec> archive_objectives() const;
  RunRecord finish();

 private:
  std::shared_ptr<const problems::Problem> problem_;
  int tau_;
  BudgetLedger ledger_;
  metrics::ReferenceFront reference_;
  RunRecord record_;
  std::chrono::steady_clock::time_point start_;
};

}  // namespace tcsaea::sched::detail
