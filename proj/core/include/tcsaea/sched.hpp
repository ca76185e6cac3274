#pragma once

#include <cstdint>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "tcsaea/acquisition.hpp"
#include "tcsaea/evo.hpp"
#include "tcsaea/problems.hpp"
#include "tcsaea/types.hpp"

namespace tcsaea::sched {

enum class Variant { TC, NT, NS, TCP };

/// Everything the harness can run: the four TC-SAEA variants plus the four
/// delay-handling baselines.
enum class Scheme { Tc, Nt, Ns, Tcp, Waiting, FastFirst, BroodInterleaving, SpeculativeInterleaving };

Variant parse_variant(const std::string& id);
/// Accepts "tc", "nt", "ns", "tcp", "waiting", "fast-first", "bi", "si".
Scheme parse_scheme(const std::string& id);
std::string scheme_id(Scheme s);
std::vector<std::string> scheme_ids();

struct AlgorithmConfig {
  std::size_t fe_s_max = 200;
  int tau = 5;
  std::size_t u = 3;
  int w_max = 20;
  std::size_t n_train = 100;
  std::size_t n_max = 100;
  Variant variant = Variant::TC;
  std::uint64_t seed = 1;
  acquisition::AcquisitionConfig acquisition{};
  evo::VariationConfig variation{};

  /// Fast evaluations spent by the SOEA during initialization; unset means
  /// n_train * (tau - 1).
  std::optional<std::size_t> init_fast_budget;
  /// Keep D_t across iterations instead of rebuilding it from each batch.
  bool accumulate_transfer = false;
  /// Evaluate f_s on X_a (uncharged) to record the co-surrogate MSE.
  bool diagnostics = false;
  /// Population size of the BI / SI baselines.
  std::size_t baseline_population = 30;
  /// Individuals injected per generation by SI.
  std::size_t speculative_injection = 6;
  std::size_t rvea_population = 50;
  int rvea_divisions = 9;
  std::size_t reference_points = 500;

  void validate() const;
};

/// Exact evaluation accounting. Charging past either budget throws
/// InternalConsistency.
class BudgetLedger {
 public:
  BudgetLedger(std::size_t fe_s_max, int tau);

  void charge_slow(std::size_t n = 1);
  void charge_fast(std::size_t n = 1);

  std::size_t fe_s_used() const { return fe_s_used_; }
  std::size_t fe_f_used() const { return fe_f_used_; }
  std::size_t fe_s_max() const { return fe_s_max_; }
  std::size_t fe_f_max() const { return fe_f_max_; }
  std::size_t slow_remaining() const { return fe_s_max_ - fe_s_used_; }
  std::size_t fast_remaining() const { return fe_f_max_ - fe_f_used_; }
  bool exhausted() const { return fe_s_used_ >= fe_s_max_; }
  double progress() const { return static_cast<double>(fe_s_used_) / static_cast<double>(fe_s_max_); }
  bool in_lockstep() const { return fe_f_used_ == static_cast<std::size_t>(tau_) * fe_s_used_; }

 private:
  std::size_t fe_s_max_, fe_f_max_;
  int tau_;
  std::size_t fe_s_used_ = 0, fe_f_used_ = 0;
};

/// Data a GP_s was trained on.
enum class GpSource { DsOnly, DsPlusDt, DsPlusDa };
std::string gp_source_id(GpSource s);

struct IterationRecord {
  std::size_t iteration = 0;  ///< 0 is the state after initialization
  std::size_t fe_s_used = 0;
  std::size_t fe_f_used = 0;
  double igd = 0.0;
  double hv = 0.0;
  std::size_t dt_size = 0;
  double cosurrogate_mse = std::numeric_limits<double>::quiet_NaN();
  GpSource gp_s_source = GpSource::DsOnly;  ///< model that guided this iteration's search
};

struct ArchiveEntry {
  Point x;
  ObjVec f;  ///< (fast, slow)
};

/// One admitted D_t row and the interval it was tested against.
struct TransferRecord {
  Point x;
  double y_synth = 0.0;
  double mean = 0.0;
  double sigma = 0.0;
  std::size_t iteration = 0;
};

struct RunRecord {
  Scheme scheme = Scheme::Tc;
  std::string problem;
  AlgorithmConfig config;
  std::vector<IterationRecord> trace;
  std::vector<ArchiveEntry> archive;  ///< every slow-evaluated point, in evaluation order
  std::vector<ArchiveEntry> front;    ///< nondominated subset of the archive
  std::vector<TransferRecord> transfers;
  std::vector<GpSource> gp_s_training;  ///< every GP_s fit, in order
  bool lockstep_held = true;            ///< fe_f == tau * fe_s at every boundary
  std::size_t fe_s_used = 0;
  std::size_t fe_f_used = 0;
  double wall_seconds = 0.0;

  std::size_t iterations() const { return trace.empty() ? 0 : trace.size() - 1; }
};

/// The TC-SAEA loop, with `cfg.variant` selecting TC, NT, NS or TCP.
RunRecord run_tc_saea(const problems::HeterogeneousProblem& problem, const AlgorithmConfig& cfg);

/// Surrogate-assisted loop that waits for every slow evaluation; fe_f == fe_s.
RunRecord run_waiting(const problems::HeterogeneousProblem& problem, const AlgorithmConfig& cfg);

/// GA on the fast objective with the whole fast budget, then the slow objective
/// on the fe_s_max best distinct solutions.
RunRecord run_fast_first(const problems::HeterogeneousProblem& problem, const AlgorithmConfig& cfg);

/// True-evaluation MOEA; brood offspring evaluated on f_f fill the idle time.
RunRecord run_brood_interleaving(const problems::HeterogeneousProblem& problem, const AlgorithmConfig& cfg);

/// True-evaluation MOEA; a fast-objective GA fills the idle time and injects
/// its best individuals.
RunRecord run_speculative_interleaving(const problems::HeterogeneousProblem& problem,
                                       const AlgorithmConfig& cfg);

/// Dispatch by scheme; the TC-family schemes override cfg.variant.
RunRecord run_scheme(Scheme scheme, const problems::HeterogeneousProblem& problem, AlgorithmConfig cfg);

}  // namespace tcsaea::sched
