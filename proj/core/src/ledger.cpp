#include <map>

#include "tcsaea/errors.hpp"
#include "tcsaea/sched.hpp"

namespace tcsaea::sched {
namespace {

const std::map<std::string, Scheme>& scheme_table() {
  static const std::map<std::string, Scheme> table{
      {"tc", Scheme::Tc},           {"nt", Scheme::Nt},
      {"ns", Scheme::Ns},           {"tcp", Scheme::Tcp},
      {"waiting", Scheme::Waiting}, {"fast-first", Scheme::FastFirst},
      {"bi", Scheme::BroodInterleaving}, {"si", Scheme::SpeculativeInterleaving},
  };
  return table;
}

}  // namespace

Variant parse_variant(const std::string& id) {
  if (id == "tc") return Variant::TC;
  if (id == "nt") return Variant::NT;
  if (id == "ns") return Variant::NS;
  if (id == "tcp") return Variant::TCP;
  throw InvalidArgument("unknown variant '" + id + "'");
}

Scheme parse_scheme(const std::string& id) {
  const auto it = scheme_table().find(id);
  if (it == scheme_table().end()) throw InvalidArgument("unknown scheme '" + id + "'");
  return it->second;
}

std::string scheme_id(Scheme s) {
  for (const auto& [id, scheme] : scheme_table()) {
    if (scheme == s) return id;
  }
  throw InternalConsistency("scheme without identifier");
}

std::vector<std::string> scheme_ids() {
  return {"tc", "nt", "ns", "tcp", "waiting", "fast-first", "bi", "si"};
}

std::string gp_source_id(GpSource s) {
  switch (s) {
    case GpSource::DsOnly: return "ds";
    case GpSource::DsPlusDt: return "ds+dt";
    case GpSource::DsPlusDa: return "ds+da";
  }
  return "?";
}

void AlgorithmConfig::validate() const {
  if (fe_s_max <= n_train) throw InvalidArgument("config: fe_s_max must exceed n_train");
  if (n_train < 2) throw InvalidArgument("config: n_train must be >= 2");
  if (u < 1) throw InvalidArgument("config: u must be >= 1");
  if (tau < 2) throw InvalidArgument("config: tau must be >= 2");
  if (w_max < 1) throw InvalidArgument("config: w_max must be >= 1");
  if (n_max < 2 || n_max % 2 != 0) throw InvalidArgument("config: n_max must be even and >= 2");
  if (baseline_population < 2) throw InvalidArgument("config: baseline population must be >= 2");
  if (rvea_population < 2 || rvea_divisions < 1) throw InvalidArgument("config: invalid RVEA settings");
  if (reference_points < 2) throw InvalidArgument("config: reference_points must be >= 2");
  acquisition.validate();
  variation.validate();
}

BudgetLedger::BudgetLedger(std::size_t fe_s_max, int tau)
    : fe_s_max_(fe_s_max), fe_f_max_(static_cast<std::size_t>(tau) * fe_s_max), tau_(tau) {
  if (tau < 2) throw InvalidArgument("ledger: tau must be >= 2");
}

void BudgetLedger::charge_slow(std::size_t n) {
  if (n > slow_remaining()) throw InternalConsistency("ledger: slow budget overrun");
  fe_s_used_ += n;
}

void BudgetLedger::charge_fast(std::size_t n) {
  if (n > fast_remaining()) throw InternalConsistency("ledger: fast budget overrun");
  fe_f_used_ += n;
}

RunRecord run_scheme(Scheme scheme, const problems::HeterogeneousProblem& problem, AlgorithmConfig cfg) {
  switch (scheme) {
    case Scheme::Tc: cfg.variant = Variant::TC; return run_tc_saea(problem, cfg);
    case Scheme::Nt: cfg.variant = Variant::NT; return run_tc_saea(problem, cfg);
    case Scheme::Ns: cfg.variant = Variant::NS; return run_tc_saea(problem, cfg);
    case Scheme::Tcp: cfg.variant = Variant::TCP; return run_tc_saea(problem, cfg);
    case Scheme::Waiting: return run_waiting(problem, cfg);
    case Scheme::FastFirst: return run_fast_first(problem, cfg);
    case Scheme::BroodInterleaving: return run_brood_interleaving(problem, cfg);
    case Scheme::SpeculativeInterleaving: return run_speculative_interleaving(problem, cfg);
  }
  throw InternalConsistency("unhandled scheme");
}

}  // namespace tcsaea::sched
