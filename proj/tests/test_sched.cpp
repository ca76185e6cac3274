#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <cstring>
#include <memory>

#include "tcsaea/errors.hpp"
#include "tcsaea/sched.hpp"

namespace {

using namespace tcsaea;
using namespace tcsaea::sched;

problems::HeterogeneousProblem small_problem(int tau, problems::Family fam = problems::Family::Dtlz2) {
  return {std::make_shared<const problems::Problem>(problems::make_dtlz(fam, 3)), tau};
}

AlgorithmConfig small_config(std::uint64_t seed = 1) {
  AlgorithmConfig cfg;
  cfg.n_train = 20;
  cfg.fe_s_max = 32;
  cfg.w_max = 5;
  cfg.rvea_population = 20;
  cfg.reference_points = 100;
  cfg.seed = seed;
  return cfg;
}

void expect_record_invariants(const RunRecord& r, int tau) {
  EXPECT_LE(r.fe_s_used, r.config.fe_s_max);
  EXPECT_LE(r.fe_f_used, static_cast<std::size_t>(tau) * r.config.fe_s_max);
  EXPECT_EQ(r.archive.size(), r.fe_s_used);
  EXPECT_EQ(r.trace.size(), r.iterations() + 1);
  ASSERT_FALSE(r.front.empty());
  for (const ArchiveEntry& a : r.front) {
    for (const ArchiveEntry& b : r.front) EXPECT_FALSE(dominates(a.f, b.f));
    const bool in_archive = std::any_of(r.archive.begin(), r.archive.end(),
                                        [&](const ArchiveEntry& e) { return e.x == a.x && e.f == a.f; });
    EXPECT_TRUE(in_archive);
  }
  for (std::size_t i = 1; i < r.trace.size(); ++i) {
    EXPECT_GE(r.trace[i].fe_s_used, r.trace[i - 1].fe_s_used);
    EXPECT_EQ(r.trace[i].iteration, i);
  }
  EXPECT_EQ(r.trace.back().fe_s_used, r.fe_s_used);
  EXPECT_EQ(r.trace.back().fe_f_used, r.fe_f_used);
}

TEST(Config, Validation) {
  AlgorithmConfig c;
  EXPECT_NO_THROW(c.validate());
  auto bad = [](auto mutate) {
    AlgorithmConfig x;
    mutate(x);
    return x;
  };
  EXPECT_THROW(bad([](AlgorithmConfig& x) { x.fe_s_max = x.n_train; }).validate(), InvalidArgument);
  EXPECT_THROW(bad([](AlgorithmConfig& x) { x.u = 0; }).validate(), InvalidArgument);
  EXPECT_THROW(bad([](AlgorithmConfig& x) { x.tau = 1; }).validate(), InvalidArgument);
  EXPECT_THROW(bad([](AlgorithmConfig& x) { x.w_max = 0; }).validate(), InvalidArgument);
  EXPECT_THROW(bad([](AlgorithmConfig& x) { x.n_max = 99; }).validate(), InvalidArgument);
}

TEST(Config, SchemeIdentifiersRoundTrip) {
  for (const std::string& id : scheme_ids()) EXPECT_EQ(scheme_id(parse_scheme(id)), id);
  EXPECT_THROW(parse_scheme("tc-saea"), InvalidArgument);
  EXPECT_EQ(parse_variant("ns"), Variant::NS);
  EXPECT_THROW(parse_variant("x"), InvalidArgument);
}

TEST(Ledger, Accounting) {
  BudgetLedger l(10, 3);
  EXPECT_EQ(l.fe_f_max(), 30u);
  l.charge_slow(4);
  l.charge_fast(12);
  EXPECT_TRUE(l.in_lockstep());
  EXPECT_DOUBLE_EQ(l.progress(), 0.4);
  l.charge_fast();
  EXPECT_FALSE(l.in_lockstep());
  EXPECT_THROW(l.charge_slow(7), InternalConsistency);
  EXPECT_THROW(l.charge_fast(18), InternalConsistency);
  l.charge_slow(6);
  EXPECT_TRUE(l.exhausted());
  EXPECT_THROW(BudgetLedger(10, 1), InvalidArgument);
}

TEST(TcSaea, BudgetArithmeticAndLockstep) {
  const RunRecord r = run_tc_saea(small_problem(5), small_config());
  EXPECT_EQ(r.fe_s_used, 32u);
  EXPECT_EQ(r.fe_f_used, 160u);
  EXPECT_EQ(r.iterations(), 4u);
  EXPECT_TRUE(r.lockstep_held);
  for (const IterationRecord& it : r.trace) EXPECT_EQ(it.fe_f_used, 5u * it.fe_s_used);
  expect_record_invariants(r, 5);
}

TEST(TcSaea, PartialFinalBatch) {
  AlgorithmConfig cfg = small_config();
  cfg.fe_s_max = 27;  // 20 + 3 + 3 + 1
  const RunRecord r = run_tc_saea(small_problem(3), cfg);
  EXPECT_EQ(r.fe_s_used, 27u);
  EXPECT_EQ(r.fe_f_used, 81u);
  EXPECT_EQ(r.iterations(), 3u);
  EXPECT_TRUE(r.lockstep_held);
}

TEST(TcSaea, TransfersRespectTheirInterval) {
  AlgorithmConfig cfg = small_config();
  cfg.fe_s_max = 44;
  const RunRecord r = run_tc_saea(small_problem(5), cfg);
  for (const TransferRecord& t : r.transfers) {
    EXPECT_LE(std::abs(t.y_synth - t.mean), t.sigma);
    for (const ArchiveEntry& a : r.archive) EXPECT_NE(a.x, t.x);
  }
  for (GpSource s : r.gp_s_training) EXPECT_NE(s, GpSource::DsPlusDa);
  // Pure retraining at iteration tau: that iteration's search used D_s only.
  ASSERT_GT(r.trace.size(), 6u);
  EXPECT_EQ(r.trace[1].gp_s_source, GpSource::DsOnly);
  EXPECT_EQ(r.trace[6].gp_s_source, GpSource::DsOnly);
}

TEST(TcSaea, NoTransferKeepsDtEmpty) {
  AlgorithmConfig cfg = small_config();
  cfg.variant = Variant::NT;
  const RunRecord r = run_tc_saea(small_problem(5), cfg);
  EXPECT_EQ(r.scheme, Scheme::Nt);
  EXPECT_TRUE(r.transfers.empty());
  for (const IterationRecord& it : r.trace) EXPECT_EQ(it.dt_size, 0u);
  for (GpSource s : r.gp_s_training) EXPECT_EQ(s, GpSource::DsOnly);
  EXPECT_TRUE(r.lockstep_held);
}

TEST(TcSaea, NoSelectionAdmitsWholeBatch) {
  AlgorithmConfig cfg = small_config();
  cfg.variant = Variant::NS;
  const RunRecord r = run_tc_saea(small_problem(5), cfg);
  // Every additional point is admitted: 3 infill points x 4 neighbours each.
  for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_EQ(r.trace[i].dt_size, 12u);
  bool augmented = false;
  for (GpSource s : r.gp_s_training) augmented |= s == GpSource::DsPlusDa;
  EXPECT_TRUE(augmented);
}

TEST(TcSaea, PolynomialCoSurrogate) {
  AlgorithmConfig cfg = small_config();
  cfg.variant = Variant::TCP;
  cfg.diagnostics = true;
  const RunRecord r = run_tc_saea(small_problem(4), cfg);
  EXPECT_EQ(r.scheme, Scheme::Tcp);
  EXPECT_TRUE(r.lockstep_held);
  for (std::size_t i = 1; i < r.trace.size(); ++i) EXPECT_TRUE(std::isfinite(r.trace[i].cosurrogate_mse));
  EXPECT_TRUE(std::isnan(r.trace[0].cosurrogate_mse));
}

TEST(TcSaea, DiagnosticsDoNotChargeTheLedger) {
  AlgorithmConfig cfg = small_config();
  const RunRecord plain = run_tc_saea(small_problem(5), cfg);
  cfg.diagnostics = true;
  const RunRecord diag = run_tc_saea(small_problem(5), cfg);
  EXPECT_EQ(plain.fe_s_used, diag.fe_s_used);
  EXPECT_EQ(plain.fe_f_used, diag.fe_f_used);
  ASSERT_EQ(plain.trace.size(), diag.trace.size());
  for (std::size_t i = 0; i < plain.trace.size(); ++i) EXPECT_EQ(plain.trace[i].igd, diag.trace[i].igd);
}

TEST(TcSaea, Deterministic) {
  const RunRecord a = run_tc_saea(small_problem(5), small_config(7));
  const RunRecord b = run_tc_saea(small_problem(5), small_config(7));
  ASSERT_EQ(a.trace.size(), b.trace.size());
  for (std::size_t i = 0; i < a.trace.size(); ++i) {
    EXPECT_EQ(std::memcmp(&a.trace[i].igd, &b.trace[i].igd, sizeof(double)), 0);
    EXPECT_EQ(std::memcmp(&a.trace[i].hv, &b.trace[i].hv, sizeof(double)), 0);
  }
  ASSERT_EQ(a.archive.size(), b.archive.size());
  for (std::size_t i = 0; i < a.archive.size(); ++i) EXPECT_EQ(a.archive[i].x, b.archive[i].x);
  const RunRecord c = run_tc_saea(small_problem(5), small_config(8));
  EXPECT_NE(a.archive.back().x, c.archive.back().x);
}

TEST(TcSaea, OppositeOneMaxIdentityOnEveryEvaluation) {
  Rng rng(3);
  auto p = std::make_shared<const problems::Problem>(problems::make_problem(problems::make_cm_onemax(6, -1.0, rng)));
  const RunRecord r = run_tc_saea(problems::HeterogeneousProblem(p, 3), small_config());
  for (const ArchiveEntry& e : r.archive) EXPECT_NEAR(e.f[0] + e.f[1], 6.0, 1e-12);
}

TEST(Baselines, Waiting) {
  const RunRecord r = run_waiting(small_problem(5), small_config());
  EXPECT_EQ(r.fe_s_used, 32u);
  EXPECT_EQ(r.fe_f_used, r.fe_s_used);
  EXPECT_TRUE(r.transfers.empty());
  expect_record_invariants(r, 5);
}

TEST(Baselines, FastFirst) {
  const RunRecord r = run_fast_first(small_problem(5), small_config());
  EXPECT_EQ(r.archive.size(), 32u);
  EXPECT_EQ(r.fe_f_used, 160u);
  for (std::size_t i = 0; i < r.archive.size(); ++i) {
    for (std::size_t j = i + 1; j < r.archive.size(); ++j) EXPECT_NE(r.archive[i].x, r.archive[j].x);
  }
  // Trace boundaries: n_train, then every u evaluations.
  ASSERT_EQ(r.trace.size(), 5u);
  EXPECT_EQ(r.trace[0].fe_s_used, 20u);
  EXPECT_EQ(r.trace[1].fe_s_used, 23u);
  expect_record_invariants(r, 5);
}

TEST(Baselines, Interleaving) {
  AlgorithmConfig cfg = small_config();
  cfg.fe_s_max = 100;
  cfg.baseline_population = 10;
  for (Scheme s : {Scheme::BroodInterleaving, Scheme::SpeculativeInterleaving}) {
    const RunRecord r = run_scheme(s, small_problem(4), cfg);
    EXPECT_EQ(r.scheme, s);
    EXPECT_EQ(r.fe_s_used, 100u);
    EXPECT_TRUE(r.lockstep_held) << scheme_id(s);
    EXPECT_EQ(r.fe_f_used, 400u);
    expect_record_invariants(r, 4);
  }
}

TEST(Baselines, RunSchemeDispatch) {
  for (const char* id : {"tc", "nt", "ns", "tcp", "waiting", "fast-first"}) {
    const RunRecord r = run_scheme(parse_scheme(id), small_problem(2), small_config());
    EXPECT_EQ(scheme_id(r.scheme), id);
    EXPECT_EQ(r.fe_s_used, 32u);
  }
}

TEST(Baselines, InvalidConfigIsRejected) {
  AlgorithmConfig cfg = small_config();
  cfg.fe_s_max = 20;
  EXPECT_THROW(run_tc_saea(small_problem(5), cfg), InvalidArgument);
}

}  // namespace
