// Acceptance suite. Usage: tcsaea_acceptance [criterion...]; with no
// arguments every criterion runs. One PASS/FAIL line per criterion; the exit
// status is nonzero if any criterion fails.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <functional>
#include <limits>
#include <map>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "oracles/dense_oracles.hpp"
#include "tcsaea/evo.hpp"
#include "tcsaea/gp.hpp"
#include "tcsaea/harness.hpp"
#include "tcsaea/metrics.hpp"
#include "tcsaea/problems.hpp"
#include "tcsaea/rng.hpp"
#include "tcsaea/sched.hpp"

using namespace tcsaea;

namespace {

struct Outcome {
  bool pass = false;
  std::string detail;
};

using Clock = std::chrono::steady_clock;

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

Eigen::MatrixXd to_matrix(const std::vector<std::vector<double>>& rows) {
  Eigen::MatrixXd m(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t k = 0; k < rows[i].size(); ++k) {
      m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = rows[i][k];
    }
  }
  return m;
}

Eigen::VectorXd to_vector(const std::vector<double>& v) {
  return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

std::vector<std::array<double, 2>> as_pairs(const std::vector<ObjVec>& v) {
  std::vector<std::array<double, 2>> out;
  for (const ObjVec& f : v) out.push_back({f[0], f[1]});
  return out;
}

// --- 1 ---------------------------------------------------------------------

Outcome gp_suite() {
  const auto t0 = Clock::now();
  Rng rng(101);

  // Interpolation on fitted models.
  double worst_interp = 0.0;
  for (int t = 0; t < 40; ++t) {
    const std::size_t dim = 1 + rng.index(8);
    const std::size_t n = 5 + rng.index(36);
    const Bounds box = Bounds::unit(dim);
    const PointSet x = evo::lhs_sample(n, box, rng);
    std::vector<double> y;
    for (const Point& p : x) {
      double s = 0.0;
      for (std::size_t k = 0; k < dim; ++k) s += std::sin(3.0 * p[k] + static_cast<double>(k)) + p[k] * p[k];
      y.push_back(s);
    }
    gp::FitConfig cfg;
    cfg.bounds = box;
    cfg.seed = rng.next();
    const gp::GpModel m = gp::fit(x, y, cfg);
    const auto [lo, hi] = std::minmax_element(y.begin(), y.end());
    const double range = *hi - *lo;
    for (std::size_t i = 0; i < n; ++i) {
      worst_interp = std::max(worst_interp, std::abs(m.predict(x[i]).mean - y[i]) / range);
    }
  }

  // Likelihood against the dense oracle.
  double worst_lik = 0.0;
  for (int t = 0; t < 300; ++t) {
    const std::size_t n = 2 + rng.index(7);
    const std::size_t dim = 1 + rng.index(5);
    std::vector<std::vector<double>> x(n, std::vector<double>(dim));
    std::vector<double> y(n), theta(dim);
    for (auto& row : x) {
      for (double& v : row) v = rng.uniform();
    }
    for (double& v : y) v = rng.uniform(-3, 3);
    for (double& v : theta) v = std::pow(10.0, rng.uniform(-1, 1.5));
    gp::HyperParams h;
    h.theta = theta;
    h.p.assign(dim, 2.0);
    const gp::Likelihood lik = gp::log_likelihood(h, to_matrix(x), to_vector(y));
    const oracle::DenseGp d = oracle::dense_likelihood(x, y, theta, 2.0, lik.nugget);
    worst_lik = std::max(worst_lik, std::abs(lik.value - d.psi));
  }

  // Cholesky over the full hyperparameter box.
  int failures = 0;
  for (int t = 0; t < 1000; ++t) {
    const std::size_t n = 2 + rng.index(49);
    const std::size_t dim = 1 + rng.index(12);
    std::vector<std::vector<double>> x(n, std::vector<double>(dim));
    std::vector<double> y(n);
    for (auto& row : x) {
      for (double& v : row) v = rng.uniform();
    }
    for (double& v : y) v = rng.uniform();
    gp::HyperParams h;
    for (std::size_t k = 0; k < dim; ++k) {
      h.theta.push_back(std::pow(10.0, rng.uniform(-3, 3)));
      h.p.push_back(2.0);
    }
    try {
      gp::log_likelihood(h, to_matrix(x), to_vector(y));
    } catch (const std::exception&) {
      ++failures;
    }
  }

  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = worst_interp <= 1e-6 && worst_lik <= 1e-8 && failures == 0 && secs < 30.0;
  o.detail = fmt("interpolation %.3g of range (<= 1e-6), likelihood |diff| %.3g (<= 1e-8), %d/1000 Cholesky failures, %.1fs (< 30s)",
                 worst_interp, worst_lik, failures, secs);
  return o;
}

// --- 2 ---------------------------------------------------------------------

Outcome metric_oracles() {
  const auto t0 = Clock::now();
  Rng rng(202);

  double worst_igd = 0.0;
  for (int t = 0; t < 200; ++t) {
    std::vector<ObjVec> ref(1 + rng.index(60)), p(1 + rng.index(40));
    for (ObjVec& f : ref) f = {rng.uniform(), rng.uniform()};
    for (ObjVec& f : p) f = {rng.uniform(-0.5, 1.5), rng.uniform(-0.5, 1.5)};
    worst_igd = std::max(worst_igd, std::abs(metrics::igd(ref, p) - oracle::igd(as_pairs(ref), as_pairs(p))));
  }

  const std::vector<ObjVec> ex_ref{{0, 1}, {1, 0}, {0.5, 0.5}}, ex_p{{0, 1}};
  const double expected = (0.0 + std::sqrt(2.0) + std::sqrt(0.5)) / 3.0;
  const double worked = std::abs(metrics::igd(ex_ref, ex_p) - expected);

  double worst_p = 0.0;
  for (int t = 0; t < 300; ++t) {
    std::vector<double> a(3 + rng.index(6)), b(3 + rng.index(6));
    for (double& v : a) v = std::floor(rng.uniform(0, 6));
    for (double& v : b) v = std::floor(rng.uniform(0, 6)) + (t % 2 ? 0.0 : 1.5);
    const metrics::RankSumResult r = metrics::wilcoxon_rank_sum(a, b);
    worst_p = std::max(worst_p, std::abs(r.p_value - oracle::rank_sum_exact(a, b)));
  }

  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = worst_igd <= 1e-12 && worked <= 1e-12 && worst_p <= 1e-12 && secs < 10.0;
  o.detail = fmt("igd |diff| %.3g (<= 1e-12), worked example |diff| %.3g, rank-sum p |diff| %.3g, %.1fs (< 10s)",
                 worst_igd, worked, worst_p, secs);
  return o;
}

// --- 3 ---------------------------------------------------------------------

problems::HeterogeneousProblem heterogeneous(const std::string& text, int tau) {
  auto p = std::make_shared<const problems::Problem>(problems::make_problem(harness::parse_problem(text)));
  return problems::HeterogeneousProblem(p, tau);
}

Outcome budget_ledger() {
  const auto t0 = Clock::now();
  sched::AlgorithmConfig cfg;
  cfg.n_train = 100;
  cfg.u = 3;
  cfg.fe_s_max = 106;
  cfg.tau = 5;
  cfg.seed = 3;
  const sched::RunRecord r = sched::run_tc_saea(heterogeneous("dtlz2", 5), cfg);
  bool boundaries = true;
  for (const sched::IterationRecord& it : r.trace) boundaries = boundaries && it.fe_f_used == 5 * it.fe_s_used;
  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = r.fe_s_used == 106 && r.fe_f_used == 530 && boundaries && r.lockstep_held && secs < 120.0;
  o.detail = fmt("fe_s %zu (106), fe_f %zu (530), lockstep at %zu boundaries: %s, %.1fs (< 120s)", r.fe_s_used,
                 r.fe_f_used, r.trace.size(), boundaries && r.lockstep_held ? "yes" : "no", secs);
  return o;
}

// --- 4 ---------------------------------------------------------------------

Outcome transfer_selection() {
  const auto t0 = Clock::now();
  const auto problem = heterogeneous("dtlz2", 5);
  sched::AlgorithmConfig cfg;
  cfg.seed = 4;
  cfg.variant = sched::Variant::TC;
  const sched::RunRecord tc = sched::run_tc_saea(problem, cfg);
  std::size_t outside = 0;
  for (const sched::TransferRecord& t : tc.transfers) {
    if (!(t.y_synth >= t.mean - t.sigma && t.y_synth <= t.mean + t.sigma)) ++outside;
  }

  cfg.variant = sched::Variant::NT;
  const sched::RunRecord nt = sched::run_tc_saea(problem, cfg);
  std::size_t nt_max = nt.transfers.size();
  for (const sched::IterationRecord& it : nt.trace) nt_max = std::max(nt_max, it.dt_size);

  const double secs = seconds_since(t0);
  Outcome o;
  o.pass = outside == 0 && nt_max == 0 && secs < 300.0;
  o.detail = fmt("TC admitted %zu rows, %zu outside their interval; NT max |D_t| %zu; %.1fs (< 300s)",
                 tc.transfers.size(), outside, nt_max, secs);
  return o;
}

// --- 5 to 7 ------------------------------------------------------------------

struct MedianRun {
  std::map<std::string, double> median;  ///< per scheme id
  std::map<std::string, std::vector<double>> per_run;
  double max_seconds = 0.0;
  std::size_t failures = 0;
  std::vector<sched::RunRecord> records;
};

MedianRun run_plan(const std::string& text) {
  const harness::ExperimentPlan plan = harness::parse_plan_text(text);
  harness::ExecutionResult result = harness::execute(plan, 1);
  MedianRun out;
  out.failures = result.failures;
  for (const harness::SummaryRow& row : result.summary) {
    if (row.igd) {
      out.median[row.scheme] = row.igd->median;
      out.per_run[row.scheme] = row.igd->per_run;
    }
  }
  for (harness::CellResult& c : result.cells) {
    if (c.record) {
      out.max_seconds = std::max(out.max_seconds, c.record->wall_seconds);
      out.records.push_back(std::move(*c.record));
    } else {
      std::fprintf(stderr, "run failed: %s\n", c.error.c_str());
    }
  }
  return out;
}

std::string join(const std::vector<double>& v) {
  std::string s;
  for (double x : v) s += (s.empty() ? "" : " ") + fmt("%.4g", x);
  return s;
}

double at(const std::map<std::string, double>& m, const std::string& key) {
  const auto it = m.find(key);
  return it == m.end() ? std::numeric_limits<double>::infinity() : it->second;
}

Outcome desk_scale() {
  const MedianRun r = run_plan(R"(
[experiment]
problems = dtlz2
schemes = tc
taus = 5
replicates = 5
base_seed = 500

[algorithm]
fe_s_max = 200
n_train = 100
u = 3
)");
  const double med = at(r.median, "tc");
  Outcome o;
  o.pass = r.failures == 0 && med <= 0.10 && r.max_seconds < 900.0;
  o.detail = fmt("DTLZ2 TC median IGD %.4g (<= 0.10) over [%s], slowest replicate %.0fs (< 900s)", med,
                 join(r.per_run.count("tc") ? r.per_run.at("tc") : std::vector<double>{}).c_str(), r.max_seconds);
  return o;
}

Outcome ablation_ordering() {
  const MedianRun r = run_plan(R"(
[experiment]
problems = dtlz1a
schemes = tc, ns, waiting
taus = 5
replicates = 5
base_seed = 600

[algorithm]
fe_s_max = 200
n_train = 100
u = 3
)");
  const double tc = at(r.median, "tc"), ns = at(r.median, "ns"), waiting = at(r.median, "waiting");
  Outcome o;
  o.pass = r.failures == 0 && tc <= ns && tc <= 0.25 * waiting;
  o.detail = fmt("DTLZ1a median IGD TC %.4g, NS %.4g, Waiting %.4g; TC <= NS: %s, TC <= 0.25 Waiting: %s", tc, ns,
                 waiting, tc <= ns ? "yes" : "no", tc <= 0.25 * waiting ? "yes" : "no");
  return o;
}

Outcome correlation_study() {
  const MedianRun same = run_plan(R"(
[experiment]
problems = cm-onemax:corr=1
schemes = tc
taus = 5
replicates = 3
base_seed = 700

[algorithm]
fe_s_max = 200
n_train = 100
u = 3
)");
  const double med = at(same.median, "tc");

  // Every point evaluated on both objectives. Each objective is an n-term
  // float sum of terms in [0, 1], so the check allows its rounding error.
  const MedianRun opposite = run_plan(R"(
[experiment]
problems = cm-onemax:corr=-1
schemes = tc
taus = 5
replicates = 1
base_seed = 701

[algorithm]
fe_s_max = 200
n_train = 100
u = 3
)");
  std::size_t checked = 0, violations = 0;
  double worst = 0.0;
  for (const sched::RunRecord& rec : opposite.records) {
    for (const sched::ArchiveEntry& e : rec.archive) {
      const double n = static_cast<double>(e.x.size());
      const double err = std::abs(e.f[0] + e.f[1] - n);
      worst = std::max(worst, err);
      if (err > 2.0 * n * n * std::numeric_limits<double>::epsilon()) ++violations;
      ++checked;
    }
  }
  Outcome o;
  o.pass = same.failures == 0 && opposite.failures == 0 && med <= 0.05 && checked > 0 && violations == 0;
  o.detail = fmt("corr=1 median IGD %.4g (<= 0.05) over [%s]; corr=-1 f1+f2=n on %zu points, %zu violations, worst %.3g",
                 med, join(same.per_run.count("tc") ? same.per_run.at("tc") : std::vector<double>{}).c_str(),
                 checked, violations, worst);
  return o;
}

// --- 8 ---------------------------------------------------------------------

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

Outcome determinism() {
  const char* text = R"(
[experiment]
problems = dtlz2:n=5, cm-onemax:n=6:corr=0.5
schemes = tc, nt, waiting
taus = 3
replicates = 3
base_seed = 800

[algorithm]
fe_s_max = 30
n_train = 20
w_max = 4
rvea_population = 16
reference_points = 200
)";
  const harness::ExperimentPlan plan = harness::parse_plan_text(text);
  const auto root = std::filesystem::temp_directory_path() / "tcsaea_acceptance_c8";
  std::filesystem::remove_all(root);
  const harness::ExecutionResult first = harness::execute(plan, 1);
  harness::write_outputs(plan, first, root / "a");
  const harness::ExecutionResult second = harness::execute(plan, 2);
  harness::write_outputs(plan, second, root / "b");
  const std::string a = read_file(root / "a" / "summary.csv");
  const std::string b = read_file(root / "b" / "summary.csv");
  std::filesystem::remove_all(root);
  Outcome o;
  o.pass = first.all_completed() && second.all_completed() && !a.empty() && a == b;
  o.detail = fmt("summary.csv %zu vs %zu bytes, identical: %s", a.size(), b.size(), a == b ? "yes" : "no");
  return o;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<const char*, std::function<Outcome()>>> criteria{
      {"GP correctness suite", gp_suite},
      {"metric oracle equivalence", metric_oracles},
      {"budget-ledger exactness", budget_ledger},
      {"transfer-selection property", transfer_selection},
      {"desk-scale end-to-end on DTLZ2", desk_scale},
      {"ablation ordering on DTLZ1a", ablation_ordering},
      {"correlation study on cm-OneMax", correlation_study},
      {"determinism", determinism},
  };

  std::vector<std::size_t> selected;
  for (int i = 1; i < argc; ++i) {
    const int k = std::atoi(argv[i]);
    if (k < 1 || k > static_cast<int>(criteria.size())) {
      std::fprintf(stderr, "unknown criterion '%s'\n", argv[i]);
      return 2;
    }
    selected.push_back(static_cast<std::size_t>(k - 1));
  }
  if (selected.empty()) {
    for (std::size_t i = 0; i < criteria.size(); ++i) selected.push_back(i);
  }

  int failed = 0;
  for (std::size_t i : selected) {
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail = std::string("exception: ") + e.what();
    }
    std::printf("%s %zu %s: %s\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first, o.detail.c_str());
    std::fflush(stdout);
    if (!o.pass) ++failed;
  }
  return failed == 0 ? 0 : 1;
}
