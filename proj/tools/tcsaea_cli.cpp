#include <cstdlib>
#include <iostream>
#include <memory>
#include <thread>

#include "CLI11.hpp"
#include "tcsaea/csv.hpp"
#include "tcsaea/errors.hpp"
#include "tcsaea/harness.hpp"
#include "tcsaea/metrics.hpp"
#include "tcsaea/problems.hpp"
#include "tcsaea/sched.hpp"

namespace {

using namespace tcsaea;

int cmd_run(const std::string& plan_path, std::size_t workers, const std::string& out_flag) {
  const harness::ExperimentPlan plan = harness::parse_plan(plan_path);
  std::filesystem::path out = plan.output_dir;
  if (const char* env = std::getenv("TCSAEA_OUT_DIR"); env && *env) out = env;
  if (!out_flag.empty()) out = out_flag;

  std::cerr << "running " << plan.cell_count() << " cells on " << workers << " worker(s)\n";
  const harness::ExecutionResult result = harness::execute(plan, workers);
  harness::write_outputs(plan, result, out);

  for (const auto& c : result.cells) {
    if (!c.error.empty()) {
      std::cerr << "FAILED " << plan.problems[c.cell.problem].id << " " << sched::scheme_id(plan.schemes[c.cell.scheme])
                << " tau=" << plan.taus[c.cell.tau] << " rep=" << c.cell.replicate << ": " << c.error << "\n";
    }
  }
  std::cout << harness::summary_csv(result.summary);
  std::cerr << "outputs written to " << out.string() << "\n";
  return result.all_completed() ? 0 : 1;
}

int cmd_bench(const std::string& problem_text, const std::string& scheme, int tau, std::uint64_t seed,
              const std::vector<std::string>& settings) {
  sched::AlgorithmConfig cfg;
  for (const std::string& kv : settings) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw InvalidArgument("--set expects key=value, got '" + kv + "'");
    harness::apply_setting(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  }
  cfg.tau = tau;
  cfg.seed = seed;
  auto problem = std::make_shared<const problems::Problem>(problems::make_problem(harness::parse_problem(problem_text)));
  const problems::HeterogeneousProblem hp(problem, tau);
  const sched::RunRecord rec = sched::run_scheme(sched::parse_scheme(scheme), hp, cfg);
  std::cout << harness::trace_csv(rec);
  std::cerr << problem->label() << " " << scheme << " tau=" << tau << " seed=" << seed
            << ": igd=" << csv::number(rec.trace.back().igd) << " fe_s=" << rec.fe_s_used << " fe_f=" << rec.fe_f_used
            << " front=" << rec.front.size() << " wall=" << csv::number(rec.wall_seconds) << "s\n";
  return 0;
}

int cmd_front(const std::string& problem_text, std::size_t count) {
  const problems::Problem problem = problems::make_problem(harness::parse_problem(problem_text));
  std::cout << csv::row({"f1", "f2"});
  for (const ObjVec& f : problems::pareto_front_samples(problem, count)) {
    std::cout << csv::row({csv::number(f[0]), csv::number(f[1])});
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Heterogeneous-latency bi-objective optimization experiments"};
  app.require_subcommand(1);

  auto* run = app.add_subcommand("run", "Execute an experiment plan");
  std::string plan_path, out_dir;
  std::size_t workers = std::max(1u, std::thread::hardware_concurrency());
  run->add_option("plan", plan_path, "Plan file")->required()->check(CLI::ExistingFile);
  run->add_option("--workers", workers, "Concurrent runs")->check(CLI::PositiveNumber);
  run->add_option("--out", out_dir, "Output directory (overrides TCSAEA_OUT_DIR and the plan)");

  auto* bench = app.add_subcommand("bench", "Single run; prints the trace CSV");
  std::string bench_problem, scheme = "tc";
  int tau = 5;
  std::uint64_t seed = 1;
  std::vector<std::string> settings;
  bench->add_option("problem", bench_problem, "Problem, e.g. dtlz2 or cm-onemax:corr=-1:n=10")->required();
  bench->add_option("--scheme", scheme, "tc, nt, ns, tcp, waiting, fast-first, bi, si");
  bench->add_option("--tau", tau, "Latency ratio")->check(CLI::Range(2, 1000));
  bench->add_option("--seed", seed, "Random seed");
  bench->add_option("--set", settings, "Algorithm setting key=value (repeatable)");

  auto* front = app.add_subcommand("front", "Print the reference Pareto front");
  std::string front_problem;
  std::size_t count = 500;
  front->add_option("problem", front_problem, "Problem")->required();
  front->add_option("--count", count, "Samples on continuous fronts");

  CLI11_PARSE(app, argc, argv);
  try {
    if (*run) return cmd_run(plan_path, workers, out_dir);
    if (*bench) return cmd_bench(bench_problem, scheme, tau, seed, settings);
    if (*front) return cmd_front(front_problem, count);
  } catch (const ParseError& e) {
    std::cerr << "plan error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}
