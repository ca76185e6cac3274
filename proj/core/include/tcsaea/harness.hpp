#pragma once

#include <cstdint>
#include <filesystem>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include "tcsaea/metrics.hpp"
#include "tcsaea/problems.hpp"
#include "tcsaea/sched.hpp"

namespace tcsaea::harness {

/// "name[:key=value]..." with keys n, corr, seed (cm-onemax only for the last two).
problems::ProblemOptions parse_problem(const std::string& text);

struct ProblemEntry {
  std::string id;  ///< as written in the plan; used in file names and CSV cells
  problems::ProblemOptions options;
};

struct ExperimentPlan {
  std::vector<ProblemEntry> problems;
  std::vector<sched::Scheme> schemes;
  std::vector<int> taus{5};
  std::size_t replicates = 1;
  std::uint64_t base_seed = 1;
  std::filesystem::path output_dir = "results";
  sched::Scheme reference = sched::Scheme::Tc;
  sched::AlgorithmConfig algorithm;  ///< [algorithm] section
  /// [scheme.<id>] sections: key -> value, applied on top of `algorithm`.
  std::map<sched::Scheme, std::map<std::string, std::string>> overrides;

  std::size_t cell_count() const { return problems.size() * schemes.size() * taus.size() * replicates; }
  sched::AlgorithmConfig config_for(sched::Scheme scheme, int tau, std::size_t replicate) const;
};

/// INI-style text:
///   [experiment]  problems, schemes, taus, replicates, base_seed, output_dir, reference
///   [algorithm]   fe_s_max, n_train, u, w_max, n_max, ... (see README)
///   [scheme.<id>] same keys as [algorithm]
/// '#' and ';' start comments. Throws ParseError with the line number.
ExperimentPlan parse_plan_text(const std::string& text);
ExperimentPlan parse_plan(const std::filesystem::path& path);

/// Sets one [algorithm]-section key. Throws InvalidArgument for unknown keys
/// or malformed values.
void apply_setting(sched::AlgorithmConfig& cfg, const std::string& key, const std::string& value);

struct Cell {
  std::size_t problem = 0, scheme = 0, tau = 0, replicate = 0;  ///< indices into the plan
};

/// Cells in canonical order: problem, scheme, tau, replicate.
std::vector<Cell> enumerate_cells(const ExperimentPlan& plan);

struct CellResult {
  Cell cell;
  std::optional<sched::RunRecord> record;
  std::string error;  ///< non-empty iff the run failed
};

struct SummaryRow {
  std::string problem;
  std::string scheme;
  int tau = 0;
  std::size_t runs = 0;
  std::optional<metrics::MetricReport> igd;
  std::string marker;  ///< empty for the reference scheme or too few runs
  double p_value = 0.0;
};

struct ExecutionResult {
  std::vector<CellResult> cells;  ///< canonical cell order
  std::vector<SummaryRow> summary;
  std::size_t failures = 0;

  bool all_completed() const { return failures == 0; }
};

/// Runs every cell on `workers` threads and aggregates the summary. Output does
/// not depend on the worker count or completion order.
ExecutionResult execute(const ExperimentPlan& plan, std::size_t workers);

std::vector<SummaryRow> summarize(const ExperimentPlan& plan, const std::vector<CellResult>& cells);

std::string summary_csv(const std::vector<SummaryRow>& rows);
/// iteration, fe_s_used, fe_f_used, igd, hv, dt_size, cosurrogate_mse
std::string trace_csv(const sched::RunRecord& record);
/// x1..xn, f1, f2
std::string front_csv(const sched::RunRecord& record);

/// Writes summary.csv, runs/*.csv, fronts/*.csv and convergence files under
/// `dir`.
void write_outputs(const ExperimentPlan& plan, const ExecutionResult& result, const std::filesystem::path& dir);

struct ConvergenceRun {
  std::string scheme;
  std::size_t replicate = 0;
  const sched::RunRecord* record = nullptr;
};

/// Long-format CSV: scheme, replicate, fe_s_used, igd.
std::string convergence_csv(const std::vector<ConvergenceRun>& runs);

/// Median IGD per scheme at each fe_s_used value present in every run of that
/// scheme.
std::map<std::string, std::vector<std::pair<std::size_t, double>>> convergence_medians(
    const std::vector<ConvergenceRun>& runs);

/// Minimal line chart of the medians (log IGD axis). Each polyline carries the
/// plotted values in a data-medians attribute.
std::string convergence_svg(const std::vector<ConvergenceRun>& runs);

/// Writes `path` (CSV) and, if `svg` is given, the chart.
void emit_convergence(const std::vector<ConvergenceRun>& runs, const std::filesystem::path& path,
                      const std::optional<std::filesystem::path>& svg = std::nullopt);

/// File-name-safe version of an identifier.
std::string slug(const std::string& text);

}  // namespace tcsaea::harness
