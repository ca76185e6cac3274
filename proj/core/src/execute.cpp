#include <algorithm>
#include <atomic>
#include <cmath>
#include <limits>
#include <set>
#include <thread>
#include <tuple>

#include "tcsaea/csv.hpp"
#include "tcsaea/errors.hpp"
#include "tcsaea/harness.hpp"

namespace tcsaea::harness {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

CellResult run_cell(const ExperimentPlan& plan, const Cell& cell) {
  CellResult out{cell, std::nullopt, {}};
  try {
    const ProblemEntry& entry = plan.problems[cell.problem];
    const sched::Scheme scheme = plan.schemes[cell.scheme];
    const int tau = plan.taus[cell.tau];
    auto problem = std::make_shared<const problems::Problem>(problems::make_problem(entry.options));
    const problems::HeterogeneousProblem hp(problem, tau);
    out.record = sched::run_scheme(scheme, hp, plan.config_for(scheme, tau, cell.replicate));
  } catch (const std::exception& e) {
    out.error = e.what();
    if (out.error.empty()) out.error = "unknown error";
  }
  return out;
}

double final_igd(const sched::RunRecord& r) { return r.trace.empty() ? kNaN : r.trace.back().igd; }

std::string run_stem(const ExperimentPlan& plan, const Cell& c) {
  return slug(plan.problems[c.problem].id) + "_" + sched::scheme_id(plan.schemes[c.scheme]) + "_tau" +
         std::to_string(plan.taus[c.tau]) + "_rep" + std::to_string(c.replicate);
}

}  // namespace

std::string slug(const std::string& text) {
  std::string out;
  for (char c : text) {
    const bool keep = (c >= 'a' && c <= 'z') || (c >= 'A' && c <= 'Z') || (c >= '0' && c <= '9') || c == '-' ||
                      c == '.' || c == '_';
    out += keep ? c : '_';
  }
  return out;
}

std::vector<Cell> enumerate_cells(const ExperimentPlan& plan) {
  std::vector<Cell> cells;
  cells.reserve(plan.cell_count());
  for (std::size_t p = 0; p < plan.problems.size(); ++p) {
    for (std::size_t s = 0; s < plan.schemes.size(); ++s) {
      for (std::size_t t = 0; t < plan.taus.size(); ++t) {
        for (std::size_t r = 0; r < plan.replicates; ++r) cells.push_back({p, s, t, r});
      }
    }
  }
  return cells;
}

ExecutionResult execute(const ExperimentPlan& plan, std::size_t workers) {
  const std::vector<Cell> cells = enumerate_cells(plan);
  ExecutionResult result;
  result.cells.resize(cells.size());

  std::atomic<std::size_t> next{0};
  auto worker = [&]() {
    for (std::size_t i = next++; i < cells.size(); i = next++) result.cells[i] = run_cell(plan, cells[i]);
  };
  const std::size_t n = std::clamp<std::size_t>(workers, 1, std::max<std::size_t>(1, cells.size()));
  std::vector<std::thread> pool;
  for (std::size_t w = 1; w < n; ++w) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();

  for (const auto& c : result.cells) {
    if (!c.error.empty()) ++result.failures;
  }
  result.summary = summarize(plan, result.cells);
  return result;
}

std::vector<SummaryRow> summarize(const ExperimentPlan& plan, const std::vector<CellResult>& cells) {
  // igds[problem][scheme][tau] in replicate order.
  std::map<std::tuple<std::size_t, std::size_t, std::size_t>, std::vector<double>> igds;
  for (const CellResult& c : cells) {
    auto& v = igds[{c.cell.problem, c.cell.scheme, c.cell.tau}];
    if (c.record && std::isfinite(final_igd(*c.record))) v.push_back(final_igd(*c.record));
  }
  const auto ref_it = std::find(plan.schemes.begin(), plan.schemes.end(), plan.reference);
  const std::optional<std::size_t> ref_index =
      ref_it == plan.schemes.end() ? std::nullopt
                                   : std::optional<std::size_t>(static_cast<std::size_t>(ref_it - plan.schemes.begin()));

  std::vector<SummaryRow> rows;
  for (std::size_t p = 0; p < plan.problems.size(); ++p) {
    for (std::size_t s = 0; s < plan.schemes.size(); ++s) {
      for (std::size_t t = 0; t < plan.taus.size(); ++t) {
        SummaryRow row;
        row.problem = plan.problems[p].id;
        row.scheme = sched::scheme_id(plan.schemes[s]);
        row.tau = plan.taus[t];
        row.p_value = kNaN;
        const std::vector<double>& mine = igds[{p, s, t}];
        row.runs = mine.size();
        if (!mine.empty()) row.igd = metrics::summarize(mine);
        if (ref_index && *ref_index != s) {
          const std::vector<double>& ref = igds[{p, *ref_index, t}];
          if (ref.size() >= 3 && mine.size() >= 3) {
            const metrics::RankSumResult w = metrics::wilcoxon_rank_sum(ref, mine);
            row.marker = metrics::marker_symbol(w.marker);
            row.p_value = w.p_value;
          }
        }
        rows.push_back(std::move(row));
      }
    }
  }
  return rows;
}

std::string summary_csv(const std::vector<SummaryRow>& rows) {
  std::string out = csv::row({"problem", "scheme", "tau", "runs", "mean_igd", "std_igd", "median_igd", "marker", "p_value"});
  for (const SummaryRow& r : rows) {
    out += csv::row({csv::field(r.problem), r.scheme, std::to_string(r.tau), csv::number(r.runs),
                     csv::number(r.igd ? r.igd->mean : kNaN), csv::number(r.igd ? r.igd->std : kNaN),
                     csv::number(r.igd ? r.igd->median : kNaN), r.marker, csv::number(r.p_value)});
  }
  return out;
}

std::string trace_csv(const sched::RunRecord& record) {
  std::string out =
      csv::row({"iteration", "fe_s_used", "fe_f_used", "igd", "hv", "dt_size", "cosurrogate_mse"});
  for (const sched::IterationRecord& it : record.trace) {
    out += csv::row({csv::number(it.iteration), csv::number(it.fe_s_used), csv::number(it.fe_f_used),
                     csv::number(it.igd), csv::number(it.hv), csv::number(it.dt_size),
                     csv::number(it.cosurrogate_mse)});
  }
  return out;
}

std::string front_csv(const sched::RunRecord& record) {
  const std::size_t dim = record.front.empty() ? 0 : record.front.front().x.size();
  std::vector<std::string> header;
  for (std::size_t k = 1; k <= dim; ++k) header.push_back("x" + std::to_string(k));
  header.push_back("f1");
  header.push_back("f2");
  std::string out = csv::row(header);
  for (const sched::ArchiveEntry& e : record.front) {
    std::vector<std::string> fields;
    for (double v : e.x) fields.push_back(csv::number(v));
    fields.push_back(csv::number(e.f[0]));
    fields.push_back(csv::number(e.f[1]));
    out += csv::row(fields);
  }
  return out;
}

void write_outputs(const ExperimentPlan& plan, const ExecutionResult& result, const std::filesystem::path& dir) {
  csv::write_file(dir / "summary.csv", summary_csv(result.summary));

  std::string failures = csv::row({"problem", "scheme", "tau", "replicate", "error"});
  std::map<std::pair<std::size_t, std::size_t>, std::vector<ConvergenceRun>> by_panel;  // (problem, tau)
  for (const CellResult& c : result.cells) {
    const std::string stem = run_stem(plan, c.cell);
    if (!c.record) {
      failures += csv::row({csv::field(plan.problems[c.cell.problem].id), sched::scheme_id(plan.schemes[c.cell.scheme]),
                            std::to_string(plan.taus[c.cell.tau]), std::to_string(c.cell.replicate),
                            csv::field(c.error)});
      continue;
    }
    csv::write_file(dir / "runs" / (stem + ".csv"), trace_csv(*c.record));
    csv::write_file(dir / "fronts" / (stem + ".csv"), front_csv(*c.record));
    by_panel[{c.cell.problem, c.cell.tau}].push_back(
        {sched::scheme_id(plan.schemes[c.cell.scheme]), c.cell.replicate, &*c.record});
  }
  if (result.failures > 0) csv::write_file(dir / "failures.csv", failures);

  for (const auto& [key, runs] : by_panel) {
    const std::string stem = slug(plan.problems[key.first].id) + "_tau" + std::to_string(plan.taus[key.second]);
    emit_convergence(runs, dir / "convergence" / (stem + ".csv"), dir / "convergence" / (stem + ".svg"));
  }
}

std::string convergence_csv(const std::vector<ConvergenceRun>& runs) {
  std::string out = csv::row({"scheme", "replicate", "fe_s_used", "igd"});
  for (const ConvergenceRun& r : runs) {
    for (const sched::IterationRecord& it : r.record->trace) {
      out += csv::row({csv::field(r.scheme), csv::number(r.replicate), csv::number(it.fe_s_used), csv::number(it.igd)});
    }
  }
  return out;
}

std::map<std::string, std::vector<std::pair<std::size_t, double>>> convergence_medians(
    const std::vector<ConvergenceRun>& runs) {
  std::map<std::string, std::vector<const sched::RunRecord*>> by_scheme;
  for (const ConvergenceRun& r : runs) by_scheme[r.scheme].push_back(r.record);

  std::map<std::string, std::vector<std::pair<std::size_t, double>>> out;
  for (const auto& [scheme, records] : by_scheme) {
    // Budget levels reached by every run; the last trace entry wins on repeats.
    std::vector<std::map<std::size_t, double>> levels;
    for (const auto* rec : records) {
      std::map<std::size_t, double> m;
      for (const auto& it : rec->trace) m[it.fe_s_used] = it.igd;
      levels.push_back(std::move(m));
    }
    for (const auto& [fe, unused] : levels.front()) {
      std::vector<double> values;
      for (const auto& m : levels) {
        if (const auto f = m.find(fe); f != m.end() && std::isfinite(f->second)) values.push_back(f->second);
      }
      if (values.size() == levels.size()) out[scheme].emplace_back(fe, metrics::median(values));
    }
  }
  return out;
}

std::string convergence_svg(const std::vector<ConvergenceRun>& runs) {
  const auto medians = convergence_medians(runs);
  constexpr double width = 640, height = 400, margin = 50;
  double x_lo = std::numeric_limits<double>::infinity(), x_hi = -x_lo, y_lo = x_lo, y_hi = -x_lo;
  auto log_igd = [](double v) { return std::log10(std::max(v, 1e-12)); };
  for (const auto& [scheme, series] : medians) {
    for (const auto& [fe, igd] : series) {
      x_lo = std::min(x_lo, static_cast<double>(fe));
      x_hi = std::max(x_hi, static_cast<double>(fe));
      y_lo = std::min(y_lo, log_igd(igd));
      y_hi = std::max(y_hi, log_igd(igd));
    }
  }
  if (!(x_hi > x_lo)) x_hi = x_lo + 1;
  if (!(y_hi > y_lo)) y_hi = y_lo + 1;

  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#ff7f0e", "#9467bd", "#8c564b", "#e377c2", "#7f7f7f"};
  std::string out = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"640\" height=\"400\" viewBox=\"0 0 640 400\">\n";
  out += "<rect width=\"640\" height=\"400\" fill=\"white\"/>\n";
  out += "<text x=\"320\" y=\"390\" text-anchor=\"middle\" font-size=\"12\">slow evaluations</text>\n";
  out += "<text x=\"12\" y=\"200\" font-size=\"12\" transform=\"rotate(-90 12 200)\" text-anchor=\"middle\">median IGD (log10)</text>\n";
  std::size_t color = 0;
  double legend_y = margin;
  for (const auto& [scheme, series] : medians) {
    std::string points, data;
    for (const auto& [fe, igd] : series) {
      const double px = margin + (static_cast<double>(fe) - x_lo) / (x_hi - x_lo) * (width - 2 * margin);
      const double py = height - margin - (log_igd(igd) - y_lo) / (y_hi - y_lo) * (height - 2 * margin);
      if (!points.empty()) {
        points += ' ';
        data += ';';
      }
      points += csv::number(std::round(px * 100) / 100) + "," + csv::number(std::round(py * 100) / 100);
      data += csv::number(fe) + ":" + csv::number(igd);
    }
    const char* c = colors[color++ % 8];
    out += "<polyline fill=\"none\" stroke=\"" + std::string(c) + "\" stroke-width=\"1.5\" data-scheme=\"" + scheme +
           "\" data-medians=\"" + data + "\" points=\"" + points + "\"/>\n";
    out += "<text x=\"" + csv::number(width - margin - 80) + "\" y=\"" + csv::number(legend_y) + "\" fill=\"" + c +
           "\" font-size=\"12\">" + scheme + "</text>\n";
    legend_y += 14;
  }
  out += "</svg>\n";
  return out;
}

void emit_convergence(const std::vector<ConvergenceRun>& runs, const std::filesystem::path& path,
                      const std::optional<std::filesystem::path>& svg) {
  csv::write_file(path, convergence_csv(runs));
  if (svg) csv::write_file(*svg, convergence_svg(runs));
}

}  // namespace tcsaea::harness
