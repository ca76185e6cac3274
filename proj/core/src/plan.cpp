#include <algorithm>
#include <charconv>
#include <fstream>
#include <set>
#include <sstream>

#include "tcsaea/errors.hpp"
#include "tcsaea/harness.hpp"

namespace tcsaea::harness {
namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    item = trim(item);
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

template <typename T>
T parse_int(const std::string& key, const std::string& value) {
  T v{};
  const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (value.empty() || res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
    throw InvalidArgument(key + ": expected an integer, got '" + value + "'");
  }
  return v;
}

double parse_real(const std::string& key, const std::string& value) {
  double v = 0.0;
  const auto res = std::from_chars(value.data(), value.data() + value.size(), v);
  if (value.empty() || res.ec != std::errc{} || res.ptr != value.data() + value.size()) {
    throw InvalidArgument(key + ": expected a number, got '" + value + "'");
  }
  return v;
}

bool parse_bool(const std::string& key, const std::string& value) {
  if (value == "true" || value == "yes" || value == "1") return true;
  if (value == "false" || value == "no" || value == "0") return false;
  throw InvalidArgument(key + ": expected true or false, got '" + value + "'");
}

}  // namespace

problems::ProblemOptions parse_problem(const std::string& text) {
  std::vector<std::string> parts;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ':')) parts.push_back(trim(item));
  if (parts.empty() || parts[0].empty()) throw InvalidArgument("empty problem name");

  problems::ProblemOptions opt;
  opt.name = parts[0];
  const auto names = problems::registered_names();
  if (std::find(names.begin(), names.end(), opt.name) == names.end()) {
    throw InvalidArgument("unknown problem '" + opt.name + "'");
  }
  std::set<std::string> seen;
  for (std::size_t i = 1; i < parts.size(); ++i) {
    const auto eq = parts[i].find('=');
    if (eq == std::string::npos) throw InvalidArgument("problem option '" + parts[i] + "' is not key=value");
    const std::string key = trim(parts[i].substr(0, eq));
    const std::string value = trim(parts[i].substr(eq + 1));
    if (!seen.insert(key).second) throw InvalidArgument("duplicate problem option '" + key + "'");
    if (key == "n") {
      opt.n = parse_int<std::size_t>(key, value);
    } else if (key == "corr" && opt.name == "cm-onemax") {
      opt.corr = parse_real(key, value);
    } else if (key == "seed" && opt.name == "cm-onemax") {
      opt.map_seed = parse_int<std::uint64_t>(key, value);
    } else {
      throw InvalidArgument("unknown option '" + key + "' for problem " + opt.name);
    }
  }
  return opt;
}

void apply_setting(sched::AlgorithmConfig& cfg, const std::string& key, const std::string& value) {
  if (key == "fe_s_max") cfg.fe_s_max = parse_int<std::size_t>(key, value);
  else if (key == "n_train") cfg.n_train = parse_int<std::size_t>(key, value);
  else if (key == "u") cfg.u = parse_int<std::size_t>(key, value);
  else if (key == "w_max") cfg.w_max = parse_int<int>(key, value);
  else if (key == "n_max") cfg.n_max = parse_int<std::size_t>(key, value);
  else if (key == "beta_max") cfg.acquisition.beta_max = parse_real(key, value);
  else if (key == "beta_min") cfg.acquisition.beta_min = parse_real(key, value);
  else if (key == "beta_schedule") cfg.acquisition.schedule = acquisition::parse_schedule(value);
  else if (key == "init_fast_budget") cfg.init_fast_budget = parse_int<std::size_t>(key, value);
  else if (key == "accumulate_transfer") cfg.accumulate_transfer = parse_bool(key, value);
  else if (key == "diagnostics") cfg.diagnostics = parse_bool(key, value);
  else if (key == "baseline_population") cfg.baseline_population = parse_int<std::size_t>(key, value);
  else if (key == "speculative_injection") cfg.speculative_injection = parse_int<std::size_t>(key, value);
  else if (key == "rvea_population") cfg.rvea_population = parse_int<std::size_t>(key, value);
  else if (key == "rvea_divisions") cfg.rvea_divisions = parse_int<int>(key, value);
  else if (key == "reference_points") cfg.reference_points = parse_int<std::size_t>(key, value);
  else if (key == "sbx_eta") cfg.variation.sbx_eta = parse_real(key, value);
  else if (key == "sbx_prob") cfg.variation.sbx_prob = parse_real(key, value);
  else if (key == "pm_eta") cfg.variation.pm_eta = parse_real(key, value);
  else if (key == "pm_prob") cfg.variation.pm_prob = parse_real(key, value);
  else throw InvalidArgument("unknown key '" + key + "'");
}

sched::AlgorithmConfig ExperimentPlan::config_for(sched::Scheme scheme, int tau, std::size_t replicate) const {
  sched::AlgorithmConfig cfg = algorithm;
  if (const auto it = overrides.find(scheme); it != overrides.end()) {
    for (const auto& [key, value] : it->second) apply_setting(cfg, key, value);
  }
  cfg.tau = tau;
  cfg.seed = base_seed + replicate;
  return cfg;
}

ExperimentPlan parse_plan_text(const std::string& text) {
  ExperimentPlan plan;
  std::string section;
  std::map<std::string, std::set<std::string>> seen;  // section -> keys
  std::istringstream in(text);
  std::string raw;
  int line_no = 0;
  bool have_schemes = false;
  bool have_reference = false;

  while (std::getline(in, raw)) {
    ++line_no;
    std::string line = raw;
    if (const auto c = line.find_first_of("#;"); c != std::string::npos) line.erase(c);
    line = trim(line);
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']') throw ParseError(line_no, "unterminated section header");
      section = trim(line.substr(1, line.size() - 2));
      const bool known = section == "experiment" || section == "algorithm" ||
                         (section.rfind("scheme.", 0) == 0 && section.size() > 7);
      if (!known) throw ParseError(line_no, "unknown section [" + section + "]");
      if (section.rfind("scheme.", 0) == 0) {
        try {
          plan.overrides[sched::parse_scheme(section.substr(7))];
        } catch (const InvalidArgument& e) {
          throw ParseError(line_no, e.what());
        }
      }
      continue;
    }

    const auto eq = line.find('=');
    if (eq == std::string::npos) throw ParseError(line_no, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (section.empty()) throw ParseError(line_no, "key '" + key + "' outside a section");
    if (!seen[section].insert(key).second) throw ParseError(line_no, "duplicate key '" + key + "'");

    try {
      if (section == "experiment") {
        if (key == "problems") {
          for (const std::string& p : split_list(value)) plan.problems.push_back({p, parse_problem(p)});
        } else if (key == "schemes") {
          for (const std::string& s : split_list(value)) plan.schemes.push_back(sched::parse_scheme(s));
          have_schemes = true;
        } else if (key == "taus") {
          plan.taus.clear();
          for (const std::string& t : split_list(value)) {
            const int tau = parse_int<int>(key, t);
            if (tau < 2) throw InvalidArgument("invalid tau " + t + " (must be >= 2)");
            plan.taus.push_back(tau);
          }
          if (plan.taus.empty()) throw InvalidArgument("taus: empty list");
        } else if (key == "replicates") {
          plan.replicates = parse_int<std::size_t>(key, value);
          if (plan.replicates < 1) throw InvalidArgument("replicates must be >= 1");
        } else if (key == "base_seed") {
          plan.base_seed = parse_int<std::uint64_t>(key, value);
        } else if (key == "output_dir") {
          plan.output_dir = value;
        } else if (key == "reference") {
          plan.reference = sched::parse_scheme(value);
          have_reference = true;
        } else {
          throw InvalidArgument("unknown key '" + key + "'");
        }
      } else if (section == "algorithm") {
        apply_setting(plan.algorithm, key, value);
      } else {
        sched::AlgorithmConfig probe;
        apply_setting(probe, key, value);
        plan.overrides[sched::parse_scheme(section.substr(7))][key] = value;
      }
    } catch (const InvalidArgument& e) {
      throw ParseError(line_no, e.what());
    }
  }

  if (plan.problems.empty()) throw ParseError(0, "plan: at least one problem required");
  if (!have_schemes) plan.schemes = {sched::Scheme::Tc};
  if (plan.schemes.empty()) throw ParseError(0, "plan: at least one scheme required");
  if (have_reference &&
      std::find(plan.schemes.begin(), plan.schemes.end(), plan.reference) == plan.schemes.end()) {
    throw ParseError(0, "plan: reference scheme '" + sched::scheme_id(plan.reference) + "' is not in schemes");
  }
  for (sched::Scheme s : plan.schemes) {
    for (int tau : plan.taus) {
      try {
        plan.config_for(s, tau, 0).validate();
      } catch (const InvalidArgument& e) {
        throw ParseError(0, "scheme " + sched::scheme_id(s) + ": " + e.what());
      }
    }
  }
  return plan;
}

ExperimentPlan parse_plan(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError(0, "cannot open plan file " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse_plan_text(ss.str());
}

}  // namespace tcsaea::harness
