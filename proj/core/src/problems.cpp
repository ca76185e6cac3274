#include "tcsaea/problems.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numbers>
#include <sstream>

#include "tcsaea/errors.hpp"

namespace tcsaea::problems {
namespace {

using std::numbers::pi;

struct FamilyInfo {
  const char* name;
  Family family;
};

constexpr FamilyInfo kRegistry[] = {
    {"dtlz1", Family::Dtlz1}, {"dtlz1a", Family::Dtlz1a}, {"dtlz2", Family::Dtlz2},
    {"dtlz3", Family::Dtlz3}, {"dtlz3a", Family::Dtlz3a}, {"dtlz4", Family::Dtlz4},
    {"dtlz5", Family::Dtlz5}, {"dtlz6", Family::Dtlz6}, {"dtlz7", Family::Dtlz7},
    {"uf1", Family::Uf1},     {"uf2", Family::Uf2},     {"uf3", Family::Uf3},
    {"uf4", Family::Uf4},     {"uf5", Family::Uf5},     {"uf6", Family::Uf6},
    {"uf7", Family::Uf7},     {"cm-onemax", Family::CmOneMax},
};

const char* family_name(Family f) {
  for (const auto& e : kRegistry) {
    if (e.family == f) return e.name;
  }
  return "?";
}

bool is_dtlz(Family f) { return f <= Family::Dtlz7; }
bool is_uf(Family f) { return f >= Family::Uf1 && f <= Family::Uf7; }

// Rastrigin-like DTLZ1/DTLZ3 distance function; `freq` is 20 for the original
// problems and 2 for the smoothed "a" variants.
double g_multimodal(std::span<const double> xm, double freq) {
  double s = 0.0;
  for (double v : xm) s += (v - 0.5) * (v - 0.5) - std::cos(freq * pi * (v - 0.5));
  return 100.0 * (static_cast<double>(xm.size()) + s);
}

double g_sphere(std::span<const double> xm) {
  double s = 0.0;
  for (double v : xm) s += (v - 0.5) * (v - 0.5);
  return s;
}

ObjVec circle(double angle_frac, double g) {
  return {(1.0 + g) * std::cos(angle_frac * pi / 2.0), (1.0 + g) * std::sin(angle_frac * pi / 2.0)};
}

ObjVec eval_dtlz(Family f, std::span<const double> x) {
  const double x1 = x[0];
  const auto xm = x.subspan(1);
  switch (f) {
    case Family::Dtlz1:
    case Family::Dtlz1a: {
      const double g = g_multimodal(xm, f == Family::Dtlz1 ? 20.0 : 2.0);
      return {0.5 * x1 * (1.0 + g), 0.5 * (1.0 - x1) * (1.0 + g)};
    }
    case Family::Dtlz2:
    case Family::Dtlz5:  // with two objectives DTLZ5 has no degenerate angles
      return circle(x1, g_sphere(xm));
    case Family::Dtlz3:
      return circle(x1, g_multimodal(xm, 20.0));
    case Family::Dtlz3a:
      return circle(x1, g_multimodal(xm, 2.0));
    case Family::Dtlz4:
      return circle(std::pow(x1, 100.0), g_sphere(xm));
    case Family::Dtlz6: {
      double g = 0.0;
      for (double v : xm) g += std::pow(v, 0.1);
      return circle(x1, g);
    }
    case Family::Dtlz7: {
      double s = 0.0;
      for (double v : xm) s += v;
      const double g = 1.0 + 9.0 * s / static_cast<double>(xm.size());
      const double h = 2.0 - x1 / (1.0 + g) * (1.0 + std::sin(3.0 * pi * x1));
      return {x1, (1.0 + g) * h};
    }
    default:
      break;
  }
  throw InternalConsistency("eval_dtlz: not a DTLZ family");
}

// CEC 2009 unconstrained bi-objective problems. Variables are 1-based in the
// reference definitions; J1 holds odd j >= 3, J2 even j >= 2.
ObjVec eval_uf(Family f, std::span<const double> x) {
  const std::size_t n = x.size();
  const double nd = static_cast<double>(n);
  const double x1 = x[0];
  double sum1 = 0.0, sum2 = 0.0;
  double prod1 = 1.0, prod2 = 1.0;
  std::size_t c1 = 0, c2 = 0;

  for (std::size_t j = 2; j <= n; ++j) {
    const double xj = x[j - 1];
    const double jd = static_cast<double>(j);
    double y = 0.0;
    switch (f) {
      case Family::Uf1:
      case Family::Uf4:
      case Family::Uf5:
      case Family::Uf6:
      case Family::Uf7:
        y = xj - std::sin(6.0 * pi * x1 + jd * pi / nd);
        break;
      case Family::Uf2: {
        const double amp = 0.3 * x1 * x1 * std::cos(24.0 * pi * x1 + 4.0 * jd * pi / nd) + 0.6 * x1;
        const double phase = 6.0 * pi * x1 + jd * pi / nd;
        y = xj - amp * (j % 2 == 1 ? std::cos(phase) : std::sin(phase));
        break;
      }
      case Family::Uf3:
        y = xj - std::pow(x1, 0.5 * (1.0 + 3.0 * (jd - 2.0) / (nd - 2.0)));
        break;
      default:
        throw InternalConsistency("eval_uf: not a UF family");
    }

    double term = 0.0;
    double factor = 1.0;
    switch (f) {
      case Family::Uf4:
        term = std::abs(y) / (1.0 + std::exp(2.0 * std::abs(y)));
        break;
      case Family::Uf5:
        term = 2.0 * y * y - std::cos(4.0 * pi * y) + 1.0;
        break;
      case Family::Uf3:
      case Family::Uf6:
        term = y * y;
        factor = std::cos(20.0 * y * pi / std::sqrt(jd));
        break;
      default:
        term = y * y;
        break;
    }
    if (j % 2 == 1) {
      sum1 += term;
      prod1 *= factor;
      ++c1;
    } else {
      sum2 += term;
      prod2 *= factor;
      ++c2;
    }
  }

  const double w1 = 2.0 / static_cast<double>(c1);
  const double w2 = 2.0 / static_cast<double>(c2);
  switch (f) {
    case Family::Uf1:
    case Family::Uf2:
      return {x1 + w1 * sum1, 1.0 - std::sqrt(x1) + w2 * sum2};
    case Family::Uf3:
      return {x1 + w1 * (4.0 * sum1 - 2.0 * prod1 + 2.0),
              1.0 - std::sqrt(x1) + w2 * (4.0 * sum2 - 2.0 * prod2 + 2.0)};
    case Family::Uf4:
      return {x1 + w1 * sum1, 1.0 - x1 * x1 + w2 * sum2};
    case Family::Uf5: {
      constexpr double kN = 10.0, kEps = 0.1;
      const double h = (1.0 / (2.0 * kN) + kEps) * std::abs(std::sin(2.0 * kN * pi * x1));
      return {x1 + h + w1 * sum1, 1.0 - x1 + h + w2 * sum2};
    }
    case Family::Uf6: {
      constexpr double kN = 2.0, kEps = 0.1;
      const double h = std::max(0.0, 2.0 * (1.0 / (2.0 * kN) + kEps) * std::sin(2.0 * kN * pi * x1));
      return {x1 + h + w1 * (4.0 * sum1 - 2.0 * prod1 + 2.0),
              1.0 - x1 + h + w2 * (4.0 * sum2 - 2.0 * prod2 + 2.0)};
    }
    case Family::Uf7: {
      const double r = std::pow(x1, 0.2);
      return {r + w1 * sum1, 1.0 - r + w2 * sum2};
    }
    default:
      break;
  }
  throw InternalConsistency("eval_uf: not a UF family");
}

}  // namespace

ObjVec Problem::evaluate(std::span<const double> x) const {
  if (x.size() != spec_.n) {
    throw InvalidArgument(spec_.name + ": expected " + std::to_string(spec_.n) + " variables, got " +
                          std::to_string(x.size()));
  }
  if (!spec_.bounds.contains(x)) throw InvalidArgument(spec_.name + ": decision vector out of bounds");
  if (family_ == Family::CmOneMax) {
    double f1 = 0.0, f2 = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) {
      f1 += x[i];
      f2 += std::abs(x[i] - static_cast<double>(onemax_->map[i]));
    }
    return {f1, f2};
  }
  if (is_dtlz(family_)) return eval_dtlz(family_, x);
  return eval_uf(family_, x);
}

std::string Problem::label() const {
  std::ostringstream os;
  os << spec_.name;
  if (onemax_) {
    os << "(corr=" << onemax_->corr << ",n=" << spec_.n << ",seed=" << onemax_->seed << ")";
  } else {
    os << "(n=" << spec_.n << ")";
  }
  return os.str();
}

Problem make_dtlz(Family family, std::size_t k) {
  if (!is_dtlz(family)) throw InvalidArgument("make_dtlz: not a DTLZ family");
  if (k == 0) {
    k = (family == Family::Dtlz1 || family == Family::Dtlz1a) ? 5 : (family == Family::Dtlz7 ? 20 : 10);
  }
  Problem p;
  p.family_ = family;
  p.spec_.name = family_name(family);
  p.spec_.m = 2;
  p.spec_.k = k;
  p.spec_.n = p.spec_.m + k - 1;
  p.spec_.bounds = Bounds::unit(p.spec_.n);
  return p;
}

Problem make_uf(Family family, std::size_t n) {
  if (!is_uf(family)) throw InvalidArgument("make_uf: not a UF family");
  if (n == 0) n = 30;
  if (n < 3) throw InvalidArgument("make_uf: n must be >= 3");
  Problem p;
  p.family_ = family;
  p.spec_.name = family_name(family);
  p.spec_.n = n;
  std::vector<double> lo(n), hi(n);
  lo[0] = 0.0;
  hi[0] = 1.0;
  double half_width = 1.0;
  if (family == Family::Uf3) half_width = 0.0;
  if (family == Family::Uf4) half_width = 2.0;
  for (std::size_t j = 1; j < n; ++j) {
    lo[j] = family == Family::Uf3 ? 0.0 : -half_width;
    hi[j] = family == Family::Uf3 ? 1.0 : half_width;
  }
  p.spec_.bounds = Bounds(std::move(lo), std::move(hi));
  return p;
}

Problem make_problem(const CmOneMaxSpec& spec) {
  if (spec.map.size() != spec.n || spec.n == 0) throw InvalidArgument("cm-onemax: map size must equal n");
  for (int v : spec.map) {
    if (v != 0 && v != 1) throw InvalidArgument("cm-onemax: map entries must be 0 or 1");
  }
  Problem p;
  p.family_ = Family::CmOneMax;
  p.spec_.name = "cm-onemax";
  p.spec_.n = spec.n;
  p.spec_.bounds = Bounds::unit(spec.n);
  p.onemax_ = spec;
  return p;
}

CmOneMaxSpec make_cm_onemax(std::size_t n, double corr, Rng& rng) {
  if (!(corr >= -1.0 && corr <= 1.0)) throw InvalidArgument("cm-onemax: corr must lie in [-1, 1]");
  if (n == 0) throw InvalidArgument("cm-onemax: n must be positive");
  CmOneMaxSpec s;
  s.n = n;
  s.corr = corr;
  s.map.resize(n);
  const double p_zero = (1.0 + corr) / 2.0;
  for (std::size_t i = 0; i < n; ++i) s.map[i] = rng.uniform() < p_zero ? 0 : 1;
  return s;
}

Problem make_problem(const ProblemOptions& options) {
  for (const auto& e : kRegistry) {
    if (options.name != e.name) continue;
    if (e.family == Family::CmOneMax) {
      Rng rng(options.map_seed);
      CmOneMaxSpec s = make_cm_onemax(options.n.value_or(10), options.corr, rng);
      s.seed = options.map_seed;
      return make_problem(s);
    }
    if (is_dtlz(e.family)) {
      std::size_t k = 0;
      if (options.n) {
        if (*options.n < 2) throw InvalidArgument(options.name + ": n must be >= 2");
        k = *options.n - 1;
      }
      return make_dtlz(e.family, k);
    }
    return make_uf(e.family, options.n.value_or(0));
  }
  throw InvalidArgument("unknown problem '" + options.name + "'");
}

std::vector<std::string> registered_names() {
  std::vector<std::string> names;
  for (const auto& e : kRegistry) names.emplace_back(e.name);
  return names;
}

HeterogeneousProblem::HeterogeneousProblem(std::shared_ptr<const Problem> p, int tau_ratio)
    : problem(std::move(p)), tau(tau_ratio) {
  if (!problem) throw InvalidArgument("HeterogeneousProblem: null problem");
  if (tau < 2) throw InvalidArgument("HeterogeneousProblem: tau must be >= 2");
}

}  // namespace tcsaea::problems
