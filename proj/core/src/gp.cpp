#include "tcsaea/gp.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "tcsaea/errors.hpp"
#include "tcsaea/evo.hpp"
#include "tcsaea/rng.hpp"

namespace tcsaea::gp {
namespace {

constexpr double kSigma2Floor = 1e-300;
constexpr double kDuplicateTol = 1e-12;
// The mean at training row i misses y_i by exactly nugget * alpha_i (standardized
// units). Hyperparameters that push this past the bound are ranked below every
// hyperparameter that keeps it, so the fitted model still interpolates.
constexpr double kInterpolationTol = 1e-7;

double powabs(double d, double p) {
  d = std::abs(d);
  return p == 2.0 ? d * d : (p == 1.0 ? d : std::pow(d, p));
}

// Factorizes C + nugget*I, escalating the nugget on failure.
// The regularized matrix is formed in double in every case.
template <typename S>
bool factorize(const Eigen::MatrixXd& c, double start, const NuggetPolicy& policy, Eigen::LLT<Eigen::MatrixX<S>>& llt,
               double& used) {
  const double cap = policy.max * (1.0 + 1e-12);
  double nugget = start;
  const Eigen::Index n = c.rows();
  for (;;) {
    Eigen::MatrixXd reg = c;
    reg.diagonal().array() += nugget;
    llt.compute(reg.cast<S>());
    if (llt.info() == Eigen::Success) {
      const auto diag = llt.matrixLLT().diagonal();
      bool ok = true;
      for (Eigen::Index i = 0; i < n; ++i) {
        if (!(diag(i) > S(0)) || !std::isfinite(static_cast<double>(diag(i)))) {
          ok = false;
          break;
        }
      }
      if (ok) {
        used = nugget;
        return true;
      }
    }
    if (nugget >= cap) return false;
    nugget = nugget <= 0.0 ? policy.initial : nugget * policy.growth;
    if (nugget > cap) nugget = policy.max;
  }
}

struct Solved {
  Likelihood lik;
  Eigen::MatrixXd chol;
  Eigen::VectorXd alpha;
  Eigen::VectorXd cinv_ones;
  double ones_cinv_ones = 0.0;
};

// S = long double serves the standalone likelihood, whose callers compare it
// against dense references on poorly conditioned C; model assembly uses double.
template <typename S>
Solved solve_concentrated(const Eigen::MatrixXd& c_in, const Eigen::VectorXd& y_in, double start_nugget,
                          const NuggetPolicy& policy) {
  using Mat = Eigen::MatrixX<S>;
  using Vec = Eigen::VectorX<S>;
  const Vec y = y_in.cast<S>();
  Eigen::LLT<Mat> llt;
  double nugget = 0.0;
  if (!factorize<S>(c_in, start_nugget, policy, llt, nugget)) {
    throw NumericalDegeneracy("correlation matrix not positive definite at nugget " +
                              std::to_string(policy.max));
  }
  const auto n = static_cast<S>(y.size());
  const Vec ones = Vec::Ones(y.size());
  const Vec cinv_ones = llt.solve(ones);
  const Vec cinv_y = llt.solve(y);
  const S ones_cinv_ones = ones.dot(cinv_ones);
  const bool constant = y.maxCoeff() == y.minCoeff();
  const S mu = constant ? y(0) : ones.dot(cinv_y) / ones_cinv_ones;
  const Vec alpha = constant ? Vec(Vec::Zero(y.size())) : Vec(cinv_y - mu * cinv_ones);
  const Vec resid = y.array() - mu;
  S sigma2 = resid.dot(alpha) / n;
  bool degenerate = false;
  if (!(sigma2 >= static_cast<S>(kSigma2Floor))) {
    sigma2 = static_cast<S>(kSigma2Floor);
    degenerate = true;
  }
  S logdet = 0;
  const auto diag = llt.matrixLLT().diagonal();
  for (Eigen::Index i = 0; i < diag.size(); ++i) logdet += std::log(diag(i));
  logdet *= 2;
  Solved s;
  s.lik = Likelihood{static_cast<double>(-0.5 * (n * std::log(sigma2) + logdet)), static_cast<double>(mu),
                     static_cast<double>(sigma2), nugget, degenerate};
  s.chol = Mat(llt.matrixL()).template cast<double>();
  s.alpha = alpha.template cast<double>();
  s.cinv_ones = cinv_ones.template cast<double>();
  s.ones_cinv_ones = static_cast<double>(ones_cinv_ones);
  return s;
}

Eigen::MatrixXd correlation_matrix(const Eigen::MatrixXd& x, const HyperParams& h) {
  const Eigen::Index n = x.rows();
  Eigen::MatrixXd c(n, n);
  for (Eigen::Index i = 0; i < n; ++i) {
    c(i, i) = 1.0;
    for (Eigen::Index j = i + 1; j < n; ++j) {
      double d = 0.0;
      for (Eigen::Index k = 0; k < x.cols(); ++k) {
        d += h.theta[k] * powabs(x(i, k) - x(j, k), h.p[k]);
      }
      c(i, j) = c(j, i) = std::exp(-d);
    }
  }
  return c;
}

// Pairwise |dx|^p per dimension, so that a likelihood evaluation is one
// matrix-vector product plus a factorization.
class PairwiseDistances {
 public:
  PairwiseDistances(const Eigen::MatrixXd& x, const std::vector<double>& p) : n_(x.rows()) {
    const Eigen::Index pairs = n_ * (n_ - 1) / 2;
    dist_.resize(pairs, x.cols());
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < n_; ++i) {
      for (Eigen::Index j = i + 1; j < n_; ++j, ++r) {
        for (Eigen::Index k = 0; k < x.cols(); ++k) dist_(r, k) = powabs(x(i, k) - x(j, k), p[k]);
      }
    }
  }

  Eigen::Index size() const { return n_; }

  /// Fills the lower triangle of `out` with C(theta) + nugget*I.
  void correlation_lower(const Eigen::VectorXd& theta, double nugget, Eigen::MatrixXd& out) const {
    const Eigen::VectorXd d = dist_ * theta;
    out.resize(n_, n_);
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < n_; ++i) {
      out(i, i) = 1.0 + nugget;
      for (Eigen::Index j = i + 1; j < n_; ++j, ++r) out(j, i) = std::exp(-d(r));
    }
  }

  Eigen::MatrixXd correlation(const Eigen::VectorXd& theta) const {
    const Eigen::VectorXd d = dist_ * theta;
    Eigen::MatrixXd c(n_, n_);
    Eigen::Index r = 0;
    for (Eigen::Index i = 0; i < n_; ++i) {
      c(i, i) = 1.0;
      for (Eigen::Index j = i + 1; j < n_; ++j, ++r) c(i, j) = c(j, i) = std::exp(-d(r));
    }
    return c;
  }

 private:
  Eigen::Index n_;
  Eigen::MatrixXd dist_;
};

struct Prepared {
  Eigen::MatrixXd x;
  Eigen::VectorXd y;
  Eigen::VectorXd lower, range;
  double y_mean = 0.0, y_scale = 1.0;
  bool constant_output = false;
  std::size_t duplicates = 0;
};

Prepared prepare(const PointSet& x, std::span<const double> y, const FitConfig& cfg) {
  if (x.size() != y.size()) throw InvalidArgument("gp: input/output row count mismatch");
  if (x.empty()) throw InsufficientData("gp: no training rows");
  const std::size_t dim = x.front().size();
  if (dim == 0) throw InvalidArgument("gp: zero-dimensional inputs");
  for (const auto& row : x) {
    if (row.size() != dim) throw InvalidArgument("gp: ragged input rows");
  }

  Prepared out;
  out.lower.resize(static_cast<Eigen::Index>(dim));
  out.range.resize(static_cast<Eigen::Index>(dim));
  for (std::size_t k = 0; k < dim; ++k) {
    double lo, hi;
    if (cfg.bounds.dim() == dim) {
      lo = cfg.bounds.lower[k];
      hi = cfg.bounds.upper[k];
    } else {
      lo = hi = x.front()[k];
      for (const auto& row : x) {
        lo = std::min(lo, row[k]);
        hi = std::max(hi, row[k]);
      }
    }
    out.lower(k) = lo;
    out.range(k) = hi > lo ? hi - lo : 1.0;
  }

  std::vector<Eigen::VectorXd> rows;
  std::vector<double> ys;
  for (std::size_t i = 0; i < x.size(); ++i) {
    Eigen::VectorXd r(static_cast<Eigen::Index>(dim));
    for (std::size_t k = 0; k < dim; ++k) r(k) = (x[i][k] - out.lower(k)) / out.range(k);
    const bool dup = std::any_of(rows.begin(), rows.end(), [&](const Eigen::VectorXd& q) {
      return (q - r).cwiseAbs().maxCoeff() <= kDuplicateTol;
    });
    if (dup) {
      ++out.duplicates;
      continue;
    }
    rows.push_back(std::move(r));
    ys.push_back(y[i]);
  }
  if (rows.size() < 2) throw InsufficientData("gp: fewer than 2 distinct training rows");

  const auto n = static_cast<Eigen::Index>(rows.size());
  out.x.resize(n, static_cast<Eigen::Index>(dim));
  for (Eigen::Index i = 0; i < n; ++i) out.x.row(i) = rows[i].transpose();

  double mean = 0.0;
  for (double v : ys) mean += v;
  mean /= static_cast<double>(ys.size());
  double var = 0.0;
  for (double v : ys) var += (v - mean) * (v - mean);
  var /= static_cast<double>(ys.size());
  out.y_mean = mean;
  const double sd = std::sqrt(var);
  if (sd > 1e-300 && sd > 1e-14 * std::max(1.0, std::abs(mean))) {
    out.y_scale = sd;
  } else {
    out.y_scale = 1.0;
    out.constant_output = true;
  }
  out.y.resize(n);
  for (Eigen::Index i = 0; i < n; ++i) out.y(i) = (ys[i] - out.y_mean) / out.y_scale;
  return out;
}

}  // namespace

HyperParams HyperParams::isotropic(std::size_t dim, double theta, double p, double nugget) {
  return HyperParams{std::vector<double>(dim, theta), std::vector<double>(dim, p), nugget};
}

void HyperParams::validate() const {
  if (theta.empty() || p.size() != theta.size()) {
    throw InvalidArgument("gp: theta and p must be nonempty and of equal length");
  }
  for (std::size_t k = 0; k < theta.size(); ++k) {
    if (!(theta[k] > 0.0) || !std::isfinite(theta[k])) throw InvalidArgument("gp: theta must be > 0");
    if (!(p[k] >= 1.0 && p[k] <= 2.0)) throw InvalidArgument("gp: p must lie in [1, 2]");
  }
  if (!(nugget >= 0.0)) throw InvalidArgument("gp: nugget must be >= 0");
}

double correlation(std::span<const double> xi, std::span<const double> xj, const HyperParams& hyper) {
  if (xi.size() != xj.size() || xi.size() != hyper.dim()) {
    throw InvalidArgument("correlation: dimension mismatch");
  }
  double d = 0.0;
  for (std::size_t k = 0; k < xi.size(); ++k) d += hyper.theta[k] * powabs(xi[k] - xj[k], hyper.p[k]);
  return std::exp(-d);
}

Likelihood log_likelihood(const HyperParams& hyper, const Eigen::MatrixXd& x, const Eigen::VectorXd& y,
                          const NuggetPolicy& policy) {
  hyper.validate();
  if (x.rows() < 2) throw InsufficientData("log_likelihood: N < 2");
  if (x.rows() != y.size()) throw InvalidArgument("log_likelihood: row count mismatch");
  if (static_cast<std::size_t>(x.cols()) != hyper.dim()) {
    throw InvalidArgument("log_likelihood: dimension mismatch");
  }
  return solve_concentrated<long double>(correlation_matrix(x, hyper), y, hyper.nugget, policy).lik;
}

double Prediction::stddev() const { return std::sqrt(std::max(0.0, variance)); }

Eigen::VectorXd GpModel::normalize(std::span<const double> x) const {
  if (x.size() != input_dim()) throw InvalidArgument("gp predict: dimension mismatch");
  Eigen::VectorXd xn(static_cast<Eigen::Index>(x.size()));
  for (std::size_t k = 0; k < x.size(); ++k) xn(k) = (x[k] - in_lower_(k)) / in_range_(k);
  return xn;
}

Eigen::VectorXd GpModel::correlations(const Eigen::VectorXd& xn) const {
  const Eigen::Index n = x_.rows();
  Eigen::VectorXd r(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    double d = 0.0;
    for (Eigen::Index k = 0; k < x_.cols(); ++k) d += hyper_.theta[k] * powabs(xn(k) - x_(i, k), hyper_.p[k]);
    r(i) = std::exp(-d);
  }
  return r;
}

Prediction GpModel::predict_normalized(const Eigen::VectorXd& xn) const {
  const Eigen::VectorXd r = correlations(xn);
  const double mean = mu_hat_ + r.dot(alpha_);
  const Eigen::VectorXd v = chol_.triangularView<Eigen::Lower>().solve(r);
  const double u = 1.0 - cinv_ones_.dot(r);
  double var = sigma2_hat_ * (1.0 - v.squaredNorm() + u * u / ones_cinv_ones_);
  if (degenerate_ || !(var > 0.0)) var = 0.0;
  return {mean, var};
}

Prediction GpModel::predict(std::span<const double> x) const {
  const Prediction pn = predict_normalized(normalize(x));
  return {y_mean_ + y_scale_ * pn.mean, y_scale_ * y_scale_ * pn.variance};
}

double GpModel::predict_mean(std::span<const double> x) const {
  const Eigen::VectorXd r = correlations(normalize(x));
  return y_mean_ + y_scale_ * (mu_hat_ + r.dot(alpha_));
}

GpModel GpModel::assemble(Parts parts, HyperParams hyper, const NuggetPolicy& policy,
                          FitDiagnostics diag) {
  Solved s = solve_concentrated<double>(correlation_matrix(parts.x, hyper), parts.y, hyper.nugget, policy);
  hyper.nugget = s.lik.nugget;
  GpModel m;
  m.x_ = std::move(parts.x);
  m.y_ = std::move(parts.y);
  m.in_lower_ = std::move(parts.lower);
  m.in_range_ = std::move(parts.range);
  m.y_mean_ = parts.y_mean;
  m.y_scale_ = parts.y_scale;
  m.hyper_ = std::move(hyper);
  m.mu_hat_ = s.lik.mu_hat;
  m.sigma2_hat_ = s.lik.sigma2_hat;
  m.chol_ = std::move(s.chol);
  m.alpha_ = std::move(s.alpha);
  m.cinv_ones_ = std::move(s.cinv_ones);
  m.ones_cinv_ones_ = s.ones_cinv_ones;
  m.likelihood_ = s.lik.value;
  m.degenerate_ = parts.constant_output || s.lik.degenerate;
  diag.degenerate = m.degenerate_;
  m.diagnostics_ = std::move(diag);
  return m;
}

namespace {

GpModel::Parts to_parts(Prepared&& p) {
  GpModel::Parts parts;
  parts.x = std::move(p.x);
  parts.y = std::move(p.y);
  parts.lower = std::move(p.lower);
  parts.range = std::move(p.range);
  parts.y_mean = p.y_mean;
  parts.y_scale = p.y_scale;
  parts.constant_output = p.constant_output;
  return parts;
}

}  // namespace

GpModel GpModel::with_hyperparams(const PointSet& x, std::span<const double> y, HyperParams hyper,
                                  const FitConfig& cfg) {
  hyper.validate();
  Prepared prep = prepare(x, y, cfg);
  if (static_cast<std::size_t>(prep.x.cols()) != hyper.dim()) {
    throw InvalidArgument("gp: hyperparameter dimension mismatch");
  }
  FitDiagnostics diag;
  diag.duplicates_removed = prep.duplicates;
  return assemble(to_parts(std::move(prep)), std::move(hyper), cfg.nugget, std::move(diag));
}

namespace {

// Concentrated likelihood plus whether the nugget it needed still lets the
// model interpolate. Feasible scores beat infeasible ones regardless of psi.
struct Score {
  double psi = -std::numeric_limits<double>::infinity();
  bool interpolates = false;

  bool operator>(const Score& o) const {
    if (interpolates != o.interpolates) return interpolates;
    return psi > o.psi;
  }
};

// Hooke-Jeeves pattern search maximizing psi over log10(theta) in a box.
class PatternSearch {
 public:
  PatternSearch(const PairwiseDistances& dist, const Eigen::VectorXd& y, const FitConfig& cfg,
                FitDiagnostics& diag)
      : dist_(dist), y_(y), cfg_(cfg), diag_(diag) {}

  Score evaluate(const Eigen::VectorXd& z) {
    ++diag_.likelihood_evaluations;
    const Eigen::VectorXd theta = z.unaryExpr([](double v) { return std::pow(10.0, v); });
    return concentrated(theta);
  }

  // Returns the best point found from `start` and its score.
  std::pair<Eigen::VectorXd, Score> run(Eigen::VectorXd base, Score f_base) {
    double step = cfg_.initial_step;
    int iter = 0;
    while (iter < cfg_.max_iterations && step >= cfg_.min_step) {
      ++iter;
      auto [z, f] = explore(base, f_base, step);
      if (f > f_base) {
        while (iter < cfg_.max_iterations) {
          Eigen::VectorXd pattern = clamp(2.0 * z - base);
          base = z;
          f_base = f;
          const Score f_pattern = evaluate(pattern);
          auto [zp, fp] = explore(pattern, f_pattern, step);
          if (!(fp > f_base)) break;
          ++iter;
          z = std::move(zp);
          f = fp;
        }
        if (f > f_base) {
          base = z;
          f_base = f;
        }
      } else {
        step *= cfg_.shrink;
      }
    }
    return {base, f_base};
  }

 private:
  Eigen::VectorXd clamp(Eigen::VectorXd z) const {
    return z.cwiseMax(cfg_.log10_theta_min).cwiseMin(cfg_.log10_theta_max);
  }

  std::pair<Eigen::VectorXd, Score> explore(Eigen::VectorXd z, Score f, double step) {
    for (Eigen::Index k = 0; k < z.size(); ++k) {
      const double orig = z(k);
      bool moved = false;
      for (const double dir : {+1.0, -1.0}) {
        const double cand = std::clamp(orig + dir * step, cfg_.log10_theta_min, cfg_.log10_theta_max);
        if (cand == orig) continue;
        z(k) = cand;
        const Score fc = evaluate(z);
        if (fc > f) {
          f = fc;
          moved = true;
          break;
        }
      }
      if (!moved) z(k) = orig;
    }
    return {std::move(z), f};
  }

  // Same arithmetic as solve_concentrated, factorizing in place. psi is -inf
  // when no nugget in the policy makes C factorizable.
  Score concentrated(const Eigen::VectorXd& theta) {
    const NuggetPolicy& policy = cfg_.nugget;
    const double cap = policy.max * (1.0 + 1e-12);
    const Eigen::Index n = dist_.size();
    const bool constant = y_.maxCoeff() == y_.minCoeff();
    double nugget = policy.initial;
    for (;;) {
      dist_.correlation_lower(theta, nugget, work_);
      Eigen::LLT<Eigen::Ref<Eigen::MatrixXd>> llt(work_);
      bool ok = llt.info() == Eigen::Success;
      for (Eigen::Index i = 0; ok && i < n; ++i) ok = work_(i, i) > 0.0 && std::isfinite(work_(i, i));
      if (ok) {
        rhs_.resize(n, 2);
        rhs_.col(0).setOnes();
        rhs_.col(1) = y_;
        llt.solveInPlace(rhs_);
        const double ones_cinv_ones = rhs_.col(0).sum();
        const double mu = constant ? y_(0) : rhs_.col(1).sum() / ones_cinv_ones;
        const Eigen::VectorXd alpha =
            constant ? Eigen::VectorXd::Zero(n) : Eigen::VectorXd(rhs_.col(1) - mu * rhs_.col(0));
        double sigma2 = (y_.array() - mu).matrix().dot(alpha) / static_cast<double>(n);
        if (!(sigma2 >= kSigma2Floor)) sigma2 = kSigma2Floor;
        double logdet = 0.0;
        for (Eigen::Index i = 0; i < n; ++i) logdet += std::log(work_(i, i));
        Score sc;
        sc.psi = -0.5 * (static_cast<double>(n) * std::log(sigma2) + 2.0 * logdet);
        sc.interpolates = nugget * alpha.cwiseAbs().maxCoeff() <= kInterpolationTol;
        return sc;
      }
      if (nugget >= cap) return Score{};
      nugget = nugget <= 0.0 ? policy.initial : nugget * policy.growth;
      if (nugget > cap) nugget = policy.max;
    }
  }

  const PairwiseDistances& dist_;
  const Eigen::VectorXd& y_;
  const FitConfig& cfg_;
  FitDiagnostics& diag_;
  Eigen::MatrixXd work_, rhs_;
};

}  // namespace

GpModel fit(const PointSet& x, std::span<const double> y, const FitConfig& cfg) {
  if (cfg.starts < 1) throw InvalidArgument("gp fit: starts must be >= 1");
  if (!(cfg.p >= 1.0 && cfg.p <= 2.0)) throw InvalidArgument("gp fit: p must lie in [1, 2]");
  Prepared prep = prepare(x, y, cfg);
  const auto dim = static_cast<std::size_t>(prep.x.cols());
  const std::vector<double> p(dim, cfg.p);

  FitDiagnostics diag;
  diag.duplicates_removed = prep.duplicates;

  const PairwiseDistances dist(prep.x, p);
  PatternSearch search(dist, prep.y, cfg, diag);

  std::vector<Eigen::VectorXd> starts;
  starts.push_back(Eigen::VectorXd::Zero(static_cast<Eigen::Index>(dim)));
  if (cfg.starts > 1) {
    Rng rng(cfg.seed);
    const Bounds box(std::vector<double>(dim, cfg.log10_theta_min), std::vector<double>(dim, cfg.log10_theta_max));
    for (const Point& s : evo::lhs_sample(static_cast<std::size_t>(cfg.starts - 1), box, rng)) {
      starts.push_back(Eigen::Map<const Eigen::VectorXd>(s.data(), static_cast<Eigen::Index>(dim)));
    }
  }

  Eigen::VectorXd best_z = starts.front();
  Score best_f;
  for (const Eigen::VectorXd& s : starts) {
    const Score f0 = search.evaluate(s);
    diag.start_likelihoods.push_back(f0.psi);
    diag.start_interpolates.push_back(f0.interpolates);
    auto [z, f] = search.run(s, f0);
    if (f > best_f) {
      best_f = f;
      best_z = std::move(z);
    }
  }
  if (!std::isfinite(best_f.psi)) {
    throw NumericalDegeneracy("gp fit: no start produced a factorizable correlation matrix");
  }
  diag.best_likelihood = best_f.psi;
  diag.interpolates = best_f.interpolates;

  HyperParams hyper;
  hyper.p = p;
  hyper.nugget = cfg.nugget.initial;
  hyper.theta.resize(dim);
  for (std::size_t k = 0; k < dim; ++k) hyper.theta[k] = std::pow(10.0, best_z(static_cast<Eigen::Index>(k)));
  return GpModel::assemble(to_parts(std::move(prep)), std::move(hyper), cfg.nugget, std::move(diag));
}

}  // namespace tcsaea::gp
