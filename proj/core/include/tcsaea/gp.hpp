#pragma once

// Ordinary Kriging with the anisotropic exponential correlation
//   Corr(a, b) = exp(-sum_k theta_k |a_k - b_k|^p_k)
// and profiled (concentrated) maximum-likelihood hyperparameters.

#include <Eigen/Dense>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "tcsaea/types.hpp"

namespace tcsaea::gp {

struct HyperParams {
  std::vector<double> theta;  ///< > 0, one per input dimension
  std::vector<double> p;      ///< in [1, 2], one per input dimension
  double nugget = 1e-10;      ///< >= 0, added to the diagonal of C

  static HyperParams isotropic(std::size_t dim, double theta, double p = 2.0,
                               double nugget = 1e-10);
  std::size_t dim() const { return theta.size(); }
  /// Throws InvalidArgument on a violated invariant.
  void validate() const;
};

double correlation(std::span<const double> xi, std::span<const double> xj,
                   const HyperParams& hyper);

struct Likelihood {
  double value = 0.0;  ///< psi; larger is better
  double mu_hat = 0.0;
  double sigma2_hat = 0.0;
  double nugget = 0.0;  ///< nugget actually used after escalation
  bool degenerate = false;
};

struct NuggetPolicy {
  double initial = 1e-10;
  double max = 1e-4;
  double growth = 10.0;
};

/// Concentrated log-likelihood on already normalized inputs (rows of `x`).
/// The nugget in `hyper` is the starting point for escalation; `policy.max`
/// caps it. Throws NumericalDegeneracy if no nugget up to the cap works.
Likelihood log_likelihood(const HyperParams& hyper, const Eigen::MatrixXd& x,
                          const Eigen::VectorXd& y, const NuggetPolicy& policy = {});

struct Prediction {
  double mean = 0.0;
  double variance = 0.0;
  double stddev() const;
};

/// Anything that maps a decision vector to a predictive mean and variance.
class SurrogateModel {
 public:
  virtual ~SurrogateModel() = default;
  virtual Prediction predict(std::span<const double> x) const = 0;
  virtual double predict_mean(std::span<const double> x) const { return predict(x).mean; }
  virtual std::size_t input_dim() const = 0;
};

struct FitConfig {
  /// Input normalization box; when empty the per-dimension data range is used.
  Bounds bounds;
  double p = 2.0;
  int starts = 8;  ///< theta = 1 plus (starts - 1) LHS points in log10 space
  int max_iterations = 100;
  double initial_step = 1.0;  ///< pattern-search step, log10 units
  double shrink = 0.5;
  double min_step = 1e-3;
  double log10_theta_min = -3.0;
  double log10_theta_max = 3.0;
  NuggetPolicy nugget{};
  std::uint64_t seed = 0x7c5aea;
};

struct FitDiagnostics {
  std::vector<double> start_likelihoods;  ///< psi at every evaluated start point
  /// Whether the nugget needed at each start keeps training rows within the
  /// interpolation bound; such starts outrank all others.
  std::vector<bool> start_interpolates;
  bool interpolates = false;
  double best_likelihood = 0.0;
  int likelihood_evaluations = 0;
  std::size_t duplicates_removed = 0;
  bool degenerate = false;
};

class GpModel final : public SurrogateModel {
 public:
  /// Builds the model for fixed hyperparameters. Rows are deduplicated
  /// (first occurrence kept). Throws InsufficientData for < 2 distinct rows.
  static GpModel with_hyperparams(const PointSet& x, std::span<const double> y,
                                  HyperParams hyper, const FitConfig& cfg = {});

  Prediction predict(std::span<const double> x) const override;
  double predict_mean(std::span<const double> x) const override;
  std::size_t input_dim() const override { return static_cast<std::size_t>(x_.cols()); }

  /// Prediction on normalized input and standardized output scale.
  Prediction predict_normalized(const Eigen::VectorXd& xn) const;

  const HyperParams& hyper() const { return hyper_; }
  std::size_t size() const { return static_cast<std::size_t>(x_.rows()); }
  const Eigen::MatrixXd& normalized_inputs() const { return x_; }
  const Eigen::VectorXd& standardized_outputs() const { return y_; }
  double mu_hat() const { return mu_hat_; }
  double sigma2_hat() const { return sigma2_hat_; }
  const Eigen::MatrixXd& chol() const { return chol_; }
  const Eigen::VectorXd& alpha() const { return alpha_; }
  /// 1' C^-1 1
  double ones_cinv_ones() const { return ones_cinv_ones_; }
  double log_likelihood() const { return likelihood_; }
  double output_mean() const { return y_mean_; }
  double output_scale() const { return y_scale_; }
  bool degenerate() const { return degenerate_; }
  const FitDiagnostics& diagnostics() const { return diagnostics_; }

  Eigen::VectorXd normalize(std::span<const double> x) const;

  /// Normalized training data plus the scaling used to produce it.
  struct Parts {
    Eigen::MatrixXd x;
    Eigen::VectorXd y;
    Eigen::VectorXd lower, range;
    double y_mean = 0.0, y_scale = 1.0;
    bool constant_output = false;
  };

 private:
  friend GpModel fit(const PointSet&, std::span<const double>, const FitConfig&);
  GpModel() = default;

  static GpModel assemble(Parts parts, HyperParams hyper, const NuggetPolicy& policy,
                          FitDiagnostics diag);

  Eigen::VectorXd correlations(const Eigen::VectorXd& xn) const;

  Eigen::MatrixXd x_;  // normalized rows
  Eigen::VectorXd y_;  // standardized
  HyperParams hyper_;
  Eigen::VectorXd in_lower_, in_range_;
  double y_mean_ = 0.0, y_scale_ = 1.0;
  double mu_hat_ = 0.0, sigma2_hat_ = 0.0;
  Eigen::MatrixXd chol_;
  Eigen::VectorXd alpha_;        // C^-1 (y - 1 mu)
  Eigen::VectorXd cinv_ones_;    // C^-1 1
  double ones_cinv_ones_ = 0.0;
  double likelihood_ = 0.0;
  bool degenerate_ = false;
  FitDiagnostics diagnostics_;
};

/// Normalizes, standardizes and selects theta by multi-start pattern search on
/// the concentrated likelihood (p fixed at cfg.p). Theta values whose nugget
/// would break interpolation at the training rows lose to any that do not.
GpModel fit(const PointSet& x, std::span<const double> y, const FitConfig& cfg = {});

}  // namespace tcsaea::gp
