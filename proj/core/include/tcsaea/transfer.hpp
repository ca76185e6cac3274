#pragma once

// Co-surrogate transfer: a model of the slow-minus-fast difference turns cheap
// fast-objective evaluations into synthetic slow-objective labels, and a
// one-sigma band of the slow surrogate decides which labels are trusted.

#include <memory>
#include <vector>

#include "tcsaea/gp.hpp"
#include "tcsaea/rng.hpp"
#include "tcsaea/types.hpp"

namespace tcsaea::transfer {

struct LabeledSet {
  PointSet x;
  std::vector<double> y;

  std::size_t size() const { return x.size(); }
  bool empty() const { return x.empty(); }
  void append(Point p, double label);
  void append(const LabeledSet& other);
};

/// D_s, D_f, D_c and D_t. `pairing[i]` is the row of `fast` holding the fast
/// value of `slow` row i.
struct TrainingSets {
  LabeledSet slow;
  LabeledSet fast;
  LabeledSet diff;
  LabeledSet transferable;
  std::vector<std::size_t> pairing;

  /// Appends a point evaluated on both objectives to D_s, D_f and D_c.
  void add_both(const Point& x, double fast_value, double slow_value);
  void add_fast_only(const Point& x, double fast_value);
  /// Throws InternalConsistency if pairing or D_c disagree with D_s / D_f.
  void check_invariants() const;
};

/// Y_c[i] = Y_s[i] - Y_f[pairing[i]], in D_s order.
LabeledSet build_difference_set(const LabeledSet& slow, const LabeledSet& fast,
                                const std::vector<std::size_t>& pairing);

struct TransferBatch {
  PointSet x;                   ///< X_a
  std::vector<double> y_fast;   ///< true fast values
  std::vector<double> y_diff;   ///< co-surrogate predicted differences
  std::vector<double> y_synth;  ///< y_diff + y_fast
  std::vector<double> slow_mean;
  std::vector<double> slow_sigma;
  std::vector<bool> selected;

  std::size_t size() const { return x.size(); }
};

/// Fills y_diff and y_synth from the co-surrogate's mean predictions.
void synthesize_slow_labels(const gp::SurrogateModel& co_surrogate, TransferBatch& batch);

/// Same, returning (Y_c_a, Y_s_syn) for explicit inputs.
std::pair<std::vector<double>, std::vector<double>> synthesize_slow_labels(
    const gp::SurrogateModel& co_surrogate, const PointSet& x_add, const std::vector<double>& y_fast);

/// Fills slow_mean / slow_sigma from `slow_model` and marks rows whose
/// synthetic label lies in [mean - sigma, mean + sigma] (inclusive). Returns
/// the selected rows labeled with their synthetic values.
LabeledSet select_transferable(const gp::SurrogateModel& slow_model, TransferBatch& batch);

/// ParEGO-style cap: the n_max/2 lowest labels (stable) plus n_max/2 drawn
/// uniformly without replacement from the rest. Identity when |set| <= n_max.
LabeledSet cap_training_set(const LabeledSet& set, std::size_t n_max, Rng& rng);

double co_surrogate_mse(const gp::SurrogateModel& co_surrogate, const PointSet& x_add,
                        const std::vector<double>& true_diffs);

/// Ordinary least squares on the full quadratic basis
/// {1, x_i, x_i^2, x_i x_j (i < j)} over inputs scaled to [0, 1].
/// Underdetermined systems take the minimum-norm solution.
class QuadraticModel final : public gp::SurrogateModel {
 public:
  static QuadraticModel fit(const PointSet& x, const std::vector<double>& y, const Bounds& bounds);

  gp::Prediction predict(std::span<const double> x) const override;
  std::size_t input_dim() const override { return lower_.size(); }
  const std::vector<double>& coefficients() const { return coef_; }
  static std::size_t basis_size(std::size_t dim) { return 1 + 2 * dim + dim * (dim - 1) / 2; }

 private:
  std::vector<double> basis(std::span<const double> x) const;

  std::vector<double> lower_, range_;
  std::vector<double> coef_;
};

}  // namespace tcsaea::transfer
