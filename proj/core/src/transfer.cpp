#include "tcsaea/transfer.hpp"

#include <algorithm>
#include <numeric>

#include "tcsaea/errors.hpp"

namespace tcsaea::transfer {

void LabeledSet::append(Point p, double label) {
  x.push_back(std::move(p));
  y.push_back(label);
}

void LabeledSet::append(const LabeledSet& other) {
  x.insert(x.end(), other.x.begin(), other.x.end());
  y.insert(y.end(), other.y.begin(), other.y.end());
}

void TrainingSets::add_both(const Point& x, double fast_value, double slow_value) {
  pairing.push_back(fast.size());
  fast.append(x, fast_value);
  slow.append(x, slow_value);
  diff.append(x, slow_value - fast_value);
}

void TrainingSets::add_fast_only(const Point& x, double fast_value) { fast.append(x, fast_value); }

void TrainingSets::check_invariants() const {
  if (pairing.size() != slow.size() || diff.size() != slow.size()) {
    throw InternalConsistency("training sets: |D_c| and pairing must match |D_s|");
  }
  for (std::size_t i = 0; i < slow.size(); ++i) {
    const std::size_t j = pairing[i];
    if (j >= fast.size() || fast.x[j] != slow.x[i] || diff.x[i] != slow.x[i]) {
      throw InternalConsistency("training sets: unpaired row " + std::to_string(i));
    }
    if (diff.y[i] != slow.y[i] - fast.y[j]) {
      throw InternalConsistency("training sets: Y_c != Y_s - Y_f at row " + std::to_string(i));
    }
  }
  for (const Point& t : transferable.x) {
    if (std::find(slow.x.begin(), slow.x.end(), t) != slow.x.end()) {
      throw InternalConsistency("training sets: D_t row duplicates a D_s row");
    }
  }
}

LabeledSet build_difference_set(const LabeledSet& slow, const LabeledSet& fast,
                                const std::vector<std::size_t>& pairing) {
  if (pairing.empty()) throw InvalidArgument("build_difference_set: empty pairing");
  if (pairing.size() != slow.size()) {
    throw InternalConsistency("build_difference_set: pairing does not cover D_s");
  }
  LabeledSet out;
  for (std::size_t i = 0; i < slow.size(); ++i) {
    const std::size_t j = pairing[i];
    if (j >= fast.size()) throw InternalConsistency("build_difference_set: unpaired row " + std::to_string(i));
    out.append(slow.x[i], slow.y[i] - fast.y[j]);
  }
  return out;
}

std::pair<std::vector<double>, std::vector<double>> synthesize_slow_labels(
    const gp::SurrogateModel& co_surrogate, const PointSet& x_add, const std::vector<double>& y_fast) {
  if (x_add.size() != y_fast.size()) throw InvalidArgument("synthesize_slow_labels: length mismatch");
  std::vector<double> diff(x_add.size()), synth(x_add.size());
  for (std::size_t i = 0; i < x_add.size(); ++i) {
    diff[i] = co_surrogate.predict_mean(x_add[i]);
    synth[i] = diff[i] + y_fast[i];
  }
  return {std::move(diff), std::move(synth)};
}

void synthesize_slow_labels(const gp::SurrogateModel& co_surrogate, TransferBatch& batch) {
  auto [diff, synth] = synthesize_slow_labels(co_surrogate, batch.x, batch.y_fast);
  batch.y_diff = std::move(diff);
  batch.y_synth = std::move(synth);
}

LabeledSet select_transferable(const gp::SurrogateModel& slow_model, TransferBatch& batch) {
  if (batch.y_synth.size() != batch.size()) {
    throw InvalidArgument("select_transferable: synthesize labels first");
  }
  const std::size_t n = batch.size();
  batch.slow_mean.resize(n);
  batch.slow_sigma.resize(n);
  batch.selected.assign(n, false);
  LabeledSet out;
  for (std::size_t i = 0; i < n; ++i) {
    const gp::Prediction p = slow_model.predict(batch.x[i]);
    batch.slow_mean[i] = p.mean;
    batch.slow_sigma[i] = p.stddev();
    const double lo = p.mean - batch.slow_sigma[i];
    const double hi = p.mean + batch.slow_sigma[i];
    if (batch.y_synth[i] >= lo && batch.y_synth[i] <= hi) {
      batch.selected[i] = true;
      out.append(batch.x[i], batch.y_synth[i]);
    }
  }
  return out;
}

LabeledSet cap_training_set(const LabeledSet& set, std::size_t n_max, Rng& rng) {
  if (n_max < 2 || n_max % 2 != 0) throw InvalidArgument("cap_training_set: n_max must be even and >= 2");
  if (set.size() <= n_max) return set;

  std::vector<std::size_t> order(set.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return set.y[a] < set.y[b]; });

  const std::size_t half = n_max / 2;
  LabeledSet out;
  for (std::size_t i = 0; i < half; ++i) out.append(set.x[order[i]], set.y[order[i]]);

  // Partial Fisher-Yates over the remainder, kept in original row order.
  std::vector<std::size_t> rest(order.begin() + static_cast<std::ptrdiff_t>(half), order.end());
  std::sort(rest.begin(), rest.end());
  for (std::size_t i = 0; i < half; ++i) {
    const std::size_t j = i + rng.index(rest.size() - i);
    std::swap(rest[i], rest[j]);
    out.append(set.x[rest[i]], set.y[rest[i]]);
  }
  return out;
}

double co_surrogate_mse(const gp::SurrogateModel& co_surrogate, const PointSet& x_add,
                        const std::vector<double>& true_diffs) {
  if (x_add.size() != true_diffs.size()) throw InvalidArgument("co_surrogate_mse: length mismatch");
  if (x_add.empty()) throw InvalidArgument("co_surrogate_mse: empty input");
  double sum = 0.0;
  for (std::size_t i = 0; i < x_add.size(); ++i) {
    const double e = co_surrogate.predict_mean(x_add[i]) - true_diffs[i];
    sum += e * e;
  }
  return sum / static_cast<double>(x_add.size());
}

}  // namespace tcsaea::transfer
