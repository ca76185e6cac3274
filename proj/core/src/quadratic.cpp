#include <Eigen/Dense>

#include "tcsaea/errors.hpp"
#include "tcsaea/transfer.hpp"

namespace tcsaea::transfer {

std::vector<double> QuadraticModel::basis(std::span<const double> x) const {
  const std::size_t d = lower_.size();
  std::vector<double> z(d);
  for (std::size_t k = 0; k < d; ++k) z[k] = (x[k] - lower_[k]) / range_[k];
  std::vector<double> b;
  b.reserve(basis_size(d));
  b.push_back(1.0);
  for (double v : z) b.push_back(v);
  for (double v : z) b.push_back(v * v);
  for (std::size_t i = 0; i < d; ++i) {
    for (std::size_t j = i + 1; j < d; ++j) b.push_back(z[i] * z[j]);
  }
  return b;
}

QuadraticModel QuadraticModel::fit(const PointSet& x, const std::vector<double>& y, const Bounds& bounds) {
  if (x.size() != y.size()) throw InvalidArgument("quadratic fit: length mismatch");
  if (x.empty()) throw InsufficientData("quadratic fit: no rows");
  const std::size_t d = bounds.dim();
  QuadraticModel m;
  m.lower_ = bounds.lower;
  m.range_.resize(d);
  for (std::size_t k = 0; k < d; ++k) m.range_[k] = bounds.range(k) > 0.0 ? bounds.range(k) : 1.0;

  const auto rows = static_cast<Eigen::Index>(x.size());
  const auto cols = static_cast<Eigen::Index>(basis_size(d));
  Eigen::MatrixXd a(rows, cols);
  Eigen::VectorXd b(rows);
  for (Eigen::Index i = 0; i < rows; ++i) {
    if (x[static_cast<std::size_t>(i)].size() != d) throw InvalidArgument("quadratic fit: dimension mismatch");
    const std::vector<double> phi = m.basis(x[static_cast<std::size_t>(i)]);
    for (Eigen::Index j = 0; j < cols; ++j) a(i, j) = phi[static_cast<std::size_t>(j)];
    b(i) = y[static_cast<std::size_t>(i)];
  }
  const Eigen::VectorXd coef = a.completeOrthogonalDecomposition().solve(b);
  m.coef_.assign(coef.data(), coef.data() + coef.size());
  return m;
}

gp::Prediction QuadraticModel::predict(std::span<const double> x) const {
  if (x.size() != lower_.size()) throw InvalidArgument("quadratic predict: dimension mismatch");
  const std::vector<double> phi = basis(x);
  double s = 0.0;
  for (std::size_t j = 0; j < phi.size(); ++j) s += coef_[j] * phi[j];
  return {s, 0.0};
}

}  // namespace tcsaea::transfer
