#include "tcsaea/rng.hpp"

#include <algorithm>
#include <numeric>

#include "tcsaea/types.hpp"

namespace tcsaea {

std::size_t Rng::index(std::size_t n) {
  // Lemire's multiply-shift with rejection, unbiased.
  using u128 = unsigned __int128;
  std::uint64_t x = engine_();
  u128 m = static_cast<u128>(x) * n;
  auto low = static_cast<std::uint64_t>(m);
  if (low < n) {
    const std::uint64_t threshold = (0 - static_cast<std::uint64_t>(n)) % n;
    while (low < threshold) {
      x = engine_();
      m = static_cast<u128>(x) * n;
      low = static_cast<std::uint64_t>(m);
    }
  }
  return static_cast<std::size_t>(m >> 64);
}

Rng Rng::split() { return Rng(mix_seed(engine_())); }

std::vector<std::size_t> Rng::permutation(std::size_t n) {
  std::vector<std::size_t> p(n);
  std::iota(p.begin(), p.end(), std::size_t{0});
  shuffle(p);
  return p;
}

std::uint64_t mix_seed(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Bounds::Bounds(std::vector<double> lo, std::vector<double> hi)
    : lower(std::move(lo)), upper(std::move(hi)) {}

Bounds Bounds::unit(std::size_t dim) {
  return Bounds(std::vector<double>(dim, 0.0), std::vector<double>(dim, 1.0));
}

bool Bounds::contains(std::span<const double> x) const {
  if (x.size() != dim()) return false;
  for (std::size_t k = 0; k < x.size(); ++k) {
    if (!(x[k] >= lower[k] && x[k] <= upper[k])) return false;
  }
  return true;
}

void Bounds::clip(std::span<double> x) const {
  for (std::size_t k = 0; k < x.size(); ++k) {
    x[k] = std::clamp(x[k], lower[k], upper[k]);
  }
}

std::vector<std::size_t> nondominated_indices(std::span<const ObjVec> points) {
  // Sort by (f1, f2); a sweep keeps points whose f2 beats everything before.
  std::vector<std::size_t> order(points.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return points[a] < points[b];
  });
  std::vector<std::size_t> keep;
  double best_f2 = std::numeric_limits<double>::infinity();
  ObjVec last{std::numeric_limits<double>::quiet_NaN(), 0.0};
  for (std::size_t idx : order) {
    const ObjVec& p = points[idx];
    if (p == last) {
      keep.push_back(idx);
    } else if (p[1] < best_f2) {
      keep.push_back(idx);
      best_f2 = p[1];
      last = p;
    }
  }
  std::sort(keep.begin(), keep.end());
  return keep;
}

}  // namespace tcsaea
