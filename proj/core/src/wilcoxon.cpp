#include <algorithm>
#include <cmath>
#include <numeric>

#include "tcsaea/errors.hpp"
#include "tcsaea/metrics.hpp"

namespace tcsaea::metrics {
namespace {

struct Ranked {
  std::vector<double> ranks;  // midranks, pooled order (a first, then b)
  double tie_term = 0.0;      // sum over tie groups of t^3 - t
};

Ranked midranks(std::span<const double> a, std::span<const double> b) {
  std::vector<double> pooled(a.begin(), a.end());
  pooled.insert(pooled.end(), b.begin(), b.end());
  std::vector<std::size_t> order(pooled.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(), [&](std::size_t i, std::size_t j) { return pooled[i] < pooled[j]; });

  Ranked r;
  r.ranks.resize(pooled.size());
  std::size_t i = 0;
  while (i < order.size()) {
    std::size_t j = i;
    while (j + 1 < order.size() && pooled[order[j + 1]] == pooled[order[i]]) ++j;
    const double rank = 0.5 * static_cast<double>(i + j) + 1.0;
    for (std::size_t k = i; k <= j; ++k) r.ranks[order[k]] = rank;
    const double t = static_cast<double>(j - i + 1);
    r.tie_term += t * t * t - t;
    i = j + 1;
  }
  return r;
}

// P(|W - E| >= |w - E|) over all equally likely choices of na pooled ranks.
// Doubled midranks are integers, so the null distribution is a subset-sum count.
double exact_p(const std::vector<double>& ranks, std::size_t na, double w) {
  std::vector<long> doubled;
  long total = 0;
  for (double r : ranks) {
    doubled.push_back(std::lround(2.0 * r));
    total += doubled.back();
  }
  const std::size_t n = ranks.size();
  // count[j][s]: subsets of size j with doubled sum s.
  std::vector<std::vector<double>> count(na + 1, std::vector<double>(static_cast<std::size_t>(total) + 1, 0.0));
  count[0][0] = 1.0;
  for (std::size_t i = 0; i < n; ++i) {
    const auto d = static_cast<std::size_t>(doubled[i]);
    for (std::size_t j = std::min(na, i + 1); j >= 1; --j) {
      for (std::size_t s = static_cast<std::size_t>(total); s >= d; --s) {
        count[j][s] += count[j - 1][s - d];
        if (s == d) break;
      }
    }
  }
  const double expected2 = static_cast<double>(na) * static_cast<double>(n + 1);  // 2 E[W]
  const double observed = std::abs(2.0 * w - expected2);
  double hits = 0.0, all = 0.0;
  for (std::size_t s = 0; s < count[na].size(); ++s) {
    all += count[na][s];
    if (std::abs(static_cast<double>(s) - expected2) >= observed - 1e-9) hits += count[na][s];
  }
  return std::min(1.0, hits / all);
}

}  // namespace

RankSumResult wilcoxon_rank_sum(std::span<const double> a, std::span<const double> b, double alpha,
                                std::size_t exact_limit) {
  if (a.size() < 3 || b.size() < 3) throw InvalidArgument("wilcoxon_rank_sum: need at least 3 samples each");
  for (double v : a) {
    if (!std::isfinite(v)) throw InvalidArgument("wilcoxon_rank_sum: non-finite sample");
  }
  for (double v : b) {
    if (!std::isfinite(v)) throw InvalidArgument("wilcoxon_rank_sum: non-finite sample");
  }

  const Ranked ranked = midranks(a, b);
  const double na = static_cast<double>(a.size());
  const double nb = static_cast<double>(b.size());
  const double n = na + nb;

  RankSumResult out;
  out.rank_sum = std::accumulate(ranked.ranks.begin(), ranked.ranks.begin() + static_cast<std::ptrdiff_t>(a.size()), 0.0);
  const double expected = na * (n + 1.0) / 2.0;

  if (ranked.tie_term == n * n * n - n) return out;  // all values equal

  if (a.size() <= exact_limit && b.size() <= exact_limit) {
    out.exact = true;
    out.p_value = exact_p(ranked.ranks, a.size(), out.rank_sum);
  } else {
    const double var = na * nb / 12.0 * ((n + 1.0) - ranked.tie_term / (n * (n - 1.0)));
    const double dev = std::max(0.0, std::abs(out.rank_sum - expected) - 0.5);
    const double z = dev / std::sqrt(var);
    out.p_value = std::min(1.0, std::erfc(z / std::sqrt(2.0)));
  }
  if (out.p_value < alpha) {
    out.marker = out.rank_sum < expected ? Marker::Better : Marker::Worse;
  }
  return out;
}

}  // namespace tcsaea::metrics
