#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numbers>

#include "oracles/dense_oracles.hpp"
#include "tcsaea/errors.hpp"
#include "tcsaea/evo.hpp"
#include "tcsaea/gp.hpp"
#include "tcsaea/problems.hpp"

namespace {

using namespace tcsaea;
using namespace tcsaea::evo;

// Occupancy of every (dimension, stratum) cell.
void expect_stratified(const PointSet& pts, const Bounds& b) {
  const std::size_t n = pts.size();
  for (std::size_t k = 0; k < b.dim(); ++k) {
    std::vector<int> hits(n, 0);
    for (const Point& p : pts) {
      ASSERT_GE(p[k], b.lower[k]);
      ASSERT_LE(p[k], b.upper[k]);
      auto s = static_cast<std::size_t>((p[k] - b.lower[k]) / b.range(k) * static_cast<double>(n));
      hits[std::min(s, n - 1)]++;
    }
    for (std::size_t s = 0; s < n; ++s) ASSERT_EQ(hits[s], 1) << "dim " << k << " stratum " << s;
  }
}

TEST(Lhs, Quartiles) {
  Rng rng(1);
  const Bounds b = Bounds::unit(1);
  expect_stratified(lhs_sample(4, b, rng), b);
}

TEST(Lhs, SinglePoint) {
  Rng rng(2);
  const Bounds b({-2.0, 5.0}, {-1.0, 9.0});
  const PointSet p = lhs_sample(1, b, rng);
  ASSERT_EQ(p.size(), 1u);
  EXPECT_TRUE(b.contains(p[0]));
}

TEST(Lhs, HundredByEleven) {
  Rng rng(3);
  const Bounds b = Bounds::unit(11);
  expect_stratified(lhs_sample(100, b, rng), b);
}

TEST(Lhs, StratificationProperty) {
  Rng rng(4);
  for (int trial = 0; trial < 40; ++trial) {
    const std::size_t count = 1 + rng.index(trial < 35 ? 300 : 10000);
    const std::size_t dim = 1 + rng.index(50);
    std::vector<double> lo(dim), hi(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      lo[k] = rng.uniform(-10.0, 0.0);
      hi[k] = lo[k] + rng.uniform(0.1, 10.0);
    }
    const Bounds b(lo, hi);
    expect_stratified(lhs_sample(count, b, rng), b);
  }
}

TEST(Lhs, DeterministicUnderSeed) {
  Rng a(11), b(11);
  EXPECT_EQ(lhs_sample(20, Bounds::unit(3), a), lhs_sample(20, Bounds::unit(3), b));
}

PointSet random_points(std::size_t n, const Bounds& b, Rng& rng) {
  PointSet out(n, Point(b.dim()));
  for (Point& p : out) {
    for (std::size_t k = 0; k < b.dim(); ++k) p[k] = rng.uniform(b.lower[k], b.upper[k]);
  }
  return out;
}

TEST(Variation, NoOperatorsMeansCopies) {
  Rng rng(5);
  const Bounds b = Bounds::unit(6);
  const PointSet parents = random_points(10, b, rng);
  VariationConfig cfg;
  cfg.sbx_prob = 0.0;
  cfg.pm_prob = 0.0;
  EXPECT_EQ(variation(parents, b, cfg, rng), parents);
}

TEST(Variation, HugeEtaBarelyMoves) {
  Rng rng(6);
  const Bounds b = Bounds::unit(6);
  const PointSet parents = random_points(10, b, rng);
  VariationConfig cfg;
  cfg.sbx_prob = 0.0;
  cfg.pm_prob = 1.0;
  cfg.pm_eta = 1e9;
  const PointSet off = variation(parents, b, cfg, rng);
  ASSERT_EQ(off.size(), parents.size());
  for (std::size_t i = 0; i < off.size(); ++i) {
    for (std::size_t k = 0; k < 6; ++k) EXPECT_NEAR(off[i][k], parents[i][k], 1e-6);
  }
}

TEST(Variation, OffspringStayInBounds) {
  Rng rng(7);
  for (int trial = 0; trial < 50; ++trial) {
    const std::size_t dim = 1 + rng.index(12);
    std::vector<double> lo(dim), hi(dim);
    for (std::size_t k = 0; k < dim; ++k) {
      lo[k] = rng.uniform(-3.0, 1.0);
      hi[k] = lo[k] + rng.uniform(0.01, 4.0);
    }
    const Bounds b(lo, hi);
    const std::size_t n = 1 + rng.index(31);
    VariationConfig cfg;
    cfg.sbx_eta = rng.uniform(0.5, 30.0);
    cfg.pm_eta = rng.uniform(0.5, 30.0);
    cfg.pm_prob = rng.uniform();
    const PointSet off = variation(random_points(n, b, rng), b, cfg, rng);
    ASSERT_EQ(off.size(), n);
    for (const Point& p : off) ASSERT_TRUE(b.contains(p));
  }
}

TEST(Variation, ValidatesConfig) {
  VariationConfig cfg;
  cfg.sbx_prob = 1.5;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
  cfg = {};
  cfg.pm_eta = 0.0;
  EXPECT_THROW(cfg.validate(), InvalidArgument);
}

TEST(ReferenceVectors, OneDivision) {
  const ReferenceVectorSet r = reference_vectors(1);
  ASSERT_EQ(r.size(), 2u);
  EXPECT_NEAR(r.vectors[0][0], 1.0, 1e-15);
  EXPECT_NEAR(r.vectors[1][1], 1.0, 1e-15);
  for (double g : r.gamma) EXPECT_NEAR(g, std::numbers::pi / 2.0, 1e-12);
}

TEST(ReferenceVectors, TwoDivisions) {
  const ReferenceVectorSet r = reference_vectors(2);
  ASSERT_EQ(r.size(), 3u);
  EXPECT_NEAR(r.vectors[1][0], std::sqrt(0.5), 1e-12);
  EXPECT_NEAR(r.vectors[1][1], std::sqrt(0.5), 1e-12);
}

TEST(ReferenceVectors, UnitNormAndPositiveGamma) {
  for (int h = 1; h <= 40; ++h) {
    const ReferenceVectorSet r = reference_vectors(h);
    ASSERT_EQ(r.size(), static_cast<std::size_t>(h + 1));
    for (std::size_t i = 0; i < r.size(); ++i) {
      EXPECT_NEAR(std::hypot(r.vectors[i][0], r.vectors[i][1]), 1.0, 1e-12);
      EXPECT_GE(r.vectors[i][0], 0.0);
      EXPECT_GE(r.vectors[i][1], 0.0);
      EXPECT_GT(r.gamma[i], 0.0);
    }
  }
  EXPECT_THROW(reference_vectors(0), InvalidArgument);
}

TEST(Apd, ZeroAngleGivesNorm) {
  const ReferenceVectorSet r = reference_vectors(2);
  const std::vector<ObjVec> f{{0.3, 0.3}};
  const auto sel = apd_select(f, r, 0.7);
  ASSERT_EQ(sel.size(), 1u);
  EXPECT_EQ(sel[0].reference, 1u);
  EXPECT_NEAR(sel[0].apd, std::hypot(0.3, 0.3), 1e-12);
}

TEST(Apd, SmallerNormWinsOnSameVector) {
  const ReferenceVectorSet r = reference_vectors(2);
  const std::vector<ObjVec> f{{2.0 * 0.9, 2.0 * 0.1}, {0.9, 0.1}};
  const auto sel = apd_select(f, r, 0.5);
  ASSERT_EQ(sel.size(), 1u);
  EXPECT_EQ(sel[0].index, 1u);
}

TEST(Apd, EmptyInput) { EXPECT_TRUE(apd_select(std::vector<ObjVec>{}, reference_vectors(3), 0.2).empty()); }

std::vector<std::size_t> indices_of(const std::vector<ApdChoice>& sel) {
  std::vector<std::size_t> out;
  for (const ApdChoice& c : sel) out.push_back(c.index);
  std::sort(out.begin(), out.end());
  return out;
}

TEST(Apd, MatchesBruteForceOracle) {
  Rng rng(8);
  const ReferenceVectorSet r = reference_vectors(2);
  for (int trial = 0; trial < 300; ++trial) {
    std::vector<ObjVec> f(10);
    for (ObjVec& v : f) v = {rng.uniform(0.0, 3.0), rng.uniform(0.0, 3.0)};
    const double progress = rng.uniform();
    const auto expected = oracle::apd_argmins(f, r.vectors, r.gamma, progress, 2.0);
    ASSERT_EQ(indices_of(apd_select(f, r, progress, 2.0)), expected) << "trial " << trial;
  }
}

TEST(Apd, AtMostOnePerVectorAndNonempty) {
  Rng rng(9);
  for (int trial = 0; trial < 200; ++trial) {
    const ReferenceVectorSet r = reference_vectors(1 + static_cast<int>(rng.index(15)));
    std::vector<ObjVec> f(1 + rng.index(60));
    for (ObjVec& v : f) v = {rng.uniform(0.0, 5.0), rng.uniform(0.0, 5.0)};
    const auto sel = apd_select(translate_by_ideal(f), r, rng.uniform());
    ASSERT_FALSE(sel.empty());
    std::vector<std::size_t> refs;
    for (const ApdChoice& c : sel) refs.push_back(c.reference);
    ASSERT_TRUE(std::adjacent_find(refs.begin(), refs.end()) == refs.end());
    ASSERT_LE(sel.size(), r.size());
  }
}

TEST(Apd, ScalingInvariance) {
  Rng rng(10);
  const ReferenceVectorSet r = reference_vectors(9);
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<ObjVec> f(30);
    for (ObjVec& v : f) v = {rng.uniform(0.0, 2.0), rng.uniform(0.0, 2.0)};
    const double s = std::pow(2.0, rng.uniform(-8.0, 8.0));
    std::vector<ObjVec> g = f;
    for (ObjVec& v : g) v = {v[0] * s, v[1] * s};
    const double progress = rng.uniform();
    ASSERT_EQ(indices_of(apd_select(f, r, progress)), indices_of(apd_select(g, r, progress)));
  }
}

TEST(Apd, TranslateByIdeal) {
  const std::vector<ObjVec> f{{1.0, 5.0}, {3.0, 2.0}};
  const auto t = translate_by_ideal(f);
  EXPECT_EQ(t[0], (ObjVec{0.0, 3.0}));
  EXPECT_EQ(t[1], (ObjVec{2.0, 0.0}));
}

double sphere(std::span<const double> x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return s;
}

TEST(Soea, ExactBudget) {
  Rng rng(12);
  const Bounds b({-1, -1, -1}, {1, 1, 1});
  GaConfig cfg;
  for (std::size_t budget : {30u, 31u, 59u, 60u, 137u}) {
    std::size_t calls = 0;
    const auto out = soea_optimize([&](std::span<const double> x) { ++calls; return sphere(x); }, b, budget, cfg, rng);
    EXPECT_EQ(out.size(), budget);
    EXPECT_EQ(calls, budget);
    for (const Evaluated& e : out) EXPECT_EQ(e.y, sphere(e.x));
  }
}

TEST(Soea, BudgetEqualToPopulationIsTheInitialPopulation) {
  Rng a(13), b(13);
  const Bounds box = Bounds::unit(4);
  GaConfig cfg;
  const auto out = soea_optimize(sphere, box, cfg.population, cfg, a);
  const PointSet init = lhs_sample(cfg.population, box, b);
  ASSERT_EQ(out.size(), init.size());
  for (std::size_t i = 0; i < init.size(); ++i) EXPECT_EQ(out[i].x, init[i]);
}

TEST(Soea, RejectsSmallBudget) {
  Rng rng(14);
  EXPECT_THROW(soea_optimize(sphere, Bounds::unit(2), 29, GaConfig{}, rng), InvalidArgument);
}

TEST(Soea, SeededStartIsUsed) {
  Rng rng(15);
  const PointSet init{{0.1, 0.2}, {0.3, 0.4}};
  const auto out = soea_optimize(sphere, Bounds::unit(2), 30, GaConfig{}, rng, &init);
  EXPECT_EQ(out[0].x, init[0]);
  EXPECT_EQ(out[1].x, init[1]);
}

TEST(Soea, BeatsRandomSearchOnSphere) {
  const Bounds b({-5, -5, -5, -5, -5}, {5, 5, 5, 5, 5});
  std::vector<double> ga, rs;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(100 + seed);
    double best = 1e300;
    for (const Evaluated& e : soea_optimize(sphere, b, 500, GaConfig{}, rng)) best = std::min(best, e.y);
    ga.push_back(best);
    best = 1e300;
    for (const Point& p : random_points(500, b, rng)) best = std::min(best, sphere(p));
    rs.push_back(best);
  }
  std::nth_element(ga.begin(), ga.begin() + 5, ga.end());
  std::nth_element(rs.begin(), rs.begin() + 5, rs.end());
  EXPECT_LT(ga[5], rs[5]);
}

class Dtlz2Surrogates : public ::testing::Test {
 protected:
  static void SetUpTestSuite() {
    const problems::Problem p = problems::make_dtlz(problems::Family::Dtlz2);
    Rng rng(21);
    const PointSet x = lhs_sample(100, p.bounds(), rng);
    std::vector<double> y1, y2;
    for (const Point& xi : x) {
      const ObjVec f = p.evaluate(xi);
      y1.push_back(f[0]);
      y2.push_back(f[1]);
    }
    gp::FitConfig cfg;
    cfg.bounds = p.bounds();
    fast_ = new gp::GpModel(gp::fit(x, y1, cfg));
    slow_ = new gp::GpModel(gp::fit(x, y2, cfg));
    bounds_ = p.bounds();
  }
  static void TearDownTestSuite() {
    delete fast_;
    delete slow_;
  }
  static inline gp::GpModel* fast_ = nullptr;
  static inline gp::GpModel* slow_ = nullptr;
  static inline Bounds bounds_;
};

double mean_radius2(const Population& p) {
  double s = 0.0;
  for (const ObjVec& f : p.objectives) s += f[0] * f[0] + f[1] * f[1];
  return s / static_cast<double>(p.size());
}

TEST_F(Dtlz2Surrogates, ZeroGenerationsReturnsInit) {
  Rng rng(1);
  const Population init{lhs_sample(12, bounds_, rng), {}};
  RveaConfig cfg;
  cfg.w_max = 0;
  const Population out = surrogate_rvea(*fast_, *slow_, init, bounds_, 0.5, cfg, rng);
  EXPECT_EQ(out.individuals, init.individuals);
  ASSERT_EQ(out.objectives.size(), init.size());
  EXPECT_EQ(out.objectives[3][1], slow_->predict_mean(init.individuals[3]));
}

// Median ratio of final to initial mean predicted f1^2 + f2^2 over 10 seeds.
// Frozen from a reference run.
constexpr double kRveaRadiusRatio = 0.63217233112358584;

TEST_F(Dtlz2Surrogates, RveaContractsTowardTheFront) {
  std::vector<double> ratios;
  for (std::uint64_t seed = 0; seed < 10; ++seed) {
    Rng rng(300 + seed);
    const Population init{lhs_sample(50, bounds_, rng), {}};
    const Population start = surrogate_rvea(*fast_, *slow_, init, bounds_, 0.0, RveaConfig{.w_max = 0}, rng);
    const Population out = surrogate_rvea(*fast_, *slow_, init, bounds_, 0.5, RveaConfig{}, rng);
    ASSERT_FALSE(out.individuals.empty());
    ASSERT_EQ(out.objectives.size(), out.individuals.size());
    for (const Point& x : out.individuals) ASSERT_TRUE(bounds_.contains(x));
    ratios.push_back(mean_radius2(out) / mean_radius2(start));
  }
  std::sort(ratios.begin(), ratios.end());
  const double median = 0.5 * (ratios[4] + ratios[5]);
  EXPECT_LE(median, 1.0);
  EXPECT_NEAR(median, kRveaRadiusRatio, 1e-9);
}

}  // namespace
