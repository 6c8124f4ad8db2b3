#include "ell0/scalarize.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace ell0;
using oracles::vec;

namespace {

PolyhedralScalarizer weight_half() { return PolyhedralScalarizer({{vec({1, 1}), 0.0}}, vec({1, 1})); }

struct RandomSet {
  std::vector<Point> a;
  std::vector<double> b;
  Point k0;
  PolyhedralScalarizer s;
};

// mixes pareto-safe/unsafe and conic/shifted sets
RandomSet random_set(std::mt19937_64& rng, int variant) {
  const Eigen::Index m = 2 + variant % 3;
  std::uniform_real_distribution<double> u(-1.0, 1.0), pos(0.3, 2.0);
  Point k0(m);
  for (Eigen::Index i = 0; i < m; ++i) k0[i] = pos(rng);
  std::vector<Point> a;
  std::vector<double> b;
  std::vector<Halfspace> hs;
  while (static_cast<int>(hs.size()) < 1 + variant % 4) {
    Point ai(m);
    for (Eigen::Index i = 0; i < m; ++i) ai[i] = variant % 2 == 0 ? std::abs(u(rng)) : u(rng);
    if (ai.dot(k0) < 0.1) continue;
    const double bi = variant % 3 == 0 ? 0.0 : 3.0 * u(rng);
    a.push_back(ai);
    b.push_back(bi);
    hs.push_back({ai, bi});
  }
  return {a, b, k0, PolyhedralScalarizer(hs, k0)};
}

}  // namespace

TEST(GerstewitzEval, WeightHalfIsAverage) {
  std::mt19937_64 rng(1);
  for (int i = 0; i < 100; ++i) {
    const Point y = oracles::random_vec(rng, 2, 10.0);
    EXPECT_NEAR(gerstewitz_eval(weight_half(), y), (y[0] + y[1]) / 2, 1e-14);
  }
}

TEST(GerstewitzEval, NonpositiveOrthantIsMax) {
  EXPECT_EQ(gerstewitz_eval(PolyhedralScalarizer::max_scalarizer(2), vec({3, 5})), 5.0);
  const PolyhedralScalarizer explicit_orthant({{vec({1, 0}), 0.0}, {vec({0, 1}), 0.0}}, vec({1, 1}));
  EXPECT_EQ(explicit_orthant.eval(vec({3, 5})), 5.0);
}

TEST(GerstewitzEval, TwoToOneWeights) {
  const PolyhedralScalarizer s({{vec({2, 1}), 0.0}}, vec({1, 1}));
  EXPECT_DOUBLE_EQ(s.eval(vec({3, 0})), 2.0);
  const WeightVector w{2.0 / 3.0, 1.0 / 3.0};
  std::mt19937_64 rng(2);
  for (int i = 0; i < 100; ++i) {
    const Point y = oracles::random_vec(rng, 2, 10.0);
    EXPECT_NEAR(s.eval(y), weight_sum_eval(w, y), 1e-13);
  }
}

TEST(GerstewitzEval, BoundaryOfShiftedSet) {
  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> lam(-4.0, 4.0);
  for (int v = 0; v < 6; ++v) {
    const RandomSet r = random_set(rng, v);
    for (int i = 0; i < 50; ++i) {
      // a point on face j of A, then pushed inside every other face
      const std::size_t j = static_cast<std::size_t>(i) % r.a.size();
      Point z = oracles::random_vec(rng, r.k0.size(), 3.0);
      z -= ((r.a[j].dot(z) - r.b[j]) / r.a[j].squaredNorm()) * r.a[j];
      bool interior_elsewhere = true;
      for (std::size_t k = 0; k < r.a.size(); ++k)
        if (k != j) interior_elsewhere = interior_elsewhere && r.a[k].dot(z) <= r.b[k];
      if (!interior_elsewhere) continue;
      const double l = lam(rng);
      EXPECT_NEAR(r.s.eval(z + l * r.k0), l, 1e-9);
    }
  }
}

TEST(GerstewitzEval, MatchesBisectionOracle) {
  std::mt19937_64 rng(4);
  for (int v = 0; v < 8; ++v) {
    const RandomSet r = random_set(rng, v);
    for (int i = 0; i < 200; ++i) {
      const Point y = oracles::random_vec(rng, r.k0.size(), 5.0);
      EXPECT_NEAR(r.s.eval(y), oracles::gerstewitz_bisection(r.a, r.b, r.k0, y), 1e-9);
    }
  }
}

TEST(PolyhedralScalarizer, RejectsNonFiniteValuedSets) {
  try {
    PolyhedralScalarizer({{vec({1, -1}), 0.0}}, vec({1, 1}));
    FAIL() << "expected a construction error";
  } catch (const ConfigError& e) {
    EXPECT_NE(std::string(e.what()).find("scalarizer not finite-valued"), std::string::npos);
  }
  // the lower-left set with A - R_+ k0 not contained in A
  EXPECT_THROW(PolyhedralScalarizer({{vec({-1, 0}), -2.0}, {vec({0, -1}), -1.0}, {vec({-1, -1}), -5.0}}, vec({1, 1})),
               ConfigError);
}

TEST(PolyhedralScalarizer, RejectsBadShapes) {
  EXPECT_THROW(PolyhedralScalarizer({}, vec({1, 1})), ConfigError);
  EXPECT_THROW(PolyhedralScalarizer({{vec({1, 1, 1}), 0.0}}, vec({1, 1})), DimensionError);
  EXPECT_THROW(PolyhedralScalarizer({{vec({0, 0}), 0.0}}, vec({1, 1})), ConfigError);
}

TEST(PolyhedralScalarizer, DefaultDirectionIsOnes) {
  const PolyhedralScalarizer s({{vec({1, 2, 3}), 1.0}});
  EXPECT_EQ(s.k0(), Point::Ones(3));
}

TEST(PolyhedralScalarizer, ParetoSafeFlagAndLipschitzModulus) {
  EXPECT_TRUE(weight_half().pareto_safe());
  const PolyhedralScalarizer unsafe({{vec({2, -0.5}), 0.0}}, vec({1, 1}));
  EXPECT_FALSE(unsafe.pareto_safe());
  EXPECT_NEAR(unsafe.lipschitz_bound(), std::sqrt(4.25) / 1.5, 1e-15);
  EXPECT_NEAR(PolyhedralScalarizer::max_scalarizer(3).lipschitz_bound(), 1.0, 1e-15);
}

TEST(GerstewitzSubgradient, Examples) {
  EXPECT_EQ(gerstewitz_subgradient(PolyhedralScalarizer::max_scalarizer(2), vec({3, 1})), vec({1, 0}));
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i)
    EXPECT_EQ(gerstewitz_subgradient(weight_half(), oracles::random_vec(rng, 2, 9.0)), vec({0.5, 0.5}));
}

TEST(GerstewitzSubgradient, TieBreaksToLowestIndex) {
  const auto s = PolyhedralScalarizer::max_scalarizer(3);
  EXPECT_EQ(s.subgradient(vec({2, 2, 1})), vec({1, 0, 0}));
  EXPECT_EQ(s.subgradient(vec({1, 2, 2 + 1e-10})), vec({0, 1, 0}));
  EXPECT_EQ(s.subgradient(vec({1, 2, 2 + 1e-8})), vec({0, 0, 1}));
}

// Property suite over random polyhedral sets.
class GerstewitzProperties : public ::testing::TestWithParam<int> {};

TEST_P(GerstewitzProperties, Translation) {
  std::mt19937_64 rng(100 + GetParam());
  const RandomSet r = random_set(rng, GetParam());
  std::uniform_real_distribution<double> lam(-10.0, 10.0);
  for (int i = 0; i < 1000; ++i) {
    const Point y = oracles::random_vec(rng, r.k0.size(), 5.0);
    const double l = lam(rng);
    EXPECT_LT(std::abs(r.s.eval(y + l * r.k0) - (r.s.eval(y) + l)), 1e-9);
  }
}

TEST_P(GerstewitzProperties, SublevelSetIsShiftedSet) {
  std::mt19937_64 rng(200 + GetParam());
  const RandomSet r = random_set(rng, GetParam());
  std::uniform_real_distribution<double> lam(-5.0, 5.0);
  int inside = 0, outside = 0;
  for (int i = 0; i < 1000; ++i) {
    const Point y = oracles::random_vec(rng, r.k0.size(), 5.0);
    const double l = lam(rng);
    const double phi = r.s.eval(y);
    if (std::abs(phi - l) < 1e-9) continue;
    bool member = true;
    for (std::size_t j = 0; j < r.a.size(); ++j) member = member && r.a[j].dot(y - l * r.k0) <= r.b[j];
    EXPECT_EQ(phi <= l, member);
    EXPECT_EQ(r.s.in_shifted_set(y, l), member);
    (member ? inside : outside)++;
  }
  EXPECT_GT(inside, 0);
  EXPECT_GT(outside, 0);
}

// even variants draw nonnegative normals
class ParetoSafeSets : public ::testing::TestWithParam<int> {};

TEST_P(ParetoSafeSets, Monotone) {
  std::mt19937_64 rng(300 + GetParam());
  const RandomSet r = random_set(rng, GetParam());
  ASSERT_TRUE(r.s.pareto_safe());
  std::uniform_real_distribution<double> up(0.0, 3.0);
  for (int i = 0; i < 1000; ++i) {
    const Point y = oracles::random_vec(rng, r.k0.size(), 5.0);
    Point z = y;
    for (Eigen::Index j = 0; j < z.size(); ++j) z[j] += up(rng);
    EXPECT_LE(r.s.eval(y), r.s.eval(z) + 1e-12);
  }
}

TEST_P(GerstewitzProperties, Convex) {
  std::mt19937_64 rng(400 + GetParam());
  const RandomSet r = random_set(rng, GetParam());
  std::uniform_real_distribution<double> unit(0.0, 1.0);
  for (int i = 0; i < 1000; ++i) {
    const Point y = oracles::random_vec(rng, r.k0.size(), 5.0);
    const Point z = oracles::random_vec(rng, r.k0.size(), 5.0);
    const double t = unit(rng);
    EXPECT_LE(r.s.eval(t * y + (1 - t) * z), t * r.s.eval(y) + (1 - t) * r.s.eval(z) + 1e-9);
  }
}

// variants divisible by 3 have b = 0
class ConicSets : public ::testing::TestWithParam<int> {};

TEST_P(ConicSets, PositivelyHomogeneous) {
  std::mt19937_64 rng(500 + GetParam());
  const RandomSet r = random_set(rng, GetParam());
  ASSERT_TRUE(r.s.conic());
  std::uniform_real_distribution<double> alpha(0.01, 50.0);
  for (int i = 0; i < 1000; ++i) {
    const Point y = oracles::random_vec(rng, r.k0.size(), 5.0);
    const double a = alpha(rng);
    const double lhs = r.s.eval(a * y), rhs = a * r.s.eval(y);
    EXPECT_LE(std::abs(lhs - rhs), 1e-9 * std::max(1.0, std::abs(rhs)));
  }
}

TEST_P(GerstewitzProperties, LipschitzBound) {
  std::mt19937_64 rng(600 + GetParam());
  const RandomSet r = random_set(rng, GetParam());
  double modulus = 0.0;
  for (std::size_t j = 0; j < r.a.size(); ++j) modulus = std::max(modulus, r.a[j].norm() / r.a[j].dot(r.k0));
  EXPECT_NEAR(r.s.lipschitz_bound(), modulus, 1e-14);
  for (int i = 0; i < 1000; ++i) {
    const Point y = oracles::random_vec(rng, r.k0.size(), 5.0);
    const Point z = oracles::random_vec(rng, r.k0.size(), 5.0);
    EXPECT_LE(std::abs(r.s.eval(y) - r.s.eval(z)), modulus * (y - z).norm() + 1e-12);
  }
}

TEST_P(GerstewitzProperties, SubgradientInequality) {
  std::mt19937_64 rng(700 + GetParam());
  const RandomSet r = random_set(rng, GetParam());
  for (int i = 0; i < 1000; ++i) {
    const Point y = oracles::random_vec(rng, r.k0.size(), 5.0);
    const Point z = oracles::random_vec(rng, r.k0.size(), 5.0);
    const Point g = r.s.subgradient(y);
    EXPECT_NEAR(g.dot(r.k0), 1.0, 1e-12);
    EXPECT_GE(r.s.eval(z), r.s.eval(y) + g.dot(z - y) - 1e-9);
  }
}

INSTANTIATE_TEST_SUITE_P(RandomSets, GerstewitzProperties, ::testing::Range(0, 12));
INSTANTIATE_TEST_SUITE_P(RandomSets, ParetoSafeSets, ::testing::Values(0, 2, 4, 6, 8, 10));
INSTANTIATE_TEST_SUITE_P(RandomSets, ConicSets, ::testing::Values(0, 3, 6, 9));

TEST(WeightVector, Validation) {
  EXPECT_NO_THROW(WeightVector({0.5, 0.5}));
  EXPECT_NO_THROW(WeightVector({1.0, 0.0, 0.0}));
  EXPECT_THROW(WeightVector({0.6, 0.6}), ConfigError);
  EXPECT_THROW(WeightVector({1.5, -0.5}), ConfigError);
  EXPECT_THROW(WeightVector(Point(0)), DimensionError);
}

TEST(WeightSumEval, Examples) {
  EXPECT_DOUBLE_EQ(weight_sum_eval(WeightVector{0.5, 0.5}, vec({2, 4})), 3.0);
  EXPECT_EQ(weight_sum_eval(WeightVector{1.0, 0.0, 0.0}, vec({-7.25, 3, 9})), -7.25);
  EXPECT_THROW(weight_sum_eval(WeightVector{0.5, 0.5}, vec({1, 2, 3})), DimensionError);
}

TEST(WeightSumEval, AgreesWithHalfspaceScalarizer) {
  std::mt19937_64 rng(6);
  for (int i = 0; i < 1000; ++i) {
    const Point y = oracles::random_vec(rng, 2, 100.0);
    EXPECT_EQ(weight_sum_eval(WeightVector{0.5, 0.5}, y), weight_half().eval(y));
  }
}

TEST(ScalarizerFromWeights, Shape) {
  const auto s = scalarizer_from_weights(WeightVector{2.0 / 3.0, 1.0 / 3.0});
  ASSERT_EQ(s.halfspaces().size(), 1u);
  EXPECT_EQ(s.halfspaces()[0].a, vec({2.0 / 3.0, 1.0 / 3.0}));
  EXPECT_EQ(s.halfspaces()[0].b, 0.0);
  EXPECT_EQ(s.k0(), vec({1, 1}));
  EXPECT_TRUE(s.conic());
  EXPECT_TRUE(s.pareto_safe());
}

TEST(ScalarizerFromWeights, RoundTripIsExact) {
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(0.01, 0.99);
  for (int i = 0; i < 200; ++i) {
    const double w1 = u(rng);
    const WeightVector w(vec({w1, 1.0 - w1}));
    const auto s = scalarizer_from_weights(w);
    const Point y = oracles::random_vec(rng, 2, 20.0);
    EXPECT_EQ(s.eval(y), weight_sum_eval(w, y));
  }
}

TEST(ScalarizerFromWeights, ZeroWeightStrictness) {
  EXPECT_THROW(scalarizer_from_weights(WeightVector{1.0, 0.0}), ConfigError);
  EXPECT_NO_THROW(scalarizer_from_weights(WeightVector{1.0, 0.0}, false));
}
