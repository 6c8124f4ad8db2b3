#include "ell0/l0calc.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace ell0;
using oracles::vec;

namespace {

SupportPattern mask(std::initializer_list<bool> bits) { return SupportPattern(std::vector<bool>(bits)); }

Point sparse_random(std::mt19937_64& rng, Eigen::Index n) {
  Point x = oracles::random_vec(rng, n, 3.0);
  std::bernoulli_distribution zero(0.4);
  for (Eigen::Index i = 0; i < n; ++i)
    if (zero(rng)) x[i] = 0.0;
  return x;
}

}  // namespace

TEST(L0Norm, CountsNonzeros) {
  EXPECT_EQ(l0_norm(vec({0, -1, 4})), 2u);
  EXPECT_EQ(l0_norm(vec({0, 0, 0})), 0u);
  EXPECT_EQ(l0_norm(vec({1, 2, 3})), 3u);
}

TEST(L0Norm, ToleranceMode) {
  EXPECT_EQ(l0_norm(vec({1e-8, 2}), ZeroMode::tol(1e-6)), 1u);
  EXPECT_EQ(l0_norm(vec({1e-8, 2}), ZeroMode::exact()), 2u);
  // the threshold itself counts as zero
  EXPECT_EQ(l0_norm(vec({1e-6, -1e-6}), ZeroMode::tol(1e-6)), 0u);
}

TEST(L0Norm, NegativeZeroIsZero) { EXPECT_EQ(l0_norm(vec({-0.0, 1.0})), 1u); }

TEST(L0Norm, ScaleInvariantInExactMode) {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> alpha(0.1, 10.0);
  for (int i = 0; i < 200; ++i) {
    const Point x = sparse_random(rng, 1 + i % 7);
    const double a = (i % 2 ? -1 : 1) * alpha(rng);
    EXPECT_EQ(l0_norm(a * x), l0_norm(x));
    EXPECT_LE(l0_norm(x), static_cast<std::size_t>(x.size()));
  }
}

TEST(L0Norm, TolModeRejectsNonPositiveEpsilon) {
  EXPECT_THROW(ZeroMode::tol(0.0), ConfigError);
  EXPECT_THROW(ZeroMode::tol(-1.0), ConfigError);
}

TEST(SupportPattern, FromPoint) {
  EXPECT_EQ(support_pattern(vec({0, 2, -3})), mask({false, true, true}));
  EXPECT_EQ(support_pattern(vec({0, 0})), mask({false, false}));
  EXPECT_EQ(support_pattern(vec({5e-7, 1}), ZeroMode::tol(1e-6)), mask({false, true}));
}

TEST(SupportPattern, MatrixFormIsProjection) {
  Matrix expected = Matrix::Zero(3, 3);
  expected(1, 1) = 1;
  expected(2, 2) = 1;
  EXPECT_EQ(support_pattern(vec({0, 2, -3})).to_matrix(), expected);
}

TEST(SupportPattern, PopcountEqualsL0InBothModes) {
  std::mt19937_64 rng(2);
  for (int i = 0; i < 200; ++i) {
    Point x = sparse_random(rng, 1 + i % 8);
    if (i % 3 == 0) x[0] = 1e-7;
    for (ZeroMode m : {ZeroMode::exact(), ZeroMode::tol(1e-6)}) EXPECT_EQ(support_pattern(x, m).popcount(), l0_norm(x, m));
  }
}

TEST(SupportPattern, BitEncodings) {
  const SupportPattern p = mask({false, true, true, false});
  EXPECT_EQ(p.to_bitstring(), "0110");
  EXPECT_EQ(p.to_bits(), 0b0110u);
  EXPECT_EQ(SupportPattern::from_bits(p.to_bits(), 4), p);
  EXPECT_EQ(SupportPattern::from_bitstring("0110"), p);
  EXPECT_EQ(SupportPattern::from_bitstring("01"), mask({false, true}));
  EXPECT_THROW(SupportPattern::from_bitstring("01x"), ConfigError);
}

TEST(SupportPattern, SubsetRelation) {
  EXPECT_TRUE(mask({false, true, false}).subset_of(mask({true, true, false})));
  EXPECT_FALSE(mask({true, false, true}).subset_of(mask({true, true, false})));
  EXPECT_TRUE(SupportPattern::empty(3).subset_of(SupportPattern::full(3)));
}

TEST(Project, Examples) {
  EXPECT_EQ(project(mask({false, true, true}), vec({7, 2, -3})), vec({0, 2, -3}));
  const Point x = vec({0, 2.5, -1e-300});
  EXPECT_EQ(project(support_pattern(x), x), x);
}

TEST(Project, IdempotentLinearAndComplementary) {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 200; ++i) {
    const Eigen::Index n = 1 + i % 6;
    const SupportPattern p = support_pattern(sparse_random(rng, n));
    const Point v = oracles::random_vec(rng, n, 4.0);
    const Point w = oracles::random_vec(rng, n, 4.0);
    EXPECT_EQ(project(p, project(p, v)), project(p, v));
    EXPECT_LT((project(p, 2.0 * v - w) - (2.0 * project(p, v) - project(p, w))).norm(), 1e-14);
    EXPECT_EQ(project(p, v) + complement_project(p, v), v);
  }
}

TEST(Project, MonotoneInSupport) {
  std::mt19937_64 rng(4);
  for (int i = 0; i < 200; ++i) {
    const Eigen::Index n = 2 + i % 5;
    const SupportPattern q = support_pattern(sparse_random(rng, n));
    std::vector<bool> sub = q.mask();
    std::bernoulli_distribution drop(0.5);
    for (auto&& b : sub)
      if (drop(rng)) b = false;
    const SupportPattern p(sub);
    ASSERT_TRUE(p.subset_of(q));
    const Point v = oracles::random_vec(rng, n, 1.0);
    EXPECT_LE(l0_norm(project(p, v)), l0_norm(project(q, v)));
  }
}

TEST(ComplementProject, Examples) {
  EXPECT_EQ(complement_project(mask({false, true}), vec({4, -6})), vec({4, 0}));
  EXPECT_EQ(complement_project(SupportPattern::full(3), vec({1, 2, 3})), vec({0, 0, 0}));
  EXPECT_EQ(complement_project(SupportPattern::empty(3), vec({1, 2, 3})), vec({1, 2, 3}));
}

TEST(Project, DimensionMismatchThrows) {
  EXPECT_THROW(project(mask({true, false}), vec({1, 2, 3})), DimensionError);
  EXPECT_THROW(complement_project(mask({true}), vec({1, 2})), DimensionError);
}

TEST(SnapZeros, OnlyInToleranceMode) {
  Point x = vec({1e-7, -5e-7, 2e-6, 1});
  snap_zeros(x, ZeroMode::exact());
  EXPECT_EQ(x, vec({1e-7, -5e-7, 2e-6, 1}));
  snap_zeros(x, ZeroMode::tol(1e-6));
  EXPECT_EQ(x, vec({0, 0, 2e-6, 1}));
  EXPECT_FALSE(std::signbit(x[1]));
}

TEST(Subdifferential, FullSupportIsZeroOnly) {
  const auto d = l0_subdifferential(vec({1, 2}));
  EXPECT_EQ(d.fixed_zero_indices, (std::vector<std::size_t>{0, 1}));
  EXPECT_TRUE(d.free_indices.empty());
  EXPECT_TRUE(membership_check(d, vec({0, 0})));
  EXPECT_FALSE(membership_check(d, vec({0.1, 0})));
}

TEST(Subdifferential, PartialSupport) {
  const auto d = l0_subdifferential(vec({0, 3}));
  EXPECT_EQ(d.fixed_zero_indices, (std::vector<std::size_t>{1}));
  EXPECT_EQ(d.free_indices, (std::vector<std::size_t>{0}));
  EXPECT_TRUE(membership_check(d, vec({17, 0})));
  EXPECT_FALSE(membership_check(d, vec({17, 1e-300})));
}

TEST(Subdifferential, ZeroPointIsEverything) {
  const auto d = l0_subdifferential(vec({0, 0}));
  EXPECT_TRUE(d.fixed_zero_indices.empty());
  EXPECT_EQ(d.free_indices.size(), 2u);
  EXPECT_TRUE(membership_check(d, vec({-3, 8})));
}

TEST(Subdifferential, MembershipMatchesVanishingOnSupport) {
  std::mt19937_64 rng(5);
  std::bernoulli_distribution coin(0.5);
  for (int i = 0; i < 20; ++i) {
    const Eigen::Index n = 1 + i % 6;
    const Point x = sparse_random(rng, n);
    const auto d = l0_subdifferential(x);
    EXPECT_EQ(d.dim(), static_cast<std::size_t>(n));
    EXPECT_TRUE(membership_check(d, Point::Zero(n)));
    for (int c = 0; c < 100; ++c) {
      Point v = oracles::random_vec(rng, n, 2.0);
      for (Eigen::Index j = 0; j < n; ++j)
        if (coin(rng)) v[j] = 0.0;
      bool vanishes = true;
      for (Eigen::Index j = 0; j < n; ++j) vanishes = vanishes && (x[j] == 0.0 || v[j] == 0.0);
      EXPECT_EQ(membership_check(d, v), vanishes);
    }
  }
}

TEST(Subdifferential, MembershipDimensionMismatchThrows) {
  EXPECT_THROW(membership_check(l0_subdifferential(vec({1, 0})), vec({0})), DimensionError);
}
