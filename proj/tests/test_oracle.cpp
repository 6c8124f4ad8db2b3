#include "ell0/oracle.hpp"
#include "ell0/problems.hpp"
#include "support/oracles.hpp"

#include <gtest/gtest.h>

#include <random>

using namespace ell0;
using oracles::vec;

namespace {

QuadraticObjective ex1() { return builtin("ex1_scalar").objectives.front(); }

QuadraticObjective shifted_square() {  // (x - 3)^2
  return QuadraticObjective(Matrix::Identity(1, 1), vec({-6}), 9);
}

}  // namespace

TEST(EnumerateSupports, ScalarExampleCatalog) {
  const SupportCatalog cat = enumerate_supports(ex1());
  ASSERT_EQ(cat.entries.size(), 4u);
  // entry s has support bits s: 00, 10, 01, 11
  const std::vector<Point> minimizers{vec({0, 0}), vec({1, 0}), vec({0, 0}), vec({2, 1})};
  const std::vector<std::size_t> l0{0, 1, 0, 2};
  for (std::size_t s = 0; s < 4; ++s) {
    EXPECT_EQ(cat.entries[s].support.to_bits(), s);
    EXPECT_LT((cat.entries[s].minimizer - minimizers[s]).norm(), 1e-12) << "support " << s;
    EXPECT_EQ(cat.entries[s].l0_effective, l0[s]);
    EXPECT_NEAR(cat.entries[s].total, 3.0, 1e-12);
    EXPECT_EQ(cat.entries[s].status, RestrictedStatus::Optimal);
  }
  EXPECT_EQ(cat.global_best.size(), 4u);
  EXPECT_NEAR(cat.global_best_total(), 3.0, 1e-12);
  const auto mins = cat.local_minimizers();
  ASSERT_EQ(mins.size(), 3u);
}

TEST(EnumerateSupports, SquaredNormHasOriginEverywhere) {
  const QuadraticObjective f(Matrix::Identity(3, 3), Point::Zero(3), 0);
  const SupportCatalog cat = enumerate_supports(f);
  ASSERT_EQ(cat.entries.size(), 8u);
  for (const auto& e : cat.entries) {
    EXPECT_EQ(e.minimizer, Point::Zero(3));
    EXPECT_EQ(e.total, 0.0);
  }
  EXPECT_EQ(cat.local_minimizers().size(), 1u);
}

TEST(EnumerateSupports, OneDimensionalShiftedSquare) {
  const SupportCatalog cat = enumerate_supports(shifted_square());
  ASSERT_EQ(cat.entries.size(), 2u);
  EXPECT_EQ(cat.entries[0].total, 9.0);
  EXPECT_NEAR(cat.entries[1].minimizer[0], 3.0, 1e-15);
  EXPECT_NEAR(cat.entries[1].total, 1.0, 1e-12);
  ASSERT_EQ(cat.global_best.size(), 1u);
  EXPECT_EQ(cat.global_best[0], 1u);
}

TEST(EnumerateSupports, AgreesWithIndependentSolveAndIsStationary) {
  for (int seed = 0; seed < 10; ++seed) {
    const ProblemSpec p = random_quadratic(seed, 2 + seed % 6, 1, 50.0);
    const auto& f = p.objectives.front();
    const SupportCatalog cat = enumerate_supports(f);
    ASSERT_EQ(cat.entries.size(), std::size_t{1} << f.dim());
    for (const auto& e : cat.entries) {
      const Point ref = oracles::restricted_minimizer(f.q(), f.b(), e.support.mask());
      EXPECT_LT((e.minimizer - ref).norm(), 1e-9 * std::max(1.0, ref.norm()));
      EXPECT_LT(project(e.support, f.gradient(e.minimizer)).norm(), 1e-9 * std::max(1.0, f.b().norm()));
      EXPECT_EQ(complement_project(e.support, e.minimizer), Point::Zero(f.dim()));
      EXPECT_EQ(e.status, RestrictedStatus::Optimal);
    }
    // strictly convex: distinct restricted minimizers per distinct effective support
    EXPECT_EQ(cat.local_minimizers().size(), cat.entries.size());
  }
}

TEST(EnumerateSupports, GlobalBestLowerBoundsSolverTraces) {
  std::mt19937_64 rng(3);
  for (int seed = 0; seed < 10; ++seed) {
    const ProblemSpec p = random_quadratic(50 + seed, 2 + seed % 5, 1, 10.0);
    const auto& f = p.objectives.front();
    const SupportCatalog cat = enumerate_supports(f);
    SolverConfig c;
    c.step_t = 0.9 / f.lipschitz();
    c.max_iter = 100000;
    Point x0 = oracles::random_vec(rng, f.dim(), 4.0);
    x0[0] = 0.0;
    const SolverTrace t = solve_l0_descent(f, x0, c);
    EXPECT_GE(t.best_value - cat.global_best_total(), -1e-7);
    EXPECT_TRUE(verify_local_min(cat, t.best_point, 1e-4));
  }
}

TEST(EnumerateSupports, SingularRestrictionsAreFlagged) {
  // f = (x1 + x2)^2 - 2 x1: unbounded below on the full support, fine on axes
  Matrix q(2, 2);
  q << 1, 1, 1, 1;
  const SupportCatalog cat = enumerate_supports(QuadraticObjective(q, vec({-2, 0}), 0));
  EXPECT_EQ(cat.entries[1].status, RestrictedStatus::Optimal);
  EXPECT_EQ(cat.entries[3].status, RestrictedStatus::Unbounded);
  EXPECT_FALSE(cat.entries[3].is_local_min());
  // f = (x1 + x2)^2: singular but consistent, least-norm solution
  const SupportCatalog flat = enumerate_supports(QuadraticObjective(q, vec({0, 0}), 0));
  EXPECT_EQ(flat.entries[3].status, RestrictedStatus::Degenerate);
  EXPECT_TRUE(flat.entries[3].is_local_min());
}

TEST(EnumerateSupports, DimensionCap) {
  const QuadraticObjective big(Matrix::Identity(21, 21), Point::Zero(21), 0);
  EXPECT_THROW(enumerate_supports(big), ConfigError);
  const QuadraticObjective mid(Matrix::Identity(5, 5), Point::Zero(5), 0);
  EXPECT_THROW(enumerate_supports(mid, 4), ConfigError);
}

TEST(VerifyLocalMin, Examples) {
  EXPECT_TRUE(verify_local_min(ex1(), vec({1, 0}), 1e-6));
  EXPECT_TRUE(verify_local_min(ex1(), vec({2, 1}), 1e-6));
  EXPECT_TRUE(verify_local_min(ex1(), vec({0, 0}), 1e-6));
  EXPECT_FALSE(verify_local_min(ex1(), vec({1.5, 0}), 1e-6));
  // near (1, 0) but with full support: its own hyperplane's minimizer is (2, 1)
  EXPECT_FALSE(verify_local_min(ex1(), vec({1, 1e-9}), 1e-6));
  EXPECT_TRUE(verify_local_min(ex1(), vec({1, 1e-9}), 1e-6, ZeroMode::tol(1e-6)));
}

TEST(VerifyLocalMin, IntendedMinimizersOfBuiltins) {
  const ProblemSpec p = builtin("ex1_scalar");
  for (const auto& m : p.intended_minimizers) {
    EXPECT_TRUE(verify_local_min(p.objectives.front(), m.point, 1e-9)) << m.note;
    EXPECT_DOUBLE_EQ(p.objectives.front().value(m.point) + static_cast<double>(l0_norm(m.point)), m.total);
  }
}

TEST(ParetoGridCheck, BiobjectiveExample) {
  const ProblemSpec p = builtin("ex2_biobjective");
  const VectorObjective F = p.vector_objective();
  EXPECT_TRUE(pareto_grid_check(F, vec({0.5, 1}), 0.2, 0.01));
  EXPECT_FALSE(pareto_grid_check(F, vec({10, 10}), 0.2, 0.01));
  // a point just off the axis is dominated by its axis projection (l0 drops)
  EXPECT_FALSE(pareto_grid_check(F, vec({0.005, 1}), 0.2, 0.01));
}

TEST(ParetoGridCheck, SingleObjectiveAgreesWithLocalMin) {
  const QuadraticObjective f = ex1();
  const VectorObjective F({SmoothObjective(f)});
  for (const Point& x : {vec({2, 1}), vec({1, 0}), vec({0, 0}), vec({1.5, 0}), vec({1, 0.5})})
    EXPECT_EQ(pareto_grid_check(F, x, 0.2, 0.01), verify_local_min(f, x, 1e-9)) << x.transpose();
}

TEST(ParetoGridCheck, Guards) {
  const VectorObjective F({SmoothObjective(QuadraticObjective(Matrix::Identity(4, 4), Point::Zero(4), 0))});
  EXPECT_THROW(pareto_grid_check(F, Point::Zero(4), 0.2, 0.01), ConfigError);
  const VectorObjective G({SmoothObjective(ex1())});
  EXPECT_THROW(pareto_grid_check(G, vec({1, 1}), 0.0, 0.01), ConfigError);
  EXPECT_THROW(pareto_grid_check(G, vec({1}), 0.2, 0.01), DimensionError);
}
