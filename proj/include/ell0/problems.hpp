#pragma once

// Built-in test problems and a seeded random strictly-convex quadratic generator.

#include "ell0/core.hpp"
#include "ell0/solvers.hpp"

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace ell0 {

struct IntendedMinimizer {
  Point point;
  double total = 0.0;
  std::string note;
};

struct ProblemSpec {
  std::string name;
  std::vector<QuadraticObjective> objectives;
  std::vector<IntendedMinimizer> intended_minimizers;

  Eigen::Index dim() const { return objectives.front().dim(); }
  Eigen::Index num_objectives() const { return static_cast<Eigen::Index>(objectives.size()); }

  VectorObjective vector_objective() const {
    std::vector<SmoothObjective> comps(objectives.begin(), objectives.end());
    return VectorObjective(std::move(comps));
  }
};

inline const std::vector<std::string>& builtin_names() {
  static const std::vector<std::string> names{"ex1_scalar", "ex2_biobjective", "ex3_max"};
  return names;
}

namespace detail {

inline QuadraticObjective make_quadratic(std::initializer_list<std::initializer_list<double>> q,
                                         std::initializer_list<double> b, double c) {
  const auto n = static_cast<Eigen::Index>(b.size());
  Matrix qm(n, n);
  Eigen::Index r = 0;
  for (const auto& row : q) {
    Eigen::Index col = 0;
    for (double v : row) qm(r, col++) = v;
    ++r;
  }
  return QuadraticObjective(qm, Point(Eigen::Map<const Point>(b.begin(), n)), c);
}

inline Point point(std::initializer_list<double> v) {
  return Point(Eigen::Map<const Point>(v.begin(), static_cast<Eigen::Index>(v.size())));
}

}  // namespace detail

inline ProblemSpec builtin(const std::string& name) {
  using detail::make_quadratic;
  using detail::point;
  if (name == "ex1_scalar") {
    // x^2 + 2y^2 - 2x - 2xy + 3
    ProblemSpec p{name, {make_quadratic({{1, -1}, {-1, 2}}, {-2, 0}, 3)}, {}};
    p.intended_minimizers = {{point({2, 1}), 3.0, "full support, unconstrained minimizer"},
                             {point({1, 0}), 3.0, "minimizer on the hyperplane y = 0"},
                             {point({0, 0}), 3.0, "origin"}};
    return p;
  }
  if (name == "ex2_biobjective") {
    // f1 = (x - 1)^2 + y^2,  f2 = x^2 + (y - 2)^2
    return ProblemSpec{name,
                       {make_quadratic({{1, 0}, {0, 1}}, {-2, 0}, 1), make_quadratic({{1, 0}, {0, 1}}, {0, -4}, 4)},
                       {}};
  }
  if (name == "ex3_max") {
    // f1 = (x - 2)^2,  f2 = (x + 1)^2 + 1
    return ProblemSpec{name, {make_quadratic({{1}}, {-4}, 4), make_quadratic({{1}}, {2}, 2)}, {}};
  }
  std::string list;
  for (const auto& n : builtin_names()) list += (list.empty() ? "" : ", ") + n;
  throw ConfigError("unknown problem '" + name + "'; available: " + list);
}

// m objectives Q = R^T D R (R orthogonal from a QR of a Gaussian matrix, D
// uniform in [1, condition_bound]), b uniform in [-5, 5]^n, c uniform in [-1, 1].
inline ProblemSpec random_quadratic(std::uint64_t seed, Eigen::Index n, Eigen::Index m, double condition_bound) {
  if (n < 1 || m < 1) throw ConfigError("random_quadratic: n and m must be positive");
  if (!(condition_bound >= 1.0)) throw ConfigError("random_quadratic: condition_bound must be >= 1");
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  std::uniform_real_distribution<double> spectrum(1.0, condition_bound);
  std::uniform_real_distribution<double> linear(-5.0, 5.0);
  std::uniform_real_distribution<double> offset(-1.0, 1.0);

  ProblemSpec p;
  p.name = "random_s" + std::to_string(seed) + "_n" + std::to_string(n) + "_m" + std::to_string(m);
  for (Eigen::Index obj = 0; obj < m; ++obj) {
    Matrix g(n, n);
    for (Eigen::Index j = 0; j < n; ++j)
      for (Eigen::Index i = 0; i < n; ++i) g(i, j) = normal(rng);
    Matrix r = Eigen::HouseholderQR<Matrix>(g).householderQ() * Matrix::Identity(n, n);
    Point d(n);
    for (Eigen::Index i = 0; i < n; ++i) d[i] = condition_bound == 1.0 ? 1.0 : spectrum(rng);
    Matrix q = r.transpose() * d.asDiagonal() * r;
    Point b(n);
    for (Eigen::Index i = 0; i < n; ++i) b[i] = linear(rng);
    const double c = offset(rng);
    p.objectives.push_back(QuadraticObjective::symmetrized(q, std::move(b), c));
  }
  return p;
}

}  // namespace ell0
