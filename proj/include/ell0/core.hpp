#pragma once

// Foundational numeric types shared by every ell0 module: points, dense
// quadratic objectives and the type-erased smooth-objective contract.

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <concepts>
#include <cstdint>
#include <functional>
#include <limits>
#include <random>
#include <stdexcept>
#include <string>
#include <utility>

namespace ell0 {

using Point = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Error hierarchy ----------------------------------------------------------

struct Error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct DimensionError : Error {
  using Error::Error;
};

struct ConfigError : Error {
  using Error::Error;
};

struct NumericError : Error {
  using Error::Error;
};

inline bool all_finite(const Point& x) { return x.allFinite(); }

inline void require_dim(Eigen::Index expected, Eigen::Index got, const char* what) {
  if (expected != got) {
    throw DimensionError(std::string(what) + ": dimension mismatch (expected " +
                         std::to_string(expected) + ", got " + std::to_string(got) + ")");
  }
}

inline void require_finite(const Point& x, const char* what) {
  if (!all_finite(x)) throw NumericError(std::string(what) + ": non-finite coordinate");
}

// Anything the solvers can minimize: a convex C^1 function with an L-Lipschitz gradient.
template <typename F>
concept SmoothFunction = requires(const F& f, const Point& x) {
  { f.dim() } -> std::convertible_to<Eigen::Index>;
  { f.value(x) } -> std::convertible_to<double>;
  { f.gradient(x) } -> std::convertible_to<Point>;
  { f.lipschitz() } -> std::convertible_to<double>;
};

// Power iteration / Gershgorin ---------------------------------------------

struct PowerIterationOptions {
  double tolerance = 1e-10;
  int max_iterations = 10000;
  std::uint64_t seed = 0x5eed;
};

struct EigenEstimate {
  double value = 0.0;
  double residual = 0.0;
  bool converged = false;
  int iterations = 0;
};

// Gershgorin upper bound on the spectrum of a symmetric matrix.
inline double gershgorin_upper_bound(const Matrix& m) {
  double bound = -std::numeric_limits<double>::infinity();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    double off = m.row(i).cwiseAbs().sum() - std::abs(m(i, i));
    bound = std::max(bound, m(i, i) + off);
  }
  return bound;
}

// Largest eigenvalue of a symmetric positive semidefinite matrix. Stops once
// the eigen-residual ||Mv - rho v|| falls below tolerance * max(1, |rho|).
inline EigenEstimate power_iteration_max_eigenvalue(const Matrix& m,
                                                    const PowerIterationOptions& opts = {}) {
  const Eigen::Index n = m.rows();
  std::mt19937_64 rng(opts.seed);
  std::normal_distribution<double> normal(0.0, 1.0);
  Point v(n);
  for (Eigen::Index i = 0; i < n; ++i) v[i] = normal(rng);
  v.normalize();

  EigenEstimate est;
  for (int it = 1; it <= opts.max_iterations; ++it) {
    Point mv = m * v;
    const double rho = v.dot(mv);
    const double residual = (mv - rho * v).norm();
    est.value = rho;
    est.residual = residual;
    est.iterations = it;
    if (residual <= opts.tolerance * std::max(1.0, std::abs(rho))) {
      est.converged = true;
      return est;
    }
    const double norm = mv.norm();
    if (norm == 0.0) {  // v in the null space: M = 0 on span(v); restart is pointless
      est.converged = (m.norm() == 0.0);
      return est;
    }
    v = mv / norm;
  }
  return est;
}

inline bool is_symmetric(const Matrix& q, double tol = 1e-12) {
  if (q.rows() != q.cols()) return false;
  const double scale = std::max(1.0, q.cwiseAbs().maxCoeff());
  return (q - q.transpose()).cwiseAbs().maxCoeff() <= tol * scale;
}

// QuadraticObjective -------------------------------------------------------

// f(x) = x^T Q x + b^T x + c with Q symmetric positive semidefinite.
class QuadraticObjective {
 public:
  QuadraticObjective(Matrix q, Point b, double c) : q_(std::move(q)), b_(std::move(b)), c_(c) {
    if (q_.rows() == 0 || q_.rows() != q_.cols()) throw DimensionError("QuadraticObjective: Q must be square and non-empty");
    require_dim(q_.rows(), b_.size(), "QuadraticObjective: b");
    if (!q_.allFinite() || !b_.allFinite() || !std::isfinite(c_)) throw NumericError("QuadraticObjective: non-finite coefficient");
    if (!is_symmetric(q_)) throw ConfigError("QuadraticObjective: Q is not symmetric (use symmetrized())");
    q_ = 0.5 * (q_ + q_.transpose());
    lipschitz_ = estimate_lipschitz(q_);
  }

  // Canonicalizes a user-supplied (possibly non-symmetric) quadratic form via (Q + Q^T)/2.
  static QuadraticObjective symmetrized(const Matrix& q, Point b, double c) {
    if (q.rows() != q.cols()) throw DimensionError("QuadraticObjective: Q must be square");
    return QuadraticObjective(0.5 * (q + q.transpose()), std::move(b), c);
  }

  Eigen::Index dim() const { return q_.rows(); }
  const Matrix& q() const { return q_; }
  const Point& b() const { return b_; }
  double c() const { return c_; }

  double value(const Point& x) const {
    require_dim(dim(), x.size(), "quadratic_eval");
    return x.dot(q_ * x) + b_.dot(x) + c_;
  }

  Point gradient(const Point& x) const {
    require_dim(dim(), x.size(), "quadratic_grad");
    return 2.0 * (q_ * x) + b_;
  }

  double lipschitz() const { return lipschitz_; }

  // 2 * lambda_max(Q) by power iteration, Gershgorin bound when it stalls.
  static double estimate_lipschitz(const Matrix& q) {
    if (!is_symmetric(q)) throw ConfigError("estimate_lipschitz: Q is not symmetric");
    const EigenEstimate est = power_iteration_max_eigenvalue(q);
    const double gersh = gershgorin_upper_bound(q);
    // the Rayleigh quotient sits below lambda_max, so pad it to keep t * L < 1 honest
    const double lambda =
        est.converged ? std::min(gersh, est.value + est.residual + 8 * std::numeric_limits<double>::epsilon() * std::max(1.0, std::abs(est.value))) : gersh;
    return 2.0 * std::max(lambda, 0.0);
  }

 private:
  Matrix q_;
  Point b_;
  double c_;
  double lipschitz_ = 0.0;
};

inline double quadratic_eval(const QuadraticObjective& q, const Point& x) { return q.value(x); }
inline Point quadratic_grad(const QuadraticObjective& q, const Point& x) { return q.gradient(x); }
inline double estimate_lipschitz(const QuadraticObjective& q) {
  return QuadraticObjective::estimate_lipschitz(q.q());
}

// SmoothObjective ----------------------------------------------------------

// Type-erased smooth objective; copies share nothing mutable.
class SmoothObjective {
 public:
  using EvalFn = std::function<double(const Point&)>;
  using GradFn = std::function<Point(const Point&)>;

  SmoothObjective(Eigen::Index dim, EvalFn eval, GradFn grad, double lipschitz_grad)
      : dim_(dim), eval_(std::move(eval)), grad_(std::move(grad)), lipschitz_(lipschitz_grad) {
    if (dim_ < 1) throw DimensionError("SmoothObjective: dimension must be positive");
    if (!(lipschitz_ > 0.0) || !std::isfinite(lipschitz_))
      throw ConfigError("SmoothObjective: Lipschitz constant must be positive and finite");
  }

  template <SmoothFunction F>
    requires(!std::same_as<std::remove_cvref_t<F>, SmoothObjective>)
  SmoothObjective(const F& f)  // NOLINT(google-explicit-constructor)
      : SmoothObjective(
            f.dim(), [f](const Point& x) { return f.value(x); },
            [f](const Point& x) { return Point(f.gradient(x)); },
            // a zero Hessian still needs a positive step bound
            std::max(static_cast<double>(f.lipschitz()), std::numeric_limits<double>::min())) {}

  Eigen::Index dim() const { return dim_; }

  double value(const Point& x) const {
    require_dim(dim_, x.size(), "SmoothObjective::value");
    return eval_(x);
  }

  Point gradient(const Point& x) const {
    require_dim(dim_, x.size(), "SmoothObjective::gradient");
    Point g = grad_(x);
    require_dim(dim_, g.size(), "SmoothObjective::gradient result");
    return g;
  }

  double lipschitz() const { return lipschitz_; }

 private:
  Eigen::Index dim_;
  EvalFn eval_;
  GradFn grad_;
  double lipschitz_;
};

static_assert(SmoothFunction<QuadraticObjective>);
static_assert(SmoothFunction<SmoothObjective>);

}  // namespace ell0
