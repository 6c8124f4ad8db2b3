#pragma once

// Brute-force certificates for small instances.
//
// Every minimizer of f over a support subspace {x : x_i = 0 off S} is a
// local minimizer of f + ||.||_0, so enumerating all 2^n supports of a
// quadratic yields every such point and the global minimum. Restricted
// problems are solved directly (Cholesky, least-norm fallback) and share
// no code path with the iterative solvers.

#include "ell0/core.hpp"
#include "ell0/l0calc.hpp"
#include "ell0/solvers.hpp"

#include <cstdint>
#include <vector>

namespace ell0 {

enum class RestrictedStatus { Optimal, Degenerate, Unbounded };

inline const char* to_string(RestrictedStatus s) {
  switch (s) {
    case RestrictedStatus::Optimal: return "Optimal";
    case RestrictedStatus::Degenerate: return "Degenerate";
    case RestrictedStatus::Unbounded: return "Unbounded";
  }
  return "?";
}

struct CatalogEntry {
  SupportPattern support;
  Point minimizer;
  double f = 0.0;
  std::size_t l0_effective = 0;  // a restricted minimizer may vanish on part of S
  double total = 0.0;
  RestrictedStatus status = RestrictedStatus::Optimal;

  bool is_local_min() const { return status != RestrictedStatus::Unbounded; }
};

struct SupportCatalog {
  std::vector<CatalogEntry> entries;  // entry s has support bits s
  std::vector<std::size_t> global_best;
  static constexpr double tie_tolerance = 1e-9;

  double global_best_total() const { return entries.at(global_best.at(0)).total; }

  // Distinct restricted minimizers, in catalog order.
  std::vector<Point> local_minimizers(double tol = 1e-9) const {
    std::vector<Point> out;
    for (const auto& e : entries) {
      if (!e.is_local_min()) continue;
      bool seen = false;
      for (const auto& p : out) seen = seen || (p - e.minimizer).cwiseAbs().maxCoeff() <= tol;
      if (!seen) out.push_back(e.minimizer);
    }
    return out;
  }
};

inline constexpr Eigen::Index oracle_hard_cap = 20;

namespace detail {

inline CatalogEntry solve_restricted(const QuadraticObjective& f, const SupportPattern& support, ZeroMode mode) {
  const Eigen::Index n = f.dim();
  std::vector<Eigen::Index> idx;
  for (Eigen::Index i = 0; i < n; ++i)
    if (support[static_cast<std::size_t>(i)]) idx.push_back(i);

  CatalogEntry e;
  e.support = support;
  e.minimizer = Point::Zero(n);
  if (!idx.empty()) {
    const auto k = static_cast<Eigen::Index>(idx.size());
    Matrix h(k, k);
    Point rhs(k);
    for (Eigen::Index r = 0; r < k; ++r) {
      rhs[r] = -f.b()[idx[r]];
      for (Eigen::Index c = 0; c < k; ++c) h(r, c) = 2.0 * f.q()(idx[r], idx[c]);
    }
    Point sol;
    Eigen::LLT<Matrix> llt(h);
    const double scale = std::max(1.0, h.cwiseAbs().maxCoeff());
    bool definite = llt.info() == Eigen::Success &&
                    llt.matrixL().toDenseMatrix().diagonal().minCoeff() > 1e-7 * std::sqrt(scale);
    if (definite) {
      sol = llt.solve(rhs);
    } else {
      Eigen::CompleteOrthogonalDecomposition<Matrix> cod(h);
      sol = cod.solve(rhs);
      const double residual = (h * sol - rhs).norm();
      e.status = residual <= 1e-9 * std::max(1.0, rhs.norm()) ? RestrictedStatus::Degenerate
                                                               : RestrictedStatus::Unbounded;
    }
    for (Eigen::Index r = 0; r < k; ++r) e.minimizer[idx[r]] = sol[r];
  }
  e.f = f.value(e.minimizer);
  e.l0_effective = l0_norm(e.minimizer, mode);
  e.total = e.f + static_cast<double>(e.l0_effective);
  return e;
}

}  // namespace detail

inline SupportCatalog enumerate_supports(const QuadraticObjective& f, Eigen::Index cap = oracle_hard_cap,
                                         ZeroMode mode = ZeroMode::exact()) {
  const Eigen::Index n = f.dim();
  if (n > std::min(cap, oracle_hard_cap)) {
    throw ConfigError("enumerate_supports: dimension " + std::to_string(n) + " exceeds the cap of " +
                      std::to_string(std::min(cap, oracle_hard_cap)));
  }
  SupportCatalog cat;
  const std::uint64_t count = std::uint64_t{1} << n;
  cat.entries.reserve(count);
  for (std::uint64_t bits = 0; bits < count; ++bits)
    cat.entries.push_back(detail::solve_restricted(f, SupportPattern::from_bits(bits, static_cast<std::size_t>(n)), mode));

  double best = std::numeric_limits<double>::infinity();
  for (const auto& e : cat.entries)
    if (e.is_local_min()) best = std::min(best, e.total);
  const double tie = SupportCatalog::tie_tolerance * std::max(1.0, std::abs(best));
  for (std::size_t i = 0; i < cat.entries.size(); ++i)
    if (cat.entries[i].is_local_min() && cat.entries[i].total <= best + tie) cat.global_best.push_back(i);
  return cat;
}

// x is certified when it sits (within tol, sup norm) on the restricted
// minimizer of its own support.
inline bool verify_local_min(const SupportCatalog& cat, const Point& x, double tol,
                             ZeroMode mode = ZeroMode::exact()) {
  const SupportPattern supp = support_pattern(x, mode);
  for (const auto& e : cat.entries) {
    if (!e.is_local_min() || e.support != supp) continue;
    if ((x - e.minimizer).cwiseAbs().maxCoeff() <= tol) return true;
  }
  return false;
}

inline bool verify_local_min(const QuadraticObjective& f, const Point& x, double tol,
                             ZeroMode mode = ZeroMode::exact()) {
  require_dim(f.dim(), x.size(), "verify_local_min");
  return verify_local_min(enumerate_supports(f), x, tol, mode);
}

inline constexpr Eigen::Index pareto_grid_cap = 3;

// Searches the sup-norm ball of the given radius around x on a regular grid
// (plus exact zeros, so support hyperplanes are sampled) for a point z with
// F_i(z) + ||z||_0 <= F_i(x) + ||x||_0 for all i, strictly for one. Returns
// true when no such point exists. A falsifier, not a proof.
inline bool pareto_grid_check(const VectorObjective& F, const Point& x, double radius, double grid_step,
                              double margin = 1e-9) {
  const Eigen::Index n = F.dim();
  require_dim(n, x.size(), "pareto_grid_check");
  if (n > pareto_grid_cap) throw ConfigError("pareto_grid_check: dimension above 3");
  if (!(radius > 0.0) || !(grid_step > 0.0)) throw ConfigError("pareto_grid_check: radius and step must be positive");

  const auto half = static_cast<long>(std::floor(radius / grid_step + 1e-9));
  std::vector<std::vector<double>> axes(static_cast<std::size_t>(n));
  for (Eigen::Index i = 0; i < n; ++i) {
    auto& axis = axes[static_cast<std::size_t>(i)];
    bool near_zero = false;
    for (long j = -half; j <= half; ++j) {
      const double v = x[i] + static_cast<double>(j) * grid_step;
      axis.push_back(v);
      near_zero = near_zero || std::abs(v) < grid_step;
    }
    if (near_zero) axis.push_back(0.0);
  }

  const double x_l0 = static_cast<double>(l0_norm(x));
  const Point fx = F.values(x).array() + x_l0;

  std::vector<std::size_t> counter(static_cast<std::size_t>(n), 0);
  Point z(n);
  while (true) {
    for (Eigen::Index i = 0; i < n; ++i) z[i] = axes[static_cast<std::size_t>(i)][counter[static_cast<std::size_t>(i)]];
    const Point fz = F.values(z).array() + static_cast<double>(l0_norm(z));
    bool all_le = true;
    bool some_lt = false;
    for (Eigen::Index i = 0; i < fz.size(); ++i) {
      all_le = all_le && fz[i] <= fx[i] + margin;
      some_lt = some_lt || fz[i] < fx[i] - margin;
    }
    if (all_le && some_lt) return false;

    std::size_t d = 0;
    while (d < counter.size() && ++counter[d] == axes[d].size()) counter[d++] = 0;
    if (d == counter.size()) break;
  }
  return true;
}

}  // namespace ell0
