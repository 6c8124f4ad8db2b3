#pragma once

// Support-projected descent methods for f(x) + ||x||_0 and its
// multiobjective scalarizations:
//
//   solve_l0_descent     x+ = x - t P(x) grad f(x)             (stops on ||P grad f|| < eps)
//   solve_l0_multistart  same, plus escape steps x - t (I - P) grad f out of a converged hyperplane
//   solve_weight_sum     descent on sum_i w_i f_i
//   solve_gerstewitz     subgradient steps on phi_A(f_1, ..., f_m), best-point bookkeeping
//
// P(x) is the support projection of the current iterate, so once a component
// reaches zero it stays there.

#include "ell0/core.hpp"
#include "ell0/l0calc.hpp"
#include "ell0/scalarize.hpp"

#include <cmath>
#include <cstddef>
#include <limits>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <vector>

namespace ell0 {

struct SolverConfig {
  double step_t = 0.1;
  double eps_stop = 1e-6;
  std::size_t max_iter = 10000;
  ZeroMode zero_mode = ZeroMode::exact();
  bool snap = true;                          // only acts in tol mode
  std::optional<std::size_t> escape_limit;   // multistart only; defaults to 2n
  double divergence_factor = 1e6;

  void validate() const {
    if (!(step_t > 0.0) || !std::isfinite(step_t)) throw ConfigError("solver: step_t must be positive");
    if (!(eps_stop > 0.0)) throw ConfigError("solver: eps_stop must be positive");
    if (max_iter < 1) throw ConfigError("solver: max_iter must be at least 1");
    if (zero_mode.is_tol() && !(zero_mode.eps > 0.0)) throw ConfigError("solver: eps_zero must be positive");
  }

  bool snapping() const { return snap && zero_mode.is_tol(); }
};

enum class StepKind { initial, projected, escape, subgradient };
enum class Terminal { Converged, MaxIter, EscapesExhausted };

inline const char* to_string(StepKind k) {
  switch (k) {
    case StepKind::initial: return "init";
    case StepKind::projected: return "projected";
    case StepKind::escape: return "escape";
    case StepKind::subgradient: return "subgradient";
  }
  return "?";
}

inline StepKind step_kind_from_string(const std::string& s) {
  if (s == "init") return StepKind::initial;
  if (s == "projected") return StepKind::projected;
  if (s == "escape") return StepKind::escape;
  if (s == "subgradient") return StepKind::subgradient;
  throw ConfigError("unknown step kind '" + s + "'");
}

inline const char* to_string(Terminal t) {
  switch (t) {
    case Terminal::Converged: return "Converged";
    case Terminal::MaxIter: return "MaxIter";
    case Terminal::EscapesExhausted: return "EscapesExhausted";
  }
  return "?";
}

struct TraceRow {
  std::size_t k = 0;
  Point x;
  double f = 0.0;  // smooth part (or phi_A o f for the Gerstewitz method)
  std::size_t l0 = 0;
  double total = 0.0;
  SupportPattern support;
  StepKind kind = StepKind::initial;
  // Norm of the direction evaluated at this iterate; NaN if never evaluated.
  double direction_norm = std::numeric_limits<double>::quiet_NaN();
};

struct SolverTrace {
  std::vector<TraceRow> rows;
  Terminal terminal = Terminal::MaxIter;
  Point best_point;
  double best_value = std::numeric_limits<double>::infinity();
  std::size_t escapes = 0;
  std::vector<std::size_t> candidate_rows;  // inner-convergence points (multistart)
  std::vector<std::string> warnings;

  const TraceRow& last() const { return rows.back(); }
  std::size_t iterations() const { return rows.empty() ? 0 : rows.size() - 1; }
};

// Numeric failure during a run; the partial trace travels with it.
class SolverNumericError : public NumericError {
 public:
  SolverNumericError(const std::string& what, SolverTrace trace)
      : NumericError(what), trace_(std::move(trace)) {}
  const SolverTrace& trace() const { return trace_; }

 private:
  SolverTrace trace_;
};

// m smooth objectives over a common R^n.
class VectorObjective {
 public:
  explicit VectorObjective(std::vector<SmoothObjective> components) : components_(std::move(components)) {
    if (components_.empty()) throw ConfigError("VectorObjective: at least one component is required");
    for (const auto& c : components_) {
      require_dim(components_.front().dim(), c.dim(), "VectorObjective: component");
      lipschitz_max_ = std::max(lipschitz_max_, c.lipschitz());
    }
  }

  Eigen::Index dim() const { return components_.front().dim(); }
  Eigen::Index size() const { return static_cast<Eigen::Index>(components_.size()); }
  const SmoothObjective& operator[](Eigen::Index i) const { return components_[static_cast<std::size_t>(i)]; }
  const std::vector<SmoothObjective>& components() const { return components_; }
  double lipschitz_max() const { return lipschitz_max_; }

  Point values(const Point& x) const {
    Point y(size());
    for (Eigen::Index i = 0; i < size(); ++i) y[i] = (*this)[i].value(x);
    return y;
  }

  // Rows are the component gradients.
  Matrix jacobian(const Point& x) const {
    Matrix j(size(), dim());
    for (Eigen::Index i = 0; i < size(); ++i) j.row(i) = (*this)[i].gradient(x).transpose();
    return j;
  }

  // sum_i c_i grad f_i(x), accumulated in component order.
  Point combined_gradient(const Point& coeffs, const Point& x) const {
    require_dim(size(), coeffs.size(), "combined_gradient");
    Point g = Point::Zero(dim());
    for (Eigen::Index i = 0; i < size(); ++i) g += coeffs[i] * (*this)[i].gradient(x);
    return g;
  }

 private:
  std::vector<SmoothObjective> components_;
  double lipschitz_max_ = 0.0;
};

namespace detail {

inline void check_step_against_lipschitz(const SolverConfig& cfg, double lipschitz, const char* who) {
  if (!(cfg.step_t * lipschitz < 1.0)) {
    throw ConfigError(std::string(who) + ": step too large, need t < 1/L (t = " + std::to_string(cfg.step_t) +
                      ", 1/L = " + std::to_string(1.0 / lipschitz) + ")");
  }
}

inline void check_start(const Point& x0, Eigen::Index dim, const char* who) {
  require_dim(dim, x0.size(), who);
  require_finite(x0, who);
}

inline TraceRow make_row(std::size_t k, const Point& x, double f, ZeroMode mode, StepKind kind) {
  TraceRow r;
  r.k = k;
  r.x = x;
  r.f = f;
  r.support = support_pattern(x, mode);
  r.l0 = r.support.popcount();
  r.total = f + static_cast<double>(r.l0);
  r.kind = kind;
  return r;
}

// Takes ownership of the trace on failure.
inline void guard_row(SolverTrace& trace, const SolverConfig& cfg, const char* who) {
  const TraceRow& row = trace.rows.back();
  if (!row.x.allFinite() || !std::isfinite(row.total)) {
    throw SolverNumericError(std::string(who) + ": non-finite iterate at k = " + std::to_string(row.k),
                             std::move(trace));
  }
  const double initial = trace.rows.front().total;
  if (row.total - initial > cfg.divergence_factor * std::max(1.0, std::abs(initial))) {
    throw SolverNumericError(std::string(who) + ": objective diverged at k = " + std::to_string(row.k) +
                                 " (check the step size)",
                             std::move(trace));
  }
}

inline Point take_step(const Point& x, double t, const Point& direction, const SolverConfig& cfg) {
  Point next = x - t * direction;
  if (cfg.snapping()) snap_zeros(next, cfg.zero_mode);
  return next;
}

inline void set_best_from_last(SolverTrace& trace) {
  trace.best_point = trace.last().x;
  trace.best_value = trace.last().total;
}

template <SmoothFunction F>
SolverTrace projected_descent(const F& f, const Point& x0, const SolverConfig& cfg, const char* who) {
  SolverTrace trace;
  Point x = x0;
  trace.rows.push_back(make_row(0, x, f.value(x), cfg.zero_mode, StepKind::initial));
  guard_row(trace, cfg, who);

  for (std::size_t k = 0;; ++k) {
    const SupportPattern& support = trace.rows.back().support;
    const Point direction = project(support, f.gradient(x));
    const double norm = direction.norm();
    trace.rows.back().direction_norm = norm;
    if (norm < cfg.eps_stop) {
      trace.terminal = Terminal::Converged;
      break;
    }
    if (k == cfg.max_iter) {
      trace.terminal = Terminal::MaxIter;
      break;
    }
    x = take_step(x, cfg.step_t, direction, cfg);
    trace.rows.push_back(make_row(k + 1, x, f.value(x), cfg.zero_mode, StepKind::projected));
    guard_row(trace, cfg, who);
  }
  set_best_from_last(trace);
  return trace;
}

}  // namespace detail

template <SmoothFunction F>
SolverTrace solve_l0_descent(const F& f, const Point& x0, const SolverConfig& cfg) {
  cfg.validate();
  detail::check_start(x0, f.dim(), "solve_l0_descent");
  detail::check_step_against_lipschitz(cfg, f.lipschitz(), "solve_l0_descent");
  return detail::projected_descent(f, x0, cfg, "solve_l0_descent");
}

// Projected descent that, after converging inside a support hyperplane,
// escapes along the complementary gradient and restarts. Ends when the full
// gradient vanishes, escapes run out, or an escape lands in a support
// pattern that was already visited.
template <SmoothFunction F>
SolverTrace solve_l0_multistart(const F& f, const Point& x0, const SolverConfig& cfg) {
  constexpr const char* who = "solve_l0_multistart";
  cfg.validate();
  detail::check_start(x0, f.dim(), who);
  detail::check_step_against_lipschitz(cfg, f.lipschitz(), who);
  const std::size_t escape_limit = cfg.escape_limit.value_or(2 * static_cast<std::size_t>(f.dim()));

  SolverTrace trace;
  Point x = x0;
  trace.rows.push_back(detail::make_row(0, x, f.value(x), cfg.zero_mode, StepKind::initial));
  detail::guard_row(trace, cfg, who);
  std::set<SupportPattern> visited{trace.rows.back().support};

  for (std::size_t k = 0;; ++k) {
    const SupportPattern support = trace.rows.back().support;
    const Point gradient = f.gradient(x);
    if (gradient.norm() < cfg.eps_stop) {
      trace.rows.back().direction_norm = gradient.norm();
      trace.candidate_rows.push_back(trace.rows.size() - 1);
      trace.terminal = Terminal::Converged;
      break;
    }

    Point direction = project(support, gradient);
    StepKind kind = StepKind::projected;
    if (direction.norm() < cfg.eps_stop) {
      trace.candidate_rows.push_back(trace.rows.size() - 1);
      if (trace.escapes >= escape_limit) {
        trace.rows.back().direction_norm = direction.norm();
        trace.terminal = Terminal::EscapesExhausted;
        break;
      }
      direction = complement_project(support, gradient);
      kind = StepKind::escape;
    }
    trace.rows.back().direction_norm = direction.norm();
    if (k == cfg.max_iter) {
      trace.terminal = Terminal::MaxIter;
      break;
    }

    x = detail::take_step(x, cfg.step_t, direction, cfg);
    if (kind == StepKind::escape) ++trace.escapes;
    trace.rows.push_back(detail::make_row(k + 1, x, f.value(x), cfg.zero_mode, kind));
    detail::guard_row(trace, cfg, who);

    const SupportPattern& next = trace.rows.back().support;
    if (trace.escapes > 0 && next != support && visited.contains(next)) {
      trace.terminal = Terminal::EscapesExhausted;
      break;
    }
    visited.insert(next);
  }

  if (trace.candidate_rows.empty()) {
    detail::set_best_from_last(trace);
  } else {
    for (std::size_t idx : trace.candidate_rows) {
      if (trace.rows[idx].total < trace.best_value) {
        trace.best_value = trace.rows[idx].total;
        trace.best_point = trace.rows[idx].x;
      }
    }
  }
  return trace;
}

// Smooth part sum_i w_i f_i of the weight-sum scalarization (l0 factors out
// because the weights sum to one).
inline SmoothObjective weighted_objective(const VectorObjective& F, const WeightVector& w) {
  require_dim(F.size(), w.size(), "weighted_objective: weights");
  const Point weights = w.values();
  return SmoothObjective(
      F.dim(),
      [F, weights](const Point& x) {
        double v = 0.0;
        for (Eigen::Index i = 0; i < F.size(); ++i) v += weights[i] * F[i].value(x);
        return v;
      },
      [F, weights](const Point& x) { return F.combined_gradient(weights, x); }, F.lipschitz_max());
}

inline SolverTrace solve_weight_sum(const VectorObjective& F, const WeightVector& w, const Point& x0,
                                    const SolverConfig& cfg) {
  constexpr const char* who = "solve_weight_sum";
  cfg.validate();
  require_dim(F.size(), w.size(), "solve_weight_sum: weights");
  detail::check_start(x0, F.dim(), who);
  detail::check_step_against_lipschitz(cfg, F.lipschitz_max(), who);
  return detail::projected_descent(weighted_objective(F, w), x0, cfg, who);
}

// Constant-step subgradient method on phi_A(f_1(x), ..., f_m(x)) + ||x||_0.
// The answer is the best point seen, not the last iterate.
inline SolverTrace solve_gerstewitz(const VectorObjective& F, const PolyhedralScalarizer& s, const Point& x0,
                                    const SolverConfig& cfg) {
  constexpr const char* who = "solve_gerstewitz";
  cfg.validate();
  if (s.dim() != F.size()) {
    throw DimensionError("solve_gerstewitz: scalarizer dimension " + std::to_string(s.dim()) +
                         " does not match the number of objectives " + std::to_string(F.size()));
  }
  detail::check_start(x0, F.dim(), who);

  SolverTrace trace;
  if (!s.pareto_safe() && F.size() > 1) {
    trace.warnings.emplace_back(
        "scalarizer set A does not satisfy A - R^m_+ in A; minimizers need not be Pareto optimal");
  }

  Point x = x0;
  Point values = F.values(x);
  double phi = s.eval(values);
  trace.rows.push_back(detail::make_row(0, x, phi, cfg.zero_mode, StepKind::initial));
  detail::guard_row(trace, cfg, who);
  trace.best_point = x;
  trace.best_value = trace.rows.back().total;

  for (std::size_t k = 0;; ++k) {
    if (k == cfg.max_iter) {
      trace.terminal = Terminal::MaxIter;
      break;
    }
    const SupportPattern& support = trace.rows.back().support;
    const Point g = s.subgradient(values);
    const Point direction = project(support, F.combined_gradient(g, x));
    trace.rows.back().direction_norm = direction.norm();

    x = detail::take_step(x, cfg.step_t, direction, cfg);
    values = F.values(x);
    const double next_phi = s.eval(values);
    trace.rows.push_back(detail::make_row(k + 1, x, next_phi, cfg.zero_mode, StepKind::subgradient));
    detail::guard_row(trace, cfg, who);

    if (trace.rows.back().total < trace.best_value) {
      trace.best_value = trace.rows.back().total;
      trace.best_point = x;
    }
    const double change = std::abs(next_phi - phi);
    phi = next_phi;
    if (change < cfg.eps_stop) {
      trace.terminal = Terminal::Converged;
      break;
    }
  }
  return trace;
}

// max over the box [lo, hi] of ||2Qx + b||; the norm is convex so a vertex attains it.
inline double quadratic_gradient_bound(const QuadraticObjective& q, const Point& lo, const Point& hi) {
  const Eigen::Index n = q.dim();
  require_dim(n, lo.size(), "quadratic_gradient_bound: lo");
  require_dim(n, hi.size(), "quadratic_gradient_bound: hi");
  if (n > 20) throw ConfigError("quadratic_gradient_bound: dimension above 20");
  double best = 0.0;
  Point v(n);
  for (std::uint64_t bits = 0; bits < (std::uint64_t{1} << n); ++bits) {
    for (Eigen::Index i = 0; i < n; ++i) v[i] = ((bits >> i) & 1U) ? hi[i] : lo[i];
    best = std::max(best, q.gradient(v).norm());
  }
  return best;
}

// t = 0.9 / (M * L_J), with M the scalarizer modulus and L_J = sqrt(sum G_i^2)
// bounding the Jacobian norm from per-component gradient bounds G_i.
inline double default_gerstewitz_step(const PolyhedralScalarizer& s, std::span<const double> gradient_bounds) {
  double sq = 0.0;
  for (double g : gradient_bounds) sq += g * g;
  const double lj = std::sqrt(sq);
  if (!(lj > 0.0)) throw ConfigError("default_gerstewitz_step: gradient bounds must be positive");
  return 0.9 / (s.lipschitz_bound() * lj);
}

}  // namespace ell0
