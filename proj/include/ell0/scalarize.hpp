#pragma once

// Gerstewitz (Tammer) scalarization over polyhedral sets
//
//   phi_{A,k0}(y) = inf { t : y in t k0 + A },   A = { y : <a_i, y> <= b_i }.
//
// Since y - t k0 lies in A exactly when t >= (<a_i, y> - b_i) / <a_i, k0>
// for every i, the infimum is the maximum of those affine functions. The
// weight-sum scalarization is the one-halfspace special case.

#include "ell0/core.hpp"

#include <algorithm>
#include <cstddef>
#include <vector>

namespace ell0 {

struct Halfspace {
  Point a;  // outward normal, nonzero
  double b = 0.0;
};

class PolyhedralScalarizer {
 public:
  static constexpr double direction_tolerance = 1e-12;
  static constexpr double active_tolerance = 1e-9;

  PolyhedralScalarizer(std::vector<Halfspace> halfspaces, Point k0)
      : halfspaces_(std::move(halfspaces)), k0_(std::move(k0)) {
    if (halfspaces_.empty()) throw ConfigError("PolyhedralScalarizer: at least one halfspace is required");
    const Eigen::Index m = k0_.size();
    if (m < 1) throw DimensionError("PolyhedralScalarizer: k0 must be non-empty");
    require_finite(k0_, "PolyhedralScalarizer: k0");
    pareto_safe_ = true;
    lipschitz_ = 0.0;
    for (std::size_t i = 0; i < halfspaces_.size(); ++i) {
      const Halfspace& h = halfspaces_[i];
      require_dim(m, h.a.size(), "PolyhedralScalarizer: halfspace normal");
      if (!h.a.allFinite() || !std::isfinite(h.b)) throw NumericError("PolyhedralScalarizer: non-finite halfspace");
      if (h.a.cwiseAbs().maxCoeff() == 0.0) throw ConfigError("PolyhedralScalarizer: halfspace normal must be nonzero");
      const double denom = h.a.dot(k0_);
      if (!(denom > direction_tolerance)) {
        throw ConfigError("scalarizer not finite-valued: <a_" + std::to_string(i) + ", k0> = " +
                          std::to_string(denom) + " must be positive");
      }
      denominators_.push_back(denom);
      if ((h.a.array() < 0.0).any()) pareto_safe_ = false;
      lipschitz_ = std::max(lipschitz_, h.a.norm() / denom);
    }
  }

  // k0 defaults to (1, ..., 1).
  explicit PolyhedralScalarizer(std::vector<Halfspace> halfspaces)
      : PolyhedralScalarizer(halfspaces, Point::Ones(halfspaces.empty() ? 0 : halfspaces.front().a.size())) {}

  // A = nonpositive orthant: phi(y) = max_i y_i.
  static PolyhedralScalarizer max_scalarizer(Eigen::Index m) {
    std::vector<Halfspace> hs;
    for (Eigen::Index i = 0; i < m; ++i) hs.push_back({Point::Unit(m, i), 0.0});
    return PolyhedralScalarizer(std::move(hs), Point::Ones(m));
  }

  Eigen::Index dim() const { return k0_.size(); }
  const std::vector<Halfspace>& halfspaces() const { return halfspaces_; }
  const Point& k0() const { return k0_; }

  // A - R^m_+ subset of A, i.e. every normal is componentwise nonnegative.
  bool pareto_safe() const { return pareto_safe_; }

  // Global Lipschitz modulus max_i ||a_i|| / <a_i, k0>.
  double lipschitz_bound() const { return lipschitz_; }

  // A is a cone when every offset vanishes.
  bool conic() const {
    return std::all_of(halfspaces_.begin(), halfspaces_.end(), [](const Halfspace& h) { return h.b == 0.0; });
  }

  double eval(const Point& y) const { return eval_with_index(y).first; }

  // Normal a_i / <a_i, k0> of the lowest-index piece within active_tolerance of the max.
  Point subgradient(const Point& y) const {
    const std::vector<double> pieces = piece_values(y);
    const double top = *std::max_element(pieces.begin(), pieces.end());
    for (std::size_t i = 0; i < pieces.size(); ++i) {
      if (pieces[i] >= top - active_tolerance) return halfspaces_[i].a / denominators_[i];
    }
    return halfspaces_.back().a / denominators_.back();  // unreachable
  }

  // Membership of y in lambda k0 + A, i.e. <a_i, y - lambda k0> <= b_i for all i.
  bool in_shifted_set(const Point& y, double lambda, double margin = 0.0) const {
    require_dim(dim(), y.size(), "in_shifted_set");
    const Point shifted = y - lambda * k0_;
    for (const Halfspace& h : halfspaces_)
      if (h.a.dot(shifted) > h.b + margin) return false;
    return true;
  }

 private:
  std::vector<double> piece_values(const Point& y) const {
    require_dim(dim(), y.size(), "gerstewitz_eval");
    std::vector<double> out(halfspaces_.size());
    for (std::size_t i = 0; i < halfspaces_.size(); ++i)
      out[i] = (halfspaces_[i].a.dot(y) - halfspaces_[i].b) / denominators_[i];
    return out;
  }

  std::pair<double, std::size_t> eval_with_index(const Point& y) const {
    const std::vector<double> pieces = piece_values(y);
    auto it = std::max_element(pieces.begin(), pieces.end());
    return {*it, static_cast<std::size_t>(it - pieces.begin())};
  }

  std::vector<Halfspace> halfspaces_;
  Point k0_;
  std::vector<double> denominators_;
  bool pareto_safe_ = true;
  double lipschitz_ = 0.0;
};

inline double gerstewitz_eval(const PolyhedralScalarizer& s, const Point& y) { return s.eval(y); }
inline Point gerstewitz_subgradient(const PolyhedralScalarizer& s, const Point& y) { return s.subgradient(y); }

// Convex weights: nonnegative, summing to one within 1e-12.
class WeightVector {
 public:
  static constexpr double sum_tolerance = 1e-12;

  explicit WeightVector(Point w) : w_(std::move(w)) {
    if (w_.size() < 1) throw DimensionError("WeightVector: at least one weight is required");
    require_finite(w_, "WeightVector");
    if ((w_.array() < 0.0).any()) throw ConfigError("WeightVector: weights must be nonnegative");
    if (std::abs(w_.sum() - 1.0) > sum_tolerance) throw ConfigError("WeightVector: weights must sum to 1");
  }

  WeightVector(std::initializer_list<double> w)
      : WeightVector(Point(Eigen::Map<const Point>(w.begin(), static_cast<Eigen::Index>(w.size())))) {}

  Eigen::Index size() const { return w_.size(); }
  double operator[](Eigen::Index i) const { return w_[i]; }
  const Point& values() const { return w_; }

 private:
  Point w_;
};

inline double weight_sum_eval(const WeightVector& w, const Point& values) {
  require_dim(w.size(), values.size(), "weight_sum_eval");
  return w.values().dot(values);
}

// Single halfspace <w, y> <= 0 with k0 = (1, ..., 1). Zero weights are
// rejected in strict mode: the set then loses strict monotonicity and the
// Pareto guarantee weakens to weak Pareto optimality.
inline PolyhedralScalarizer scalarizer_from_weights(const WeightVector& w, bool strict = true) {
  if (strict && (w.values().array() <= 0.0).any())
    throw ConfigError("scalarizer_from_weights: zero weight in strict mode");
  return PolyhedralScalarizer({Halfspace{w.values(), 0.0}}, Point::Ones(w.size()));
}

}  // namespace ell0
