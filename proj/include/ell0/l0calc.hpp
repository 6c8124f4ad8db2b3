#pragma once

// l0 "norm" evaluation, support patterns (the diagonal 0/1 projection
// matrices) and the limiting subdifferential of the l0 norm.

#include "ell0/core.hpp"

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace ell0 {

// How a coordinate is declared zero. `exact` compares against 0.0 (so -0.0
// is zero as well); `tol` treats |x_i| <= eps as zero.
struct ZeroMode {
  enum class Kind { exact, tol };

  Kind kind = Kind::exact;
  double eps = 1e-6;

  static constexpr double default_eps = 1e-6;

  static ZeroMode exact() { return {Kind::exact, default_eps}; }
  static ZeroMode tol(double eps = default_eps) {
    if (!(eps > 0.0)) throw ConfigError("ZeroMode: tolerance must be positive");
    return {Kind::tol, eps};
  }

  bool is_zero(double v) const { return kind == Kind::exact ? v == 0.0 : std::abs(v) <= eps; }
  bool is_tol() const { return kind == Kind::tol; }
};

inline std::size_t l0_norm(const Point& x, ZeroMode mode = ZeroMode::exact()) {
  std::size_t count = 0;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (!mode.is_zero(x[i])) ++count;
  return count;
}

// Boolean diagonal of a projection matrix; true marks a support component.
class SupportPattern {
 public:
  SupportPattern() = default;
  explicit SupportPattern(std::vector<bool> mask) : mask_(std::move(mask)) {}

  static SupportPattern full(std::size_t n) { return SupportPattern(std::vector<bool>(n, true)); }
  static SupportPattern empty(std::size_t n) { return SupportPattern(std::vector<bool>(n, false)); }

  // Bit i of `bits` selects component i.
  static SupportPattern from_bits(std::uint64_t bits, std::size_t n) {
    std::vector<bool> mask(n);
    for (std::size_t i = 0; i < n; ++i) mask[i] = ((bits >> i) & 1U) != 0;
    return SupportPattern(std::move(mask));
  }

  // Parses the `01`-style serialization (character i is component i).
  static SupportPattern from_bitstring(std::string_view s) {
    std::vector<bool> mask;
    mask.reserve(s.size());
    for (char ch : s) {
      if (ch != '0' && ch != '1') throw ConfigError("SupportPattern: invalid bitstring '" + std::string(s) + "'");
      mask.push_back(ch == '1');
    }
    return SupportPattern(std::move(mask));
  }

  std::size_t size() const { return mask_.size(); }
  bool operator[](std::size_t i) const { return mask_[i]; }
  const std::vector<bool>& mask() const { return mask_; }

  std::size_t popcount() const {
    std::size_t c = 0;
    for (bool b : mask_) c += b ? 1 : 0;
    return c;
  }

  bool subset_of(const SupportPattern& other) const {
    if (other.size() != size()) return false;
    for (std::size_t i = 0; i < size(); ++i)
      if (mask_[i] && !other.mask_[i]) return false;
    return true;
  }

  std::uint64_t to_bits() const {
    std::uint64_t bits = 0;
    for (std::size_t i = 0; i < size() && i < 64; ++i)
      if (mask_[i]) bits |= (std::uint64_t{1} << i);
    return bits;
  }

  std::string to_bitstring() const {
    std::string s(size(), '0');
    for (std::size_t i = 0; i < size(); ++i)
      if (mask_[i]) s[i] = '1';
    return s;
  }

  // Dense diagonal matrix form.
  Matrix to_matrix() const {
    Matrix m = Matrix::Zero(size(), size());
    for (std::size_t i = 0; i < size(); ++i) m(i, i) = mask_[i] ? 1.0 : 0.0;
    return m;
  }

  friend bool operator==(const SupportPattern&, const SupportPattern&) = default;
  friend auto operator<=>(const SupportPattern& a, const SupportPattern& b) { return a.mask_ <=> b.mask_; }

 private:
  std::vector<bool> mask_;
};

inline SupportPattern support_pattern(const Point& x, ZeroMode mode = ZeroMode::exact()) {
  std::vector<bool> mask(static_cast<std::size_t>(x.size()));
  for (Eigen::Index i = 0; i < x.size(); ++i) mask[i] = !mode.is_zero(x[i]);
  return SupportPattern(std::move(mask));
}

inline Point project(const SupportPattern& p, const Point& v) {
  require_dim(static_cast<Eigen::Index>(p.size()), v.size(), "project");
  Point out = Point::Zero(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (p[i]) out[i] = v[i];
  return out;
}

// (I - P) v.
inline Point complement_project(const SupportPattern& p, const Point& v) {
  require_dim(static_cast<Eigen::Index>(p.size()), v.size(), "complement_project");
  Point out = Point::Zero(v.size());
  for (Eigen::Index i = 0; i < v.size(); ++i)
    if (!p[i]) out[i] = v[i];
  return out;
}

// Sets |x_i| <= eps to exact 0 in tol mode; identity in exact mode.
inline void snap_zeros(Point& x, ZeroMode mode) {
  if (!mode.is_tol()) return;
  for (Eigen::Index i = 0; i < x.size(); ++i)
    if (mode.is_zero(x[i])) x[i] = 0.0;
}

// The limiting subdifferential of ||.||_0 at a point is the subspace
// {v : v_i = 0 on the support}; stored as that index partition.
struct SubdifferentialDescription {
  std::vector<std::size_t> fixed_zero_indices;
  std::vector<std::size_t> free_indices;

  std::size_t dim() const { return fixed_zero_indices.size() + free_indices.size(); }
};

inline SubdifferentialDescription l0_subdifferential(const Point& x, ZeroMode mode = ZeroMode::exact()) {
  SubdifferentialDescription d;
  for (Eigen::Index i = 0; i < x.size(); ++i) {
    if (mode.is_zero(x[i]))
      d.free_indices.push_back(static_cast<std::size_t>(i));
    else
      d.fixed_zero_indices.push_back(static_cast<std::size_t>(i));
  }
  return d;
}

inline bool membership_check(const SubdifferentialDescription& d, const Point& v) {
  require_dim(static_cast<Eigen::Index>(d.dim()), v.size(), "membership_check");
  for (std::size_t i : d.fixed_zero_indices)
    if (v[static_cast<Eigen::Index>(i)] != 0.0) return false;
  return true;
}

}  // namespace ell0
