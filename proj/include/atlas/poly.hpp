#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "atlas/fp.hpp"

namespace atlas {

/// Dense univariate polynomial over F_p, coefficients in ascending degree
/// order with no trailing zeros. The zero polynomial has degree -1.
class Poly {
public:
  Poly() = default;
  Poly(int64_t p, std::vector<int64_t> coeffs);
  static Poly zero(int64_t p) { return Poly(p, {}); }
  static Poly constant(int64_t p, int64_t c) { return Poly(p, {c}); }
  static Poly x(int64_t p) { return Poly(p, {0, 1}); }
  /// x - x0
  static Poly linear_root(int64_t p, int64_t x0) { return Poly(p, {-x0, 1}); }

  int64_t modulus() const { return p_; }
  int degree() const { return static_cast<int>(coeffs_.size()) - 1; }
  bool is_zero() const { return coeffs_.empty(); }
  bool is_constant() const { return coeffs_.size() <= 1; }
  int64_t coeff(int i) const { return (i >= 0 && i < (int)coeffs_.size()) ? coeffs_[i] : 0; }
  int64_t lead() const { return coeffs_.empty() ? 0 : coeffs_.back(); }
  const std::vector<int64_t>& coeffs() const { return coeffs_; }

  Fp eval(Fp x) const;
  int64_t eval(int64_t x) const;
  Poly derivative() const;
  Poly monic() const;
  Poly shift(int k) const; // multiply by x^k

  friend Poly operator+(const Poly& a, const Poly& b);
  friend Poly operator-(const Poly& a, const Poly& b);
  friend Poly operator*(const Poly& a, const Poly& b);
  Poly operator-() const;
  Poly scaled(Fp c) const;
  bool operator==(const Poly& o) const { return coeffs_ == o.coeffs_; }
  bool operator!=(const Poly& o) const { return !(*this == o); }

  /// quotient and remainder; divisor must be nonzero
  static std::pair<Poly, Poly> divmod(const Poly& a, const Poly& b);
  static Poly gcd(Poly a, Poly b); // monic gcd

  /// order of vanishing at x0 (0 when poly(x0) != 0); poly must be nonzero
  int root_multiplicity(int64_t x0) const;
  /// divide out (x - x0)^m exactly
  Poly deflate(int64_t x0, int m) const;

  /// all roots in F_p with multiplicities, plus the non-linear cofactor
  std::vector<std::pair<int64_t, int>> rational_roots(Poly* cofactor = nullptr) const;

  std::string str() const; // sparse "c0+c1*x+..." form
  static Poly parse(int64_t p, const std::string& text);

private:
  void trim();
  int64_t p_ = 0;
  std::vector<int64_t> coeffs_;
};

} // namespace atlas
