#pragma once

#include <cstdint>
#include <vector>

#include "atlas/fp.hpp"
#include "atlas/poly.hpp"
#include "atlas/rational.hpp"

namespace atlas {

/// Truncated Laurent series sum c[i]*t^(lead+i) + O(t^prec) over F_p.
/// A series whose known coefficients are all zero is stored with lead == prec
/// and an empty coefficient vector; its valuation is only known to be >= prec.
class Series {
public:
  Series() = default;
  Series(int64_t p, int lead, int prec, std::vector<int64_t> coeffs);
  static Series zero(int64_t p, int prec) { return Series(p, prec, prec, {}); }
  static Series constant(Fp c, int prec);
  static Series monomial(Fp c, int exp, int prec);
  /// the uniformizer t itself
  static Series t(int64_t p, int prec) { return monomial(Fp(1, p), 1, prec); }
  static Series from_poly(const Poly& poly, const Series& x, int prec);
  static Series from_rational(const RationalFunction& f, const Series& x, int prec);

  int64_t modulus() const { return p_; }
  int lead() const { return lead_; }
  int precision() const { return prec_; }
  bool known_nonzero() const { return !coeffs_.empty(); }
  int64_t coeff(int exp) const;
  Fp lead_coeff() const { return known_nonzero() ? Fp(coeffs_[0], p_) : Fp(0, p_); }
  std::vector<int64_t> coeff_window(int from, int count) const;

  Series truncated(int prec) const;

  friend Series operator+(const Series& a, const Series& b);
  friend Series operator-(const Series& a, const Series& b);
  friend Series operator*(const Series& a, const Series& b);
  friend Series operator/(const Series& a, const Series& b);
  Series operator-() const;
  Series scaled(Fp c) const;
  Series pow(int64_t e) const;
  Series inv() const;
  /// square root of a series with even lead and known leading coefficient;
  /// branch chosen so the leading coefficient is `lead_root`
  Series sqrt(Fp lead_root) const;

private:
  void trim();
  int64_t p_ = 0;
  int lead_ = 0;
  int prec_ = 0;
  std::vector<int64_t> coeffs_;
};

} // namespace atlas
