#pragma once

#include <string>

#include "atlas/poly.hpp"

namespace atlas {

/// Element of F_p(x) in lowest terms: gcd(num, den) = 1 and den monic.
class RationalFunction {
public:
  RationalFunction() = default;
  RationalFunction(Poly num, Poly den);
  static RationalFunction zero(int64_t p) { return RationalFunction(Poly::zero(p), Poly::constant(p, 1)); }
  static RationalFunction one(int64_t p) { return RationalFunction(Poly::constant(p, 1), Poly::constant(p, 1)); }
  static RationalFunction constant(Fp c) { return RationalFunction(Poly::constant(c.p, c.v), Poly::constant(c.p, 1)); }
  static RationalFunction from_poly(Poly n) {
    int64_t p = n.modulus();
    return RationalFunction(std::move(n), Poly::constant(p, 1));
  }

  const Poly& num() const { return num_; }
  const Poly& den() const { return den_; }
  int64_t modulus() const { return den_.modulus(); }
  bool is_zero() const { return num_.is_zero(); }
  bool is_constant() const { return num_.is_constant() && den_.is_constant(); }

  friend RationalFunction operator+(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator-(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator*(const RationalFunction& a, const RationalFunction& b);
  friend RationalFunction operator/(const RationalFunction& a, const RationalFunction& b);
  RationalFunction operator-() const { return RationalFunction(-num_, den_); }
  RationalFunction inv() const;
  RationalFunction pow(int64_t e) const;
  bool operator==(const RationalFunction& o) const { return num_ == o.num_ && den_ == o.den_; }
  bool operator!=(const RationalFunction& o) const { return !(*this == o); }

  bool has_pole_at(int64_t x0) const { return den_.eval(x0) == 0; }
  Fp eval(int64_t x0) const; // throws EvaluationPole at a pole

  /// order of vanishing at x = x0; negative at poles (requires nonzero)
  int valuation_at(int64_t x0) const;
  /// order of vanishing at x = infinity: deg(den) - deg(num)
  int valuation_at_infinity() const { return den_.degree() - num_.degree(); }

  std::string str() const; // "num/den", den omitted when 1
  static RationalFunction parse(int64_t p, const std::string& text);

private:
  Poly num_, den_;
};

} // namespace atlas
