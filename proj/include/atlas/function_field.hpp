#pragma once

#include "atlas/curve.hpp"
#include "atlas/rational.hpp"
#include "atlas/series.hpp"

namespace atlas {

/// Element u(x) + v(x)*y of the function field F_p(x)[y]/(y^2 - x^3 - ax - b).
class FunctionFieldElement {
public:
  FunctionFieldElement() = default;
  FunctionFieldElement(CurveSpec curve, RationalFunction u, RationalFunction v)
      : curve_(curve), u_(std::move(u)), v_(std::move(v)) {}

  static FunctionFieldElement zero(const CurveSpec& c) {
    return FunctionFieldElement(c, RationalFunction::zero(c.p), RationalFunction::zero(c.p));
  }
  static FunctionFieldElement one(const CurveSpec& c) {
    return FunctionFieldElement(c, RationalFunction::one(c.p), RationalFunction::zero(c.p));
  }
  static FunctionFieldElement constant(const CurveSpec& c, Fp value) {
    return FunctionFieldElement(c, RationalFunction::constant(value), RationalFunction::zero(c.p));
  }
  static FunctionFieldElement from_x(const CurveSpec& c) {
    return FunctionFieldElement(c, RationalFunction::from_poly(Poly::x(c.p)), RationalFunction::zero(c.p));
  }
  static FunctionFieldElement from_y(const CurveSpec& c) {
    return FunctionFieldElement(c, RationalFunction::zero(c.p), RationalFunction::one(c.p));
  }
  static FunctionFieldElement from_rational(const CurveSpec& c, RationalFunction u) {
    return FunctionFieldElement(c, std::move(u), RationalFunction::zero(c.p));
  }

  const CurveSpec& curve() const { return curve_; }
  const RationalFunction& u() const { return u_; }
  const RationalFunction& v() const { return v_; }
  bool is_zero() const { return u_.is_zero() && v_.is_zero(); }
  bool is_rational() const { return v_.is_zero(); }
  bool is_constant() const { return v_.is_zero() && u_.is_constant(); }

  friend FunctionFieldElement operator+(const FunctionFieldElement& a, const FunctionFieldElement& b);
  friend FunctionFieldElement operator-(const FunctionFieldElement& a, const FunctionFieldElement& b);
  friend FunctionFieldElement operator*(const FunctionFieldElement& a, const FunctionFieldElement& b);
  friend FunctionFieldElement operator/(const FunctionFieldElement& a, const FunctionFieldElement& b);
  FunctionFieldElement operator-() const { return FunctionFieldElement(curve_, -u_, -v_); }
  FunctionFieldElement inv() const;
  FunctionFieldElement pow(int64_t e) const;
  FunctionFieldElement scaled(Fp c) const {
    return FunctionFieldElement(curve_, u_ * RationalFunction::constant(c), v_ * RationalFunction::constant(c));
  }
  bool operator==(const FunctionFieldElement& o) const { return u_ == o.u_ && v_ == o.v_; }
  bool operator!=(const FunctionFieldElement& o) const { return !(*this == o); }

  std::string str() const;

private:
  CurveSpec curve_;
  RationalFunction u_, v_;
};

enum class UniformizerTag { XMinusX0, Y, XOverY };

const char* uniformizer_name(UniformizerTag tag);

/// Truncated Laurent expansion of a function-field element in the canonical
/// uniformizer at a rational point.
struct LocalExpansion {
  CurvePoint point;
  UniformizerTag tag = UniformizerTag::XMinusX0;
  int lead = 0;                 // leading exponent (the valuation when resolved)
  int precision = 0;            // number of retained coefficients
  std::vector<int64_t> coeffs;  // coeffs[i] multiplies t^(lead+i)
  bool resolved = false;        // leading coefficient determined
};

/// Expansions of the coordinate functions at P, reusable across elements.
struct LocalFrame {
  CurvePoint point;
  UniformizerTag tag;
  Series x;
  Series y;
};

LocalFrame local_frame(const CurveSpec& curve, const CurvePoint& P, int abs_prec);

/// Laurent-expand f at P keeping `precision` coefficients from the leading
/// term. Throws PrecisionExhausted when the leading term cannot be
/// determined at the requested internal precision.
LocalExpansion local_expand(const FunctionFieldElement& f, const CurvePoint& P, int precision);

/// Order of vanishing of f at P (negative at poles). Adaptive precision:
/// starts at 8 terms and doubles until the leading coefficient resolves.
int valuation(const FunctionFieldElement& f, const CurvePoint& P);

/// Expansion as a Series (internal form), at absolute precision `abs_prec`.
Series expand_series(const FunctionFieldElement& f, const LocalFrame& frame, int abs_prec);

} // namespace atlas
