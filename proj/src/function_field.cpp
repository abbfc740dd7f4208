#include "atlas/function_field.hpp"

#include <sstream>

namespace atlas {

namespace {

RationalFunction curve_rhs_rational(const CurveSpec& c) {
  return RationalFunction::from_poly(Poly(c.p, {c.b, c.a, 0, 1}));
}

} // namespace

FunctionFieldElement operator+(const FunctionFieldElement& a, const FunctionFieldElement& b) {
  return FunctionFieldElement(a.curve_, a.u_ + b.u_, a.v_ + b.v_);
}

FunctionFieldElement operator-(const FunctionFieldElement& a, const FunctionFieldElement& b) {
  return FunctionFieldElement(a.curve_, a.u_ - b.u_, a.v_ - b.v_);
}

FunctionFieldElement operator*(const FunctionFieldElement& a, const FunctionFieldElement& b) {
  // (u1 + v1 y)(u2 + v2 y) = u1 u2 + v1 v2 (x^3+ax+b) + (u1 v2 + u2 v1) y
  RationalFunction f = curve_rhs_rational(a.curve_);
  return FunctionFieldElement(a.curve_, a.u_ * b.u_ + a.v_ * b.v_ * f, a.u_ * b.v_ + a.v_ * b.u_);
}

FunctionFieldElement FunctionFieldElement::inv() const {
  if (is_zero()) fail(Errc::DivisionByZero, "inverse of zero function-field element");
  // norm u^2 - v^2 (x^3+ax+b) is nonzero: the cubic is not a square in F_p(x)
  RationalFunction f = curve_rhs_rational(curve_);
  RationalFunction norm = u_ * u_ - v_ * v_ * f;
  return FunctionFieldElement(curve_, u_ / norm, -(v_ / norm));
}

FunctionFieldElement operator/(const FunctionFieldElement& a, const FunctionFieldElement& b) {
  if (b.is_zero()) fail(Errc::DivisionByZero, "division by zero function-field element");
  return a * b.inv();
}

FunctionFieldElement FunctionFieldElement::pow(int64_t e) const {
  if (e < 0) return inv().pow(-e);
  FunctionFieldElement r = FunctionFieldElement::one(curve_);
  FunctionFieldElement base = *this;
  while (e > 0) {
    if (e & 1) r = r * base;
    base = base * base;
    e >>= 1;
  }
  return r;
}

std::string FunctionFieldElement::str() const {
  std::ostringstream os;
  os << "(" << u_.str() << ") + (" << v_.str() << ")*y";
  return os.str();
}

const char* uniformizer_name(UniformizerTag tag) {
  switch (tag) {
    case UniformizerTag::XMinusX0: return "x-x0";
    case UniformizerTag::Y: return "y";
    case UniformizerTag::XOverY: return "x/y";
  }
  return "?";
}

LocalFrame local_frame(const CurveSpec& curve, const CurvePoint& P, int abs_prec) {
  int64_t p = curve.p;
  Curve E(curve);
  E.require_on_curve(P);
  LocalFrame frame;
  frame.point = P;
  if (P.is_infinity()) {
    frame.tag = UniformizerTag::XOverY;
    // t = x/y, w = 1/y satisfies w = t^3 + a t w^2 + b w^3
    Series t = Series::t(p, abs_prec + 8);
    Series t3 = t.pow(3);
    Series w = t3;
    Fp a(curve.a, p), b(curve.b, p);
    // each pass extends the certified order by at least 4
    for (int i = 0; i < abs_prec / 4 + 4; ++i) {
      w = t3 + (t * w * w).scaled(a) + (w * w * w).scaled(b);
    }
    frame.y = w.inv();                  // y = 1/w, valuation -3
    frame.x = t * frame.y;              // x = t*y, valuation -2
    frame.x = frame.x.truncated(abs_prec);
    frame.y = frame.y.truncated(abs_prec);
  } else if (P.y != 0) {
    frame.tag = UniformizerTag::XMinusX0;
    Series t = Series::t(p, abs_prec);
    frame.x = Series::constant(Fp(P.x, p), abs_prec) + t;
    // y = sqrt(x^3 + a x + b), branch with y(0) = y0
    Poly rhs(p, {curve.b, curve.a, 0, 1});
    Series F = Series::from_poly(rhs, frame.x, abs_prec);
    frame.y = F.sqrt(Fp(P.y, p));
  } else {
    frame.tag = UniformizerTag::Y;
    // t = y; solve F(x(t)) = t^2 with x(0) = x0, F'(x0) != 0 (smoothness)
    Poly rhs(p, {curve.b, curve.a, 0, 1});
    Fp dinv = Fp(rhs.derivative().eval(P.x), p).inv();
    Series t = Series::t(p, abs_prec);
    Series x = Series::constant(Fp(P.x, p), abs_prec);
    for (int n = 1; n < abs_prec; ++n) {
      Series r = t * t - Series::from_poly(rhs, x, abs_prec);
      int64_t c = r.coeff(n);
      if (c == 0) continue;
      x = x + Series::monomial(Fp(c, p) * dinv, n, abs_prec);
    }
    frame.x = x;
    frame.y = t;
  }
  return frame;
}

Series expand_series(const FunctionFieldElement& f, const LocalFrame& frame, int abs_prec) {
  // work at the frame's native depth: negative leads in v*y cost precision
  int deep = std::max(abs_prec, frame.x.precision());
  Series r = Series::from_rational(f.u(), frame.x, deep);
  if (!f.v().is_zero()) {
    Series v = Series::from_rational(f.v(), frame.x, deep);
    r = r + v * frame.y;
  }
  return r.truncated(abs_prec);
}

namespace {

LocalExpansion expand_with_budget(const FunctionFieldElement& f, const CurvePoint& P, int precision, int budget) {
  // Work at absolute precision `budget`; resolve the leading exponent.
  LocalFrame frame = local_frame(f.curve(), P, budget + 8);
  Series s = expand_series(f, frame, budget);
  LocalExpansion out;
  out.point = P;
  out.tag = frame.tag;
  out.precision = precision;
  if (!s.known_nonzero()) {
    out.resolved = false;
    out.lead = s.precision();
    return out;
  }
  out.resolved = true;
  out.lead = s.lead();
  int avail = s.precision() - s.lead();
  if (avail < precision) {
    out.resolved = false; // not enough certified coefficients
    return out;
  }
  out.coeffs = s.coeff_window(s.lead(), precision);
  return out;
}

} // namespace

LocalExpansion local_expand(const FunctionFieldElement& f, const CurvePoint& P, int precision) {
  if (f.is_zero()) fail(Errc::DivisionByZero, "local expansion of the zero element");
  if (precision < 1) fail(Errc::MalformedInput, "precision must be >= 1");
  int budget = std::max(8, 2 * precision + 8);
  LocalExpansion e = expand_with_budget(f, P, precision, budget);
  if (!e.resolved)
    fail(Errc::PrecisionExhausted,
         "leading term of expansion at " + P.str() + " not determined at precision " + std::to_string(budget));
  return e;
}

int valuation(const FunctionFieldElement& f, const CurvePoint& P) {
  if (f.is_zero()) fail(Errc::DivisionByZero, "valuation of the zero element");
  for (int budget = 8; budget <= (1 << 16); budget *= 2) {
    LocalExpansion e = expand_with_budget(f, P, 1, budget);
    if (e.resolved) return e.lead;
  }
  fail(Errc::PrecisionExhausted, "valuation did not resolve at " + P.str());
}

} // namespace atlas
