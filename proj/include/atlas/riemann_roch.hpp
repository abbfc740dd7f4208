#pragma once

#include "atlas/divisor_class.hpp"
#include "atlas/function_field.hpp"

namespace atlas {

/// A function-field element whose divisor is known exactly, built from
/// divisor-tracked atoms: verticals v_P, chord/tangent lines l_{P,Q}, and
/// rational functions of x with fully rational root sets.
class TrackedFunction {
public:
  TrackedFunction() = default;
  TrackedFunction(FunctionFieldElement value, Divisor div) : value_(std::move(value)), divisor_(std::move(div)) {}

  static TrackedFunction one(const CurveSpec& curve) {
    return TrackedFunction(FunctionFieldElement::one(curve), Divisor());
  }
  /// x - x(P); divisor P + (-P) - 2O (or 2P - 2O at a 2-torsion point)
  static TrackedFunction vertical(const Curve& E, const CurvePoint& P);
  /// chord or tangent through P and Q; divisor P + Q + (-(P+Q)) - 3O;
  /// degenerates to the vertical when Q = -P
  static TrackedFunction line(const Curve& E, const CurvePoint& P, const CurvePoint& Q);
  /// rational function of x; every root of num and den must lift to rational
  /// curve points, else UnsupportedSupport
  static TrackedFunction from_rational_x(const Curve& E, const RationalFunction& f);
  static TrackedFunction constant(const CurveSpec& curve, Fp c);

  const FunctionFieldElement& value() const { return value_; }
  const Divisor& divisor() const { return divisor_; }
  bool is_constant_one() const { return divisor_.is_zero() && value_ == FunctionFieldElement::one(value_.curve()); }

  friend TrackedFunction operator*(const TrackedFunction& a, const TrackedFunction& b) {
    return TrackedFunction(a.value_ * b.value_, a.divisor_ + b.divisor_);
  }
  friend TrackedFunction operator/(const TrackedFunction& a, const TrackedFunction& b) {
    return TrackedFunction(a.value_ / b.value_, a.divisor_ - b.divisor_);
  }
  TrackedFunction pow(int64_t e) const { return TrackedFunction(value_.pow(e), divisor_.scaled(e)); }
  TrackedFunction scaled(Fp c) const { return TrackedFunction(value_.scaled(c), divisor_); }

private:
  FunctionFieldElement value_;
  Divisor divisor_;
};

/// Exact divisor of a tracked element (realizes div(f) = Z(f) - P(f)).
/// Attempts to track a raw element when it is rational in x; otherwise
/// UnsupportedSupport.
Divisor divisor_of(const Curve& E, const FunctionFieldElement& f);

struct RRBasis {
  Divisor divisor;
  std::vector<FunctionFieldElement> basis;
  TrackedFunction transport; // h with D = R + k*O + div(h); basis = L(R+kO)/h
  CurvePoint reduction_point;
};

class RiemannRoch {
public:
  RiemannRoch(const Curve& E, const ClassGroup& cls) : E_(E), cls_(cls) {}

  /// write D = R + k*O + div(h) with h tracked and R the group-law reduction
  struct Reduction {
    CurvePoint R;
    int64_t k = 0;
    TrackedFunction h;
  };
  Reduction reduce(const Divisor& D) const;

  RRBasis rr_basis(const Divisor& D) const;
  int64_t h0(const Divisor& D) const;

  /// f with pole divisor exactly Dpoles (deg >= 2 effective); NoSuchFunction
  /// for a single simple pole or when exactness cannot be met
  FunctionFieldElement function_with_poles(const Divisor& Dpoles) const;

  /// tracked f with div(f) = D exactly; D must be principal
  TrackedFunction function_with_divisor(const Divisor& D) const;

  /// check div(f) + D >= 0 at the support of D and all tracked atoms
  bool verify_in_space(const FunctionFieldElement& f, const Divisor& D, const RRBasis& basis) const;

private:
  /// monomials x^i y^j (j <= 1) with pole order 2i + 3j <= n at O, tracked
  /// only through their pole order (they are regular away from O)
  std::vector<FunctionFieldElement> monomial_basis(int64_t n) const;
  /// element with pole divisor exactly R + O (R affine), tracked
  TrackedFunction pole_at_point_and_origin(const CurvePoint& R) const;

  const Curve& E_;
  const ClassGroup& cls_;
};

} // namespace atlas
