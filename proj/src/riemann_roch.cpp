#include "atlas/riemann_roch.hpp"

#include <algorithm>

namespace atlas {

TrackedFunction TrackedFunction::vertical(const Curve& E, const CurvePoint& P) {
  if (P.is_infinity()) fail(Errc::MalformedInput, "vertical line through the point at infinity");
  E.require_on_curve(P);
  const CurveSpec& c = E.spec();
  FunctionFieldElement val(c, RationalFunction::from_poly(Poly::linear_root(c.p, P.x)), RationalFunction::zero(c.p));
  Divisor d;
  d.add(P, 1);
  d.add(E.neg(P), 1); // merges to 2P at a 2-torsion point
  d.add(CurvePoint::infinity(), -2);
  return TrackedFunction(std::move(val), std::move(d));
}

TrackedFunction TrackedFunction::line(const Curve& E, const CurvePoint& P, const CurvePoint& Q) {
  if (P.is_infinity() || Q.is_infinity()) fail(Errc::MalformedInput, "line atoms need affine points");
  E.require_on_curve(P);
  E.require_on_curve(Q);
  const CurveSpec& c = E.spec();
  int64_t p = c.p;
  if (Q == E.neg(P)) return vertical(E, P);
  Fp lambda(0, p);
  if (P == Q) {
    lambda = Fp(3 * (P.x * P.x % p) % p + c.a, p) / Fp(2 * P.y % p, p);
  } else {
    lambda = Fp(Q.y - P.y, p) / Fp(Q.x - P.x, p);
  }
  Fp mu = Fp(P.y, p) - lambda * Fp(P.x, p);
  // y - (lambda x + mu)
  RationalFunction u = RationalFunction::from_poly(Poly(p, {-(mu.v), -(lambda.v)}));
  FunctionFieldElement val(c, u, RationalFunction::one(p));
  Divisor d;
  d.add(P, 1);
  d.add(Q, 1);
  d.add(E.neg(E.add(P, Q)), 1);
  d.add(CurvePoint::infinity(), -3);
  return TrackedFunction(std::move(val), std::move(d));
}

TrackedFunction TrackedFunction::from_rational_x(const Curve& E, const RationalFunction& f) {
  if (f.is_zero()) fail(Errc::DivisionByZero, "cannot track the zero function");
  const CurveSpec& c = E.spec();
  Divisor d;
  auto account = [&](const Poly& poly, int sign) {
    Poly cofactor = Poly::zero(c.p);
    auto roots = poly.rational_roots(&cofactor);
    if (cofactor.degree() > 0)
      fail(Errc::UnsupportedSupport, "polynomial factor without rational roots: " + cofactor.str());
    int64_t total = 0;
    for (auto [x0, m] : roots) {
      auto lifts = E.lift_x(x0);
      if (lifts.empty())
        fail(Errc::UnsupportedSupport, "x-root " + std::to_string(x0) + " lies over no rational point");
      if (lifts.size() == 1) {
        d.add(lifts[0], 2 * m * sign); // 2-torsion fiber
      } else {
        d.add(lifts[0], m * sign);
        d.add(lifts[1], m * sign);
      }
      total += 2 * m;
    }
    d.add(CurvePoint::infinity(), -total * sign);
  };
  account(f.num(), +1);
  account(f.den(), -1);
  return TrackedFunction(FunctionFieldElement::from_rational(c, f), std::move(d));
}

TrackedFunction TrackedFunction::constant(const CurveSpec& curve, Fp c) {
  if (c.is_zero()) fail(Errc::DivisionByZero, "cannot track the zero function");
  return TrackedFunction(FunctionFieldElement::constant(curve, c), Divisor());
}

Divisor divisor_of(const Curve& E, const FunctionFieldElement& f) {
  if (f.is_zero()) fail(Errc::DivisionByZero, "divisor of the zero element");
  if (!f.is_rational())
    fail(Errc::UnsupportedSupport, "divisor_of needs a constructor-tracked element (got a y-term)");
  return TrackedFunction::from_rational_x(E, f.u()).divisor();
}

RiemannRoch::Reduction RiemannRoch::reduce(const Divisor& D) const {
  if (D.has_abstract()) fail(Errc::BackendMismatch, "reduction needs a concrete divisor");
  Reduction red;
  red.h = TrackedFunction::one(E_.spec());
  int64_t k = 0;
  std::vector<CurvePoint> bag; // affine points with multiplicity, positive part
  for (auto& [pt, m] : D.points()) {
    E_.require_on_curve(pt);
    if (pt.is_infinity()) {
      k += m;
      continue;
    }
    if (m > 0) {
      for (int64_t i = 0; i < m; ++i) bag.push_back(pt);
    } else {
      // -Q = (-Q as a point) - 2O - div(v_Q)
      for (int64_t i = 0; i < -m; ++i) {
        bag.push_back(E_.neg(pt));
        k -= 2;
        red.h = red.h / TrackedFunction::vertical(E_, pt);
      }
    }
  }
  while (bag.size() >= 2) {
    CurvePoint P = bag.back();
    bag.pop_back();
    CurvePoint Q = bag.back();
    bag.pop_back();
    if (Q == E_.neg(P)) {
      // P + Q = 2O + div(v_P)
      k += 2;
      red.h = red.h * TrackedFunction::vertical(E_, P);
      continue;
    }
    CurvePoint S = E_.add(P, Q);
    // P + Q = S + O + div(l_{P,Q} / v_S)
    red.h = red.h * TrackedFunction::line(E_, P, Q) / TrackedFunction::vertical(E_, S);
    k += 1;
    bag.push_back(S);
  }
  if (bag.empty()) {
    red.R = CurvePoint::infinity();
    k -= 1; // fold one O into R so that D = R + k*O + div(h)
  } else {
    red.R = bag.front();
  }
  red.k = k;
  return red;
}

std::vector<FunctionFieldElement> RiemannRoch::monomial_basis(int64_t n) const {
  // pole orders at O: 1->0, x->2, y->3, x^2->4, xy->5, ...
  std::vector<FunctionFieldElement> out;
  const CurveSpec& c = E_.spec();
  if (n < 0) return out;
  out.push_back(FunctionFieldElement::one(c));
  FunctionFieldElement x = FunctionFieldElement::from_x(c);
  FunctionFieldElement y = FunctionFieldElement::from_y(c);
  FunctionFieldElement xi = FunctionFieldElement::one(c);
  for (int64_t i = 1; 2 * i <= n; ++i) {
    xi = xi * x;
    out.push_back(xi); // pole order 2i
  }
  FunctionFieldElement xiy = y;
  for (int64_t i = 0; 2 * i + 3 <= n; ++i) {
    out.push_back(xiy); // pole order 2i+3
    xiy = xiy * x;
  }
  // sort by pole order so basis listing is stable
  std::sort(out.begin(), out.end(), [&](const FunctionFieldElement& a, const FunctionFieldElement& b) {
    auto order = [&](const FunctionFieldElement& f) {
      int du = 2 * f.u().num().degree();
      int dv = f.v().is_zero() ? -1000 : 2 * f.v().num().degree() + 3;
      return std::max(du, dv);
    };
    return order(a) < order(b);
  });
  return out;
}

TrackedFunction RiemannRoch::pole_at_point_and_origin(const CurvePoint& R) const {
  // g = v_X * v_{X+R} / l_{X,R} has divisor (-X) + (X+R) - R - O for a
  // generic auxiliary point X; scan for one avoiding the degenerate cases.
  if (R.is_infinity()) fail(Errc::MalformedInput, "R must be affine");
  for (int64_t x = 0; x < E_.p(); ++x) {
    for (const CurvePoint& X : E_.lift_x(x)) {
      if (X == R || X == E_.neg(R)) continue;
      CurvePoint XR = E_.add(X, R);
      if (XR.is_infinity() || XR == R) continue;
      if (E_.neg(X) == R || E_.neg(X) == XR) continue;
      TrackedFunction g = TrackedFunction::vertical(E_, X) * TrackedFunction::vertical(E_, XR) /
                          TrackedFunction::line(E_, X, R);
      return g;
    }
  }
  fail(Errc::NoSuchFunction, "no auxiliary point available on this curve");
}

RRBasis RiemannRoch::rr_basis(const Divisor& D) const {
  RRBasis out;
  out.divisor = D;
  int64_t n = D.degree();
  Reduction red = reduce(D);
  out.transport = red.h;
  out.reduction_point = red.R;
  if (n < 0) return out;
  if (n == 0) {
    if (red.R.is_infinity()) {
      // D = div(h): L(D) is spanned by 1/h
      out.basis.push_back(FunctionFieldElement::one(E_.spec()) / red.h.value());
    }
    return out;
  }
  // D = R + (n-1)O + div(h)
  std::vector<FunctionFieldElement> upstairs;
  if (red.R.is_infinity()) {
    upstairs = monomial_basis(n);
  } else {
    upstairs = monomial_basis(n - 1);
    if (n >= 2) upstairs.push_back(pole_at_point_and_origin(red.R).value());
    // n == 1: L(R) is just the constants
  }
  for (auto& b : upstairs) out.basis.push_back(b / red.h.value());
  return out;
}

int64_t RiemannRoch::h0(const Divisor& D) const { return (int64_t)rr_basis(D).basis.size(); }

FunctionFieldElement RiemannRoch::function_with_poles(const Divisor& Dpoles) const {
  if (!Dpoles.is_effective() || Dpoles.is_zero())
    fail(Errc::MalformedInput, "pole divisor must be effective and nonzero");
  if (Dpoles.degree() == 1) fail(Errc::NoSuchFunction, "no function with a single simple pole on a genus-1 curve");
  RRBasis basis = rr_basis(Dpoles);
  auto exact = [&](const FunctionFieldElement& f) {
    if (f.is_zero()) return false;
    for (auto& [pt, m] : Dpoles.points())
      if (valuation(f, pt) != -m) return false;
    return true;
  };
  // prefer deterministic small combinations: top element, then adjustments
  size_t n = basis.basis.size();
  for (size_t i = n; i-- > 0;)
    if (exact(basis.basis[i])) return basis.basis[i];
  const CurveSpec& c = E_.spec();
  // seeded deterministic sweep over coefficient patterns
  uint64_t state = 0xC0FFEEULL;
  auto next = [&]() {
    state = state * 6364136223846793005ULL + 1442695040888963407ULL;
    return (state >> 33);
  };
  for (int tries = 0; tries < 400; ++tries) {
    FunctionFieldElement f = FunctionFieldElement::zero(c);
    for (size_t i = 0; i < n; ++i) {
      int64_t coef = (tries == 0) ? 1 : int64_t(next() % uint64_t(c.p));
      if (coef == 0 && i + 1 == n) coef = 1;
      f = f + basis.basis[i].scaled(Fp(coef, c.p));
    }
    if (exact(f)) return f;
  }
  fail(Errc::NoSuchFunction, "exact pole orders not achievable for " + Dpoles.str());
}

TrackedFunction RiemannRoch::function_with_divisor(const Divisor& D) const {
  if (D.degree() != 0) fail(Errc::NonZeroDegree, "principal divisors have degree zero");
  Reduction red = reduce(D);
  if (!red.R.is_infinity() || red.k != -1)
    fail(Errc::NoSuchFunction, "divisor is not principal: " + D.str());
  return red.h;
}

bool RiemannRoch::verify_in_space(const FunctionFieldElement& f, const Divisor& D, const RRBasis& basis) const {
  if (f.is_zero()) return false;
  std::map<CurvePoint, int64_t> checks;
  for (auto& [pt, m] : D.points()) checks[pt] = m;
  for (auto& [pt, m] : basis.transport.divisor().points()) checks.emplace(pt, D.mult(pt));
  checks.emplace(CurvePoint::infinity(), D.mult(CurvePoint::infinity()));
  for (auto& [pt, m] : checks)
    if (valuation(f, pt) + m < 0) return false;
  return true;
}

} // namespace atlas
