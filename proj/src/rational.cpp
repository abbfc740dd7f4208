#include "atlas/rational.hpp"

namespace atlas {

RationalFunction::RationalFunction(Poly num, Poly den) : num_(std::move(num)), den_(std::move(den)) {
  if (den_.is_zero()) fail(Errc::DivisionByZero, "rational function with zero denominator");
  Poly g = Poly::gcd(num_, den_);
  if (g.degree() > 0) {
    num_ = Poly::divmod(num_, g).first;
    den_ = Poly::divmod(den_, g).first;
  }
  Fp lead(den_.lead(), den_.modulus());
  if (lead.v != 1) {
    Fp inv = lead.inv();
    num_ = num_.scaled(inv);
    den_ = den_.scaled(inv);
  }
}

RationalFunction operator+(const RationalFunction& a, const RationalFunction& b) {
  return RationalFunction(a.num_ * b.den_ + b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator-(const RationalFunction& a, const RationalFunction& b) {
  return RationalFunction(a.num_ * b.den_ - b.num_ * a.den_, a.den_ * b.den_);
}

RationalFunction operator*(const RationalFunction& a, const RationalFunction& b) {
  return RationalFunction(a.num_ * b.num_, a.den_ * b.den_);
}

RationalFunction operator/(const RationalFunction& a, const RationalFunction& b) {
  if (b.is_zero()) fail(Errc::DivisionByZero, "division by zero rational function");
  return RationalFunction(a.num_ * b.den_, a.den_ * b.num_);
}

RationalFunction RationalFunction::inv() const {
  if (is_zero()) fail(Errc::DivisionByZero, "inverse of zero rational function");
  return RationalFunction(den_, num_);
}

RationalFunction RationalFunction::pow(int64_t e) const {
  if (e < 0) return inv().pow(-e);
  RationalFunction r = RationalFunction::one(modulus());
  RationalFunction base = *this;
  while (e > 0) {
    if (e & 1) r = r * base;
    base = base * base;
    e >>= 1;
  }
  return r;
}

Fp RationalFunction::eval(int64_t x0) const {
  Fp d(den_.eval(x0), modulus());
  if (d.is_zero()) fail(Errc::EvaluationPole, "rational function pole at x=" + std::to_string(x0));
  return Fp(num_.eval(x0), modulus()) / d;
}

int RationalFunction::valuation_at(int64_t x0) const {
  if (is_zero()) fail(Errc::DivisionByZero, "valuation of zero rational function");
  return num_.root_multiplicity(x0) - den_.root_multiplicity(x0);
}

std::string RationalFunction::str() const {
  if (den_.is_constant()) return num_.str();
  return num_.str() + "/" + den_.str();
}

RationalFunction RationalFunction::parse(int64_t p, const std::string& text) {
  auto slash = text.find('/');
  if (slash == std::string::npos) return RationalFunction::from_poly(Poly::parse(p, text));
  return RationalFunction(Poly::parse(p, text.substr(0, slash)), Poly::parse(p, text.substr(slash + 1)));
}

} // namespace atlas
