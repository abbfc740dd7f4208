#include "atlas/curve.hpp"

#include <cmath>
#include <sstream>

namespace atlas {

CurveSpec::CurveSpec(int64_t p_, int64_t a_, int64_t b_) : p(p_), a(((a_ % p_) + p_) % p_), b(((b_ % p_) + p_) % p_) {
  if (p <= 3 || !is_prime(p)) fail(Errc::MalformedInput, "curve modulus must be a prime > 3");
  if (p > (int64_t(1) << 31)) fail(Errc::MalformedInput, "curve modulus too large");
  int64_t disc = (4 * (a * a % p) % p * a % p + 27 * (b * b % p) % p) % p;
  if (disc == 0) fail(Errc::MalformedInput, "singular curve: 4a^3 + 27b^2 = 0");
}

int64_t CurveSpec::rhs(int64_t x) const {
  x = ((x % p) + p) % p;
  return ((x * x % p * x % p) + a * x % p + b) % p;
}

std::string CurvePoint::str() const {
  if (inf) return "O";
  std::ostringstream os;
  os << "(" << x << "," << y << ")";
  return os.str();
}

CurvePoint CurvePoint::parse(const std::string& text) {
  std::string t;
  for (char c : text)
    if (!std::isspace((unsigned char)c)) t += c;
  if (t == "O" || t == "o" || t == "inf") return CurvePoint::infinity();
  if (t.size() < 5 || t.front() != '(' || t.back() != ')') fail(Errc::MalformedInput, "bad point: " + text);
  auto comma = t.find(',');
  if (comma == std::string::npos) fail(Errc::MalformedInput, "bad point: " + text);
  try {
    int64_t x = std::stoll(t.substr(1, comma - 1));
    int64_t y = std::stoll(t.substr(comma + 1, t.size() - comma - 2));
    return CurvePoint(x, y);
  } catch (const std::exception&) {
    fail(Errc::MalformedInput, "bad point: " + text);
  }
}

Curve::Curve(CurveSpec spec) : spec_(spec) {}

bool Curve::on_curve(const CurvePoint& pt) const {
  if (pt.inf) return true;
  if (pt.x < 0 || pt.x >= p() || pt.y < 0 || pt.y >= p()) return false;
  return pt.y * pt.y % p() == spec_.rhs(pt.x);
}

void Curve::require_on_curve(const CurvePoint& pt) const {
  if (!on_curve(pt)) fail(Errc::MalformedInput, "point " + pt.str() + " not on curve");
}

CurvePoint Curve::neg(const CurvePoint& P) const {
  if (P.inf) return P;
  return CurvePoint(P.x, (p() - P.y) % p());
}

CurvePoint Curve::add(const CurvePoint& P, const CurvePoint& Q) const {
  if (P.inf) return Q;
  if (Q.inf) return P;
  int64_t pr = p();
  if (P.x == Q.x && (P.y + Q.y) % pr == 0) return CurvePoint::infinity();
  int64_t lambda;
  if (P.x == Q.x) {
    lambda = (3 * (P.x * P.x % pr) % pr + spec_.a) % pr * mod_inv(2 * P.y % pr, pr) % pr;
  } else {
    lambda = (Q.y - P.y + pr) % pr * mod_inv((Q.x - P.x + pr) % pr, pr) % pr;
  }
  int64_t x3 = ((lambda * lambda % pr - P.x - Q.x) % pr + 2 * pr) % pr;
  int64_t y3 = ((lambda * ((P.x - x3 + pr) % pr) % pr - P.y) % pr + pr) % pr;
  return CurvePoint(x3, y3);
}

CurvePoint Curve::mul(int64_t n, CurvePoint P) const {
  if (n < 0) {
    n = -n;
    P = neg(P);
  }
  CurvePoint R = CurvePoint::infinity();
  while (n > 0) {
    if (n & 1) R = add(R, P);
    P = add(P, P);
    n >>= 1;
  }
  return R;
}

std::vector<CurvePoint> Curve::points() const {
  std::vector<CurvePoint> pts;
  pts.push_back(CurvePoint::infinity());
  for (int64_t x = 0; x < p(); ++x) {
    int64_t r = spec_.rhs(x);
    int64_t y = sqrt_mod(r, p());
    if (y < 0) continue;
    if (y == 0) {
      pts.emplace_back(x, 0);
    } else {
      pts.emplace_back(x, std::min(y, p() - y));
      pts.emplace_back(x, std::max(y, p() - y));
    }
  }
  return pts;
}

std::vector<CurvePoint> Curve::two_torsion_affine() const {
  std::vector<CurvePoint> pts;
  for (int64_t x = 0; x < p(); ++x)
    if (spec_.rhs(x) == 0) pts.emplace_back(x, 0);
  return pts;
}

int64_t Curve::hasse_bound() const {
  int64_t s = static_cast<int64_t>(std::sqrt(double(p()))) + 2;
  return p() + 1 + 2 * s;
}

std::vector<CurvePoint> Curve::lift_x(int64_t x) const {
  x = ((x % p()) + p()) % p();
  int64_t y = sqrt_mod(spec_.rhs(x), p());
  if (y < 0) return {};
  if (y == 0) return {CurvePoint(x, 0)};
  return {CurvePoint(x, y), CurvePoint(x, p() - y)};
}

} // namespace atlas
