#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "atlas/fp.hpp"

namespace atlas {

/// Weierstrass curve y^2 = x^3 + a*x + b over F_p, p > 3, smooth.
struct CurveSpec {
  int64_t p = 0;
  int64_t a = 0;
  int64_t b = 0;

  CurveSpec() = default;
  CurveSpec(int64_t p_, int64_t a_, int64_t b_);

  bool operator==(const CurveSpec& o) const { return p == o.p && a == o.a && b == o.b; }
  /// x^3 + a*x + b evaluated in F_p
  int64_t rhs(int64_t x) const;
};

struct CurvePoint {
  bool inf = true;
  int64_t x = 0;
  int64_t y = 0;

  CurvePoint() = default; // point at infinity
  CurvePoint(int64_t x_, int64_t y_) : inf(false), x(x_), y(y_) {}
  static CurvePoint infinity() { return CurvePoint(); }

  bool is_infinity() const { return inf; }
  bool is_two_torsion_affine() const { return !inf && y == 0; }

  bool operator==(const CurvePoint& o) const { return inf == o.inf && (inf || (x == o.x && y == o.y)); }
  bool operator!=(const CurvePoint& o) const { return !(*this == o); }
  bool operator<(const CurvePoint& o) const {
    if (inf != o.inf) return inf > o.inf; // infinity sorts first
    if (x != o.x) return x < o.x;
    return y < o.y;
  }

  std::string str() const;
  static CurvePoint parse(const std::string& text);
};

/// Group-law operations on E(F_p).
class Curve {
public:
  explicit Curve(CurveSpec spec);

  const CurveSpec& spec() const { return spec_; }
  int64_t p() const { return spec_.p; }

  bool on_curve(const CurvePoint& pt) const;
  void require_on_curve(const CurvePoint& pt) const;

  CurvePoint add(const CurvePoint& P, const CurvePoint& Q) const;
  CurvePoint neg(const CurvePoint& P) const;
  CurvePoint dbl(const CurvePoint& P) const { return add(P, P); }
  CurvePoint mul(int64_t n, CurvePoint P) const;

  /// all rational points (O first, then sorted affine); intended for small p
  std::vector<CurvePoint> points() const;
  /// the affine points with y = 0 (rational 2-torsion minus O)
  std::vector<CurvePoint> two_torsion_affine() const;
  /// upper bound p + 1 + 2*ceil(sqrt(p)) on the group order
  int64_t hasse_bound() const;
  /// both points with the given x-coordinate, empty if x is not on the curve
  std::vector<CurvePoint> lift_x(int64_t x) const;

private:
  CurveSpec spec_;
};

} // namespace atlas
