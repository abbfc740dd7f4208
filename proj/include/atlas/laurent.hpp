#pragma once

#include <array>
#include <map>
#include <vector>

#include "atlas/errors.hpp"
#include "atlas/fp.hpp"
#include "atlas/rational.hpp"

namespace atlas {

/// Laurent polynomial over a coefficient field F (F_p or F_p(x)), stored
/// sparsely as exponent -> nonzero coefficient.
template <class F>
class LaurentPoly {
public:
  LaurentPoly() = default;
  static LaurentPoly zero() { return LaurentPoly(); }
  static LaurentPoly term(const F& coeff, int exp) {
    LaurentPoly r;
    if (!coeff.is_zero()) r.c_[exp] = coeff;
    return r;
  }

  bool is_zero() const { return c_.empty(); }
  int lo() const { return c_.begin()->first; }
  int hi() const { return c_.rbegin()->first; }
  bool has(int exp) const { return c_.count(exp) != 0; }
  const F& coeff(int exp) const { return c_.at(exp); }
  bool is_monomial() const { return c_.size() == 1; }
  const std::map<int, F>& terms() const { return c_; }

  bool poly_in_y() const { return is_zero() || lo() >= 0; }
  bool poly_in_yinv() const { return is_zero() || hi() <= 0; }

  friend LaurentPoly operator+(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r = a;
    for (auto& [e, c] : b.c_) r.add_term(e, c);
    return r;
  }
  friend LaurentPoly operator-(const LaurentPoly& a, const LaurentPoly& b) { return a + (-b); }
  LaurentPoly operator-() const {
    LaurentPoly r;
    for (auto& [e, c] : c_) r.c_[e] = -c;
    return r;
  }
  friend LaurentPoly operator*(const LaurentPoly& a, const LaurentPoly& b) {
    LaurentPoly r;
    for (auto& [ea, ca] : a.c_)
      for (auto& [eb, cb] : b.c_) r.add_term(ea + eb, ca * cb);
    return r;
  }
  LaurentPoly scaled(const F& s) const {
    LaurentPoly r;
    if (s.is_zero()) return r;
    for (auto& [e, c] : c_) r.add_term(e, c * s);
    return r;
  }
  LaurentPoly shifted(int k) const {
    LaurentPoly r;
    for (auto& [e, c] : c_) r.c_[e + k] = c;
    return r;
  }
  bool operator==(const LaurentPoly& o) const {
    if (c_.size() != o.c_.size()) return false;
    auto it = o.c_.begin();
    for (auto& [e, c] : c_) {
      if (it->first != e || !(it->second == c)) return false;
      ++it;
    }
    return true;
  }

private:
  void add_term(int e, const F& c) {
    auto it = c_.find(e);
    if (it == c_.end()) {
      if (!c.is_zero()) c_[e] = c;
      return;
    }
    F s = it->second + c;
    if (s.is_zero()) c_.erase(it);
    else it->second = s;
  }
  std::map<int, F> c_;
};

/// 2x2 matrix with LaurentPoly<F> entries.
template <class F>
struct LaurentMat {
  std::array<std::array<LaurentPoly<F>, 2>, 2> e;

  LaurentPoly<F>& operator()(int i, int j) { return e[i][j]; }
  const LaurentPoly<F>& operator()(int i, int j) const { return e[i][j]; }

  static LaurentMat identity(const F& one) {
    LaurentMat m;
    m(0, 0) = LaurentPoly<F>::term(one, 0);
    m(1, 1) = LaurentPoly<F>::term(one, 0);
    return m;
  }

  LaurentPoly<F> det() const { return e[0][0] * e[1][1] - e[0][1] * e[1][0]; }

  friend LaurentMat operator*(const LaurentMat& a, const LaurentMat& b) {
    LaurentMat r;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) r(i, j) = a(i, 0) * b(0, j) + a(i, 1) * b(1, j);
    return r;
  }
  bool operator==(const LaurentMat& o) const {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        if (!(e[i][j] == o.e[i][j])) return false;
    return true;
  }

  bool all_poly_in_y() const {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        if (!e[i][j].poly_in_y()) return false;
    return true;
  }
  bool all_poly_in_yinv() const {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        if (!e[i][j].poly_in_yinv()) return false;
    return true;
  }

  /// inverse of a matrix whose determinant is a unit of F at y^0
  LaurentMat inverse() const {
    LaurentPoly<F> d = det();
    if (d.is_zero() || !d.is_monomial() || d.lo() != 0)
      fail(Errc::NotSplittable, "matrix is not invertible over its coefficient ring");
    F unit = d.coeff(0);
    F dinv = (unit / unit) / unit;
    LaurentMat r;
    r(0, 0) = e[1][1].scaled(dinv);
    r(0, 1) = (-e[0][1]).scaled(dinv);
    r(1, 0) = (-e[1][0]).scaled(dinv);
    r(1, 1) = e[0][0].scaled(dinv);
    return r;
  }
};

/// Exact Birkhoff factorization data: M over F[1/y], N over F[y], exponents
/// m >= n with M^{-1} A N = diag(y^m, y^n).
template <class F>
struct BirkhoffResult {
  LaurentMat<F> m_side; // M
  LaurentMat<F> n_side; // N
  int m = 0;
  int n = 0;
  int type() const { return m - n; }
};

/// Factor A as M diag(y^m, y^n) N^{-1}; requires det(A) to be a unit of F
/// times a power of y. Deterministic reduction: column Euclid over F[y] on
/// the top row, monomial normalization, two-sided clearing of the lower-left
/// entry, and a trade step that strictly narrows the exponent gap.
template <class F>
BirkhoffResult<F> birkhoff_split(const LaurentMat<F>& A) {
  LaurentPoly<F> d = A.det();
  if (d.is_zero() || !d.is_monomial())
    fail(Errc::NotSplittable, "determinant is not a unit times a power of y");
  F one = d.coeff(d.lo()) / d.coeff(d.lo());

  // overall shift so all entries become polynomials in y
  int mu = 0;
  bool any = false;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      if (!A(i, j).is_zero()) {
        mu = any ? std::min(mu, A(i, j).lo()) : A(i, j).lo();
        any = true;
      }
  LaurentMat<F> B;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j) B(i, j) = A(i, j).shifted(-mu);

  LaurentMat<F> Mi = LaurentMat<F>::identity(one); // accumulated M^{-1}
  LaurentMat<F> N = LaurentMat<F>::identity(one);

  auto col_op = [&](int dst, int src, const LaurentPoly<F>& q) {
    for (int i = 0; i < 2; ++i) B(i, dst) = B(i, dst) - q * B(i, src);
    for (int i = 0; i < 2; ++i) N(i, dst) = N(i, dst) - q * N(i, src);
  };
  auto col_swap = [&] {
    for (int i = 0; i < 2; ++i) std::swap(B(i, 0), B(i, 1));
    for (int i = 0; i < 2; ++i) std::swap(N(i, 0), N(i, 1));
  };
  auto col_scale = [&](int j, const F& s) {
    for (int i = 0; i < 2; ++i) B(i, j) = B(i, j).scaled(s);
    for (int i = 0; i < 2; ++i) N(i, j) = N(i, j).scaled(s);
  };
  auto row_op = [&](int dst, int src, const LaurentPoly<F>& r) {
    for (int j = 0; j < 2; ++j) B(dst, j) = B(dst, j) - r * B(src, j);
    for (int j = 0; j < 2; ++j) Mi(dst, j) = Mi(dst, j) - r * Mi(src, j);
  };
  auto row_swap = [&] {
    std::swap(B.e[0], B.e[1]);
    std::swap(Mi.e[0], Mi.e[1]);
  };

  for (int guard = 0; guard < 4096; ++guard) {
    // column Euclid on the top row over F[y]: reduce the higher degree
    while (!B(0, 1).is_zero()) {
      if (B(0, 0).is_zero()) {
        col_swap();
        break;
      }
      if (B(0, 0).hi() < B(0, 1).hi()) col_swap();
      const LaurentPoly<F>& a = B(0, 0);
      const LaurentPoly<F>& b = B(0, 1);
      col_op(0, 1, LaurentPoly<F>::term(a.coeff(a.hi()) / b.coeff(b.hi()), a.hi() - b.hi()));
    }
    if (B(0, 0).is_zero() || !B(0, 0).is_monomial() || B(1, 1).is_zero() || !B(1, 1).is_monomial())
      fail(Errc::NotSplittable, "reduction failed: diagonal is not monomial");
    col_scale(0, one / B(0, 0).coeff(B(0, 0).lo()));
    col_scale(1, one / B(1, 1).coeff(B(1, 1).lo()));
    int alpha = B(0, 0).lo();
    int beta = B(1, 1).lo();

    // clear the lower-left entry from both sides
    while (!B(1, 0).is_zero() && B(1, 0).hi() >= beta) {
      const LaurentPoly<F>& h = B(1, 0);
      col_op(0, 1, LaurentPoly<F>::term(h.coeff(h.hi()) / B(1, 1).coeff(beta), h.hi() - beta));
    }
    while (!B(1, 0).is_zero() && B(1, 0).lo() <= alpha) {
      const LaurentPoly<F>& h = B(1, 0);
      row_op(1, 0, LaurentPoly<F>::term(h.coeff(h.lo()) / B(0, 0).coeff(alpha), h.lo() - alpha));
    }
    if (B(1, 0).is_zero()) break;
    // residual lives strictly between alpha and beta: trade and restart
    row_swap();
  }
  if (!B(1, 0).is_zero()) fail(Errc::NotSplittable, "reduction did not terminate");

  BirkhoffResult<F> out;
  int m = B(0, 0).lo() + mu;
  int n = B(1, 1).lo() + mu;
  if (m < n) {
    row_swap();
    col_swap();
    std::swap(m, n);
  }
  out.m = m;
  out.n = n;
  if (!Mi.all_poly_in_yinv() || !N.all_poly_in_y())
    fail(Errc::NotSplittable, "reduction produced factors outside their rings");
  out.m_side = Mi.inverse();
  out.n_side = N;
  return out;
}

/// Verify M^{-1} A N = diag(y^m, y^n) exactly, via A*N == M*D.
template <class F>
bool verify_birkhoff(const LaurentMat<F>& A, const BirkhoffResult<F>& r, const F& one) {
  LaurentMat<F> D;
  D(0, 0) = LaurentPoly<F>::term(one, r.m);
  D(1, 1) = LaurentPoly<F>::term(one, r.n);
  if (!r.m_side.all_poly_in_yinv() || !r.n_side.all_poly_in_y()) return false;
  LaurentPoly<F> dm = r.m_side.det();
  LaurentPoly<F> dn = r.n_side.det();
  if (dm.is_zero() || !dm.is_monomial() || dm.lo() != 0) return false;
  if (dn.is_zero() || !dn.is_monomial() || dn.lo() != 0) return false;
  return A * r.n_side == r.m_side * D;
}

} // namespace atlas
