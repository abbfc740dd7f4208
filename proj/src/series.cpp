#include "atlas/series.hpp"

#include <algorithm>

namespace atlas {

Series::Series(int64_t p, int lead, int prec, std::vector<int64_t> coeffs)
    : p_(p), lead_(lead), prec_(prec), coeffs_(std::move(coeffs)) {
  if ((int)coeffs_.size() > prec_ - lead_) coeffs_.resize(std::max(0, prec_ - lead_));
  for (auto& c : coeffs_) c = ((c % p_) + p_) % p_;
  trim();
}

void Series::trim() {
  size_t skip = 0;
  while (skip < coeffs_.size() && coeffs_[skip] == 0) ++skip;
  if (skip > 0) {
    coeffs_.erase(coeffs_.begin(), coeffs_.begin() + skip);
    lead_ += int(skip);
  }
  while (!coeffs_.empty() && lead_ + (int)coeffs_.size() > prec_) coeffs_.pop_back();
  if (coeffs_.empty()) lead_ = prec_;
}

Series Series::constant(Fp c, int prec) {
  if (c.is_zero() || prec <= 0) return Series::zero(c.p, prec);
  return Series(c.p, 0, prec, {c.v});
}

Series Series::monomial(Fp c, int exp, int prec) {
  if (c.is_zero() || exp >= prec) return Series::zero(c.p, prec);
  return Series(c.p, exp, prec, {c.v});
}

int64_t Series::coeff(int exp) const {
  int i = exp - lead_;
  if (i < 0 || i >= (int)coeffs_.size()) return 0;
  return coeffs_[i];
}

std::vector<int64_t> Series::coeff_window(int from, int count) const {
  std::vector<int64_t> w(count, 0);
  for (int i = 0; i < count; ++i) w[i] = coeff(from + i);
  return w;
}

Series Series::truncated(int prec) const {
  if (prec >= prec_) return *this;
  return Series(p_, lead_, prec, coeffs_);
}

Series operator+(const Series& a, const Series& b) {
  int prec = std::min(a.prec_, b.prec_);
  int lead = std::min({a.lead_, b.lead_, prec});
  std::vector<int64_t> c(std::max(0, prec - lead), 0);
  for (int i = 0; i < (int)c.size(); ++i) c[i] = (a.coeff(lead + i) + b.coeff(lead + i)) % a.p_;
  return Series(a.p_, lead, prec, std::move(c));
}

Series operator-(const Series& a, const Series& b) { return a + (-b); }

Series Series::operator-() const {
  std::vector<int64_t> c(coeffs_);
  for (auto& x : c) x = (p_ - x) % p_;
  return Series(p_, lead_, prec_, std::move(c));
}

Series Series::scaled(Fp c) const {
  if (c.is_zero()) return Series::zero(p_, prec_);
  std::vector<int64_t> r(coeffs_);
  for (auto& x : r) x = x * c.v % p_;
  return Series(p_, lead_, prec_, std::move(r));
}

Series operator*(const Series& a, const Series& b) {
  // zero-to-precision operands: result known to vanish to combined order
  if (a.coeffs_.empty() || b.coeffs_.empty()) {
    int prec = std::min(a.prec_ + b.lead_, b.prec_ + a.lead_);
    return Series::zero(a.p_, prec);
  }
  int lead = a.lead_ + b.lead_;
  int prec = std::min(a.prec_ + b.lead_, b.prec_ + a.lead_);
  std::vector<int64_t> c(std::max(0, prec - lead), 0);
  for (size_t i = 0; i < a.coeffs_.size(); ++i) {
    if (a.coeffs_[i] == 0) continue;
    for (size_t j = 0; j < b.coeffs_.size(); ++j) {
      size_t k = i + j;
      if (k >= c.size()) break;
      c[k] = (c[k] + a.coeffs_[i] * b.coeffs_[j]) % a.p_;
    }
  }
  return Series(a.p_, lead, prec, std::move(c));
}

Series Series::inv() const {
  if (coeffs_.empty()) fail(Errc::PrecisionExhausted, "inverse of series with no known leading term");
  int rel = prec_ - lead_;
  std::vector<int64_t> c(rel, 0);
  int64_t inv0 = mod_inv(coeffs_[0], p_);
  c[0] = inv0;
  for (int n = 1; n < rel; ++n) {
    // sum_{k=0..n} a_k * c_{n-k} = 0
    int64_t s = 0;
    for (int k = 1; k <= n; ++k) {
      int64_t ak = (k < (int)coeffs_.size()) ? coeffs_[k] : 0;
      if (ak) s = (s + ak * c[n - k]) % p_;
    }
    c[n] = (p_ - s) % p_ * inv0 % p_;
  }
  return Series(p_, -lead_, -lead_ + rel, std::move(c));
}

Series operator/(const Series& a, const Series& b) { return a * b.inv(); }

Series Series::pow(int64_t e) const {
  if (e < 0) return inv().pow(-e);
  if (e == 0) return Series::constant(Fp(1, p_), prec_);
  Series r = *this;
  for (int64_t i = 1; i < e; ++i) r = r * (*this);
  return r;
}

Series Series::sqrt(Fp lead_root) const {
  if (coeffs_.empty()) fail(Errc::PrecisionExhausted, "sqrt of series with no known leading term");
  if (lead_ % 2 != 0) fail(Errc::MalformedInput, "sqrt of series with odd valuation");
  if ((lead_root * lead_root).v != coeffs_[0]) fail(Errc::MalformedInput, "sqrt: wrong branch leading coefficient");
  int rel = prec_ - lead_;
  std::vector<int64_t> s(rel, 0);
  s[0] = lead_root.v;
  int64_t inv2s0 = mod_inv(2 * s[0] % p_, p_);
  for (int n = 1; n < rel; ++n) {
    // (sum s_i t^i)^2 = this/t^lead: 2*s0*s_n = a_n - sum_{1<=i<=n-1} s_i s_{n-i}
    int64_t an = (n < (int)coeffs_.size()) ? coeffs_[n] : 0;
    int64_t acc = 0;
    for (int i = 1; i < n; ++i) acc = (acc + s[i] * s[n - i]) % p_;
    s[n] = ((an - acc) % p_ + p_) % p_ * inv2s0 % p_;
  }
  return Series(p_, lead_ / 2, lead_ / 2 + rel, std::move(s));
}

Series Series::from_poly(const Poly& poly, const Series& x, int prec) {
  Series r = Series::zero(poly.modulus(), prec);
  // Horner in the series ring
  for (int i = poly.degree(); i >= 0; --i) {
    r = r * x.truncated(prec) + Series::constant(Fp(poly.coeff(i), poly.modulus()), prec);
  }
  return r;
}

Series Series::from_rational(const RationalFunction& f, const Series& x, int prec) {
  if (f.is_zero()) return Series::zero(f.modulus(), prec);
  // pad so that cancellation between num and den still leaves `prec` terms
  int pad = 2 * (f.num().degree() + f.den().degree() + 4);
  Series xs = x.truncated(prec + pad);
  Series num = from_poly(f.num(), xs, prec + pad);
  Series den = from_poly(f.den(), xs, prec + pad);
  if (!den.known_nonzero()) fail(Errc::PrecisionExhausted, "series denominator vanished to working precision");
  return (num / den).truncated(prec);
}

} // namespace atlas
