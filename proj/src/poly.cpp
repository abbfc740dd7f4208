#include "atlas/poly.hpp"

#include <algorithm>
#include <cctype>
#include <sstream>

namespace atlas {

namespace {

int64_t join(int64_t a, int64_t b) {
  if (a == 0) return b;
  if (b != 0 && a != b) fail(Errc::BackendMismatch, "mixed moduli in polynomial arithmetic");
  return a;
}

} // namespace

Poly::Poly(int64_t p, std::vector<int64_t> coeffs) : p_(p), coeffs_(std::move(coeffs)) {
  for (auto& c : coeffs_) c = ((c % p_) + p_) % p_;
  trim();
}

void Poly::trim() {
  while (!coeffs_.empty() && coeffs_.back() == 0) coeffs_.pop_back();
}

Fp Poly::eval(Fp x) const { return Fp(eval(x.v), p_); }

int64_t Poly::eval(int64_t x) const {
  x = ((x % p_) + p_) % p_;
  int64_t r = 0;
  for (auto it = coeffs_.rbegin(); it != coeffs_.rend(); ++it) r = (r * x + *it) % p_;
  return r;
}

Poly Poly::derivative() const {
  std::vector<int64_t> d;
  for (size_t i = 1; i < coeffs_.size(); ++i) d.push_back(coeffs_[i] % p_ * (int64_t(i) % p_) % p_);
  return Poly(p_, std::move(d));
}

Poly Poly::monic() const {
  if (is_zero()) return *this;
  return scaled(Fp(lead(), p_).inv());
}

Poly Poly::shift(int k) const {
  if (is_zero()) return *this;
  std::vector<int64_t> c(coeffs_.size() + k, 0);
  std::copy(coeffs_.begin(), coeffs_.end(), c.begin() + k);
  return Poly(p_, std::move(c));
}

Poly operator+(const Poly& a, const Poly& b) {
  int64_t p = join(a.p_, b.p_);
  std::vector<int64_t> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0);
  for (size_t i = 0; i < c.size(); ++i) c[i] = (a.coeff(int(i)) + b.coeff(int(i))) % p;
  return Poly(p, std::move(c));
}

Poly operator-(const Poly& a, const Poly& b) {
  int64_t p = join(a.p_, b.p_);
  std::vector<int64_t> c(std::max(a.coeffs_.size(), b.coeffs_.size()), 0);
  for (size_t i = 0; i < c.size(); ++i) c[i] = (a.coeff(int(i)) - b.coeff(int(i)) + p) % p;
  return Poly(p, std::move(c));
}

Poly operator*(const Poly& a, const Poly& b) {
  int64_t p = join(a.p_, b.p_);
  if (a.is_zero() || b.is_zero()) return Poly::zero(p);
  std::vector<int64_t> c(a.coeffs_.size() + b.coeffs_.size() - 1, 0);
  for (size_t i = 0; i < a.coeffs_.size(); ++i)
    for (size_t j = 0; j < b.coeffs_.size(); ++j) c[i + j] = (c[i + j] + a.coeffs_[i] * b.coeffs_[j]) % p;
  return Poly(p, std::move(c));
}

Poly Poly::operator-() const {
  std::vector<int64_t> c(coeffs_);
  for (auto& x : c) x = (p_ - x) % p_;
  return Poly(p_, std::move(c));
}

Poly Poly::scaled(Fp c) const {
  std::vector<int64_t> r(coeffs_);
  for (auto& x : r) x = x * c.v % p_;
  return Poly(p_, std::move(r));
}

std::pair<Poly, Poly> Poly::divmod(const Poly& a, const Poly& b) {
  if (b.is_zero()) fail(Errc::DivisionByZero, "polynomial division by zero");
  int64_t p = join(a.p_, b.p_);
  Poly rem = a;
  if (a.degree() < b.degree()) return {Poly::zero(p), rem};
  std::vector<int64_t> q(a.degree() - b.degree() + 1, 0);
  int64_t inv_lead = mod_inv(b.lead(), p);
  std::vector<int64_t> r = rem.coeffs_;
  for (int i = int(q.size()) - 1; i >= 0; --i) {
    int top = i + b.degree();
    if (top >= (int)r.size() || r[top] == 0) continue;
    int64_t f = r[top] * inv_lead % p;
    q[i] = f;
    for (int j = 0; j <= b.degree(); ++j) r[i + j] = (r[i + j] - f * b.coeff(j) % p + p * p) % p;
  }
  return {Poly(p, std::move(q)), Poly(p, std::move(r))};
}

Poly Poly::gcd(Poly a, Poly b) {
  while (!b.is_zero()) {
    Poly r = divmod(a, b).second;
    a = b;
    b = r;
  }
  return a.monic();
}

int Poly::root_multiplicity(int64_t x0) const {
  Poly lin = Poly::linear_root(p_, x0);
  Poly cur = *this;
  int m = 0;
  while (!cur.is_zero() && cur.eval(x0) == 0) {
    cur = divmod(cur, lin).first;
    ++m;
  }
  return m;
}

Poly Poly::deflate(int64_t x0, int m) const {
  Poly lin = Poly::linear_root(p_, x0);
  Poly cur = *this;
  for (int i = 0; i < m; ++i) cur = divmod(cur, lin).first;
  return cur;
}

std::vector<std::pair<int64_t, int>> Poly::rational_roots(Poly* cofactor) const {
  std::vector<std::pair<int64_t, int>> roots;
  Poly cur = *this;
  for (int64_t x = 0; x < p_ && cur.degree() > 0; ++x) {
    if (cur.eval(x) != 0) continue;
    int m = cur.root_multiplicity(x);
    cur = cur.deflate(x, m);
    roots.emplace_back(x, m);
  }
  if (cofactor) *cofactor = cur;
  return roots;
}

std::string Poly::str() const {
  if (is_zero()) return "0";
  std::ostringstream os;
  bool first = true;
  for (size_t i = 0; i < coeffs_.size(); ++i) {
    if (coeffs_[i] == 0) continue;
    if (!first) os << "+";
    first = false;
    if (i == 0) {
      os << coeffs_[i];
    } else {
      if (coeffs_[i] != 1) os << coeffs_[i] << "*";
      os << "x";
      if (i > 1) os << "^" << i;
    }
  }
  return os.str();
}

Poly Poly::parse(int64_t p, const std::string& text) {
  std::vector<int64_t> coeffs;
  auto add_term = [&](int64_t c, int e) {
    if (e >= (int)coeffs.size()) coeffs.resize(e + 1, 0);
    coeffs[e] = ((coeffs[e] + c) % p + p) % p;
  };
  size_t i = 0;
  auto skip_ws = [&] {
    while (i < text.size() && std::isspace((unsigned char)text[i])) ++i;
  };
  skip_ws();
  if (i >= text.size()) fail(Errc::MalformedInput, "empty polynomial");
  while (i < text.size()) {
    skip_ws();
    int64_t sign = 1;
    while (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      if (text[i] == '-') sign = -sign;
      ++i;
      skip_ws();
    }
    if (i >= text.size()) fail(Errc::MalformedInput, "dangling sign in polynomial: " + text);
    int64_t c = 1;
    bool saw_digits = false;
    if (std::isdigit((unsigned char)text[i])) {
      c = 0;
      while (i < text.size() && std::isdigit((unsigned char)text[i])) {
        c = c * 10 + (text[i] - '0');
        c %= p;
        ++i;
      }
      saw_digits = true;
    }
    skip_ws();
    int e = 0;
    if (i < text.size() && text[i] == '*') {
      ++i;
      skip_ws();
    }
    if (i < text.size() && text[i] == 'x') {
      ++i;
      e = 1;
      skip_ws();
      if (i < text.size() && text[i] == '^') {
        ++i;
        skip_ws();
        if (i >= text.size() || !std::isdigit((unsigned char)text[i]))
          fail(Errc::MalformedInput, "bad exponent in polynomial: " + text);
        e = 0;
        while (i < text.size() && std::isdigit((unsigned char)text[i])) e = e * 10 + (text[i] - '0'), ++i;
      }
    } else if (!saw_digits) {
      fail(Errc::MalformedInput, "bad term in polynomial: " + text);
    }
    add_term(sign * c, e);
    skip_ws();
  }
  return Poly(p, std::move(coeffs));
}

} // namespace atlas
