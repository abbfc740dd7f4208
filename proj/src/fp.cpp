#include "atlas/fp.hpp"

#include <ostream>

namespace atlas {

namespace {

int64_t join(int64_t a, int64_t b) {
  if (a == 0) return b;
  if (b != 0 && a != b) fail(Errc::BackendMismatch, "mixed moduli in F_p arithmetic");
  return a;
}

} // namespace

Fp operator+(Fp a, Fp b) {
  int64_t p = join(a.p, b.p);
  if (p == 0) return Fp();
  return Fp(a.v + b.v, p);
}

Fp operator-(Fp a, Fp b) {
  int64_t p = join(a.p, b.p);
  if (p == 0) return Fp();
  return Fp(a.v - b.v + p, p);
}

Fp operator*(Fp a, Fp b) {
  int64_t p = join(a.p, b.p);
  if (p == 0) return Fp();
  return Fp(a.v * b.v % p, p);
}

Fp operator/(Fp a, Fp b) {
  if (b.is_zero()) fail(Errc::DivisionByZero, "division by zero in F_p");
  return a * b.inv();
}

Fp Fp::inv() const {
  if (is_zero()) fail(Errc::DivisionByZero, "inverse of zero in F_p");
  return Fp(mod_inv(v, p), p);
}

Fp Fp::pow(int64_t e) const {
  if (e < 0) return inv().pow(-e);
  return Fp(mod_pow(v, e, p), p);
}

std::ostream& operator<<(std::ostream& os, const Fp& a) { return os << a.v; }

int64_t mod_pow(int64_t base, int64_t exp, int64_t p) {
  int64_t r = 1 % p;
  base = ((base % p) + p) % p;
  while (exp > 0) {
    if (exp & 1) r = r * base % p;
    base = base * base % p;
    exp >>= 1;
  }
  return r;
}

int64_t mod_inv(int64_t a, int64_t p) {
  a = ((a % p) + p) % p;
  if (a == 0) fail(Errc::DivisionByZero, "mod_inv(0)");
  int64_t t = 0, new_t = 1, r = p, new_r = a;
  while (new_r != 0) {
    int64_t q = r / new_r;
    int64_t tmp = t - q * new_t;
    t = new_t;
    new_t = tmp;
    tmp = r - q * new_r;
    r = new_r;
    new_r = tmp;
  }
  return ((t % p) + p) % p;
}

bool is_prime(int64_t n) {
  if (n < 2) return false;
  for (int64_t d : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    if (n % d == 0) return n == d;
  }
  // deterministic Miller-Rabin for 64-bit range with the bases above
  int64_t d = n - 1;
  int s = 0;
  while (d % 2 == 0) d /= 2, ++s;
  for (int64_t a : {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37}) {
    int64_t x = mod_pow(a, d, n);
    if (x == 1 || x == n - 1) continue;
    bool witness = true;
    for (int i = 0; i + 1 < s; ++i) {
      x = x * x % n;
      if (x == n - 1) {
        witness = false;
        break;
      }
    }
    if (witness) return false;
  }
  return true;
}

int64_t sqrt_mod(int64_t a, int64_t p) {
  a = ((a % p) + p) % p;
  if (a == 0) return 0;
  if (mod_pow(a, (p - 1) / 2, p) != 1) return -1;
  if (p % 4 == 3) return mod_pow(a, (p + 1) / 4, p);
  // Tonelli-Shanks
  int64_t q = p - 1;
  int s = 0;
  while (q % 2 == 0) q /= 2, ++s;
  int64_t z = 2;
  while (mod_pow(z, (p - 1) / 2, p) != p - 1) ++z;
  int64_t m = s;
  int64_t c = mod_pow(z, q, p);
  int64_t t = mod_pow(a, q, p);
  int64_t r = mod_pow(a, (q + 1) / 2, p);
  while (t != 1) {
    int64_t i = 0, tt = t;
    while (tt != 1) {
      tt = tt * tt % p;
      ++i;
    }
    int64_t b = mod_pow(c, int64_t(1) << (m - i - 1), p);
    m = i;
    c = b * b % p;
    t = t * c % p;
    r = r * b % p;
  }
  return r;
}

const char* errc_name(Errc code) {
  switch (code) {
    case Errc::DivisionByZero: return "DivisionByZero";
    case Errc::PrecisionExhausted: return "PrecisionExhausted";
    case Errc::BackendMismatch: return "BackendMismatch";
    case Errc::NonZeroDegree: return "NonZeroDegree";
    case Errc::UnsupportedSupport: return "UnsupportedSupport";
    case Errc::NoSuchFunction: return "NoSuchFunction";
    case Errc::NotSplittable: return "NotSplittable";
    case Errc::EvaluationPole: return "EvaluationPole";
    case Errc::SingularFiber: return "SingularFiber";
    case Errc::NotAJump: return "NotAJump";
    case Errc::OutOfFamily: return "OutOfFamily";
    case Errc::SideConditionViolated: return "SideConditionViolated";
    case Errc::InvalidChoice: return "InvalidChoice";
    case Errc::OutOfUniverse: return "OutOfUniverse";
    case Errc::MalformedInput: return "MalformedInput";
  }
  return "Unknown";
}

} // namespace atlas
