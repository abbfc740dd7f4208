#pragma once

#include <cstdint>
#include <iosfwd>

#include "atlas/errors.hpp"

namespace atlas {

/// Element of a prime field F_p, carrying its modulus. Two elements may be
/// combined when their moduli agree (a modulus of 0 marks an uninitialized
/// zero that unifies with anything).
struct Fp {
  int64_t v = 0;
  int64_t p = 0;

  Fp() = default;
  Fp(int64_t value, int64_t modulus) : v(((value % modulus) + modulus) % modulus), p(modulus) {}

  bool is_zero() const { return v == 0; }

  friend Fp operator+(Fp a, Fp b);
  friend Fp operator-(Fp a, Fp b);
  friend Fp operator*(Fp a, Fp b);
  friend Fp operator/(Fp a, Fp b);
  Fp operator-() const { return p ? Fp(p - v, p) : Fp(); }
  bool operator==(const Fp& o) const { return v == o.v; }
  bool operator!=(const Fp& o) const { return v != o.v; }

  Fp inv() const;
  Fp pow(int64_t e) const;

  friend std::ostream& operator<<(std::ostream& os, const Fp& a);
};

int64_t mod_pow(int64_t base, int64_t exp, int64_t p);
int64_t mod_inv(int64_t a, int64_t p);
bool is_prime(int64_t n);

/// Square root mod an odd prime via Tonelli-Shanks; returns -1 when `a` is a
/// non-residue.
int64_t sqrt_mod(int64_t a, int64_t p);

} // namespace atlas
