#pragma once

#include <map>
#include <optional>

#include "atlas/laurent.hpp"

namespace atlas {

using FpMat = LaurentMat<Fp>;
using XMat = LaurentMat<RationalFunction>;

/// 2x2 invertible matrix over F[y, 1/y] where F is F_p or F_p(x) with a
/// declared set of x-values where entry denominators may vanish.
struct LaurentMatrix {
  int64_t p = 0;
  bool over_fpx = false;          // false: F_p; true: F_p(x)
  XMat entries;                   // F_p matrices are stored with constant entries
  std::vector<int64_t> allowed_poles;

  FpMat as_fp() const;            // requires over_fpx == false
  static LaurentMatrix from_fp(int64_t p, const FpMat& m);
};

struct SplittingCertificate {
  XMat m_side;
  XMat n_side;
  int m = 0;
  int n = 0;
  int type() const { return m - n; }
};

/// Birkhoff factorization of the matrix over its declared coefficient field.
SplittingCertificate birkhoff_split(const LaurentMatrix& A);
bool verify_certificate(const LaurentMatrix& A, const SplittingCertificate& cert);

/// Evaluate all entries at x = x0 (over F_p(x) only).
FpMat evaluate_at(const LaurentMatrix& A, int64_t x0);

/// Splitting type of the fiber matrix A(x0).
int fiber_type(const LaurentMatrix& A, int64_t x0);

struct JumpReport {
  int generic_type = 0;
  std::map<int64_t, int> fiber_types; // only the jumping x-values
  std::map<int64_t, int> epsilon;     // (fiber - generic)/2 per jump point
};

/// Scan every x in F_p outside the entry pole set.
JumpReport scan_fibers(const LaurentMatrix& A);

/// One jump-removal pass at x0: bring A(x0) to diagonal form by a constant
/// frame change, then conjugate by diag(x - x0, 1). Throws NotAJump when the
/// fiber type at x0 already equals the generic type.
LaurentMatrix remove_jump(const LaurentMatrix& A, int64_t x0);

/// Multiplicity of x0 as a zero of det(M) for the certificate pair (M, N)
/// scaled so the minimal coefficient valuation at x0 over both factors is 0.
int det_m_multiplicity(const LaurentMatrix& A, int64_t x0);

} // namespace atlas
