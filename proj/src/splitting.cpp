#include "atlas/splitting.hpp"

namespace atlas {

FpMat LaurentMatrix::as_fp() const {
  if (over_fpx) fail(Errc::BackendMismatch, "matrix is declared over F_p(x)");
  FpMat m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (auto& [e, c] : entries(i, j).terms()) {
        if (!c.is_constant()) fail(Errc::MalformedInput, "non-constant entry in an F_p matrix");
        m(i, j) = m(i, j) + LaurentPoly<Fp>::term(c.num().is_zero() ? Fp(0, p) : Fp(c.num().coeff(0), p), e);
      }
  return m;
}

LaurentMatrix LaurentMatrix::from_fp(int64_t p, const FpMat& m) {
  LaurentMatrix r;
  r.p = p;
  r.over_fpx = false;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (auto& [e, c] : m(i, j).terms())
        r.entries(i, j) = r.entries(i, j) + LaurentPoly<RationalFunction>::term(RationalFunction::constant(c), e);
  return r;
}

namespace {

XMat lift_fp(int64_t p, const FpMat& m) { return LaurentMatrix::from_fp(p, m).entries; }

SplittingCertificate from_fp_result(int64_t p, const BirkhoffResult<Fp>& r) {
  SplittingCertificate c;
  c.m = r.m;
  c.n = r.n;
  c.m_side = lift_fp(p, r.m_side);
  c.n_side = lift_fp(p, r.n_side);
  return c;
}

} // namespace

SplittingCertificate birkhoff_split(const LaurentMatrix& A) {
  if (!A.over_fpx) {
    return from_fp_result(A.p, birkhoff_split(A.as_fp()));
  }
  BirkhoffResult<RationalFunction> r = birkhoff_split(A.entries);
  SplittingCertificate c;
  c.m = r.m;
  c.n = r.n;
  c.m_side = r.m_side;
  c.n_side = r.n_side;
  return c;
}

bool verify_certificate(const LaurentMatrix& A, const SplittingCertificate& cert) {
  BirkhoffResult<RationalFunction> r;
  r.m_side = cert.m_side;
  r.n_side = cert.n_side;
  r.m = cert.m;
  r.n = cert.n;
  return verify_birkhoff(A.entries, r, RationalFunction::one(A.p));
}

FpMat evaluate_at(const LaurentMatrix& A, int64_t x0) {
  if (!A.over_fpx) return A.as_fp();
  FpMat m;
  for (int i = 0; i < 2; ++i)
    for (int j = 0; j < 2; ++j)
      for (auto& [e, c] : A.entries(i, j).terms()) {
        if (c.has_pole_at(x0))
          fail(Errc::EvaluationPole, "entry has a pole at x=" + std::to_string(x0));
        m(i, j) = m(i, j) + LaurentPoly<Fp>::term(c.eval(x0), e);
      }
  return m;
}

int fiber_type(const LaurentMatrix& A, int64_t x0) {
  FpMat m = evaluate_at(A, x0);
  LaurentPoly<Fp> d = m.det();
  if (d.is_zero() || !d.is_monomial())
    fail(Errc::SingularFiber, "fiber matrix at x=" + std::to_string(x0) + " is not invertible");
  BirkhoffResult<Fp> r = birkhoff_split(m);
  return r.type();
}

JumpReport scan_fibers(const LaurentMatrix& A) {
  if (!A.over_fpx) fail(Errc::BackendMismatch, "fiber scan needs a matrix over F_p(x)");
  JumpReport rep;
  SplittingCertificate generic = birkhoff_split(A);
  rep.generic_type = generic.type();
  for (int64_t x = 0; x < A.p; ++x) {
    bool pole = false;
    for (int i = 0; i < 2 && !pole; ++i)
      for (int j = 0; j < 2 && !pole; ++j)
        for (auto& [e, c] : A.entries(i, j).terms())
          if (c.has_pole_at(x)) {
            pole = true;
            break;
          }
    if (pole) continue;
    int t = fiber_type(A, x);
    if (t != rep.generic_type) {
      rep.fiber_types[x] = t;
      rep.epsilon[x] = (t - rep.generic_type) / 2;
    }
  }
  return rep;
}

LaurentMatrix remove_jump(const LaurentMatrix& A, int64_t x0) {
  if (!A.over_fpx) fail(Errc::BackendMismatch, "jump removal needs a matrix over F_p(x)");
  SplittingCertificate generic = birkhoff_split(A);
  int b = generic.type();
  int local = fiber_type(A, x0);
  if (local <= b) fail(Errc::NotAJump, "x=" + std::to_string(x0) + " is not a jumping fiber");

  // constant frame change making A(x0) the diagonal of its local splitting
  FpMat fiber = evaluate_at(A, x0);
  BirkhoffResult<Fp> local_split = birkhoff_split(fiber);
  XMat Mtilde_inv = lift_fp(A.p, local_split.m_side).inverse();
  XMat Ntilde = lift_fp(A.p, local_split.n_side);
  XMat framed = Mtilde_inv * A.entries * Ntilde;

  // conjugate by diag(f, 1) with f = x - x0
  RationalFunction f = RationalFunction::from_poly(Poly::linear_root(A.p, x0));
  LaurentMatrix out;
  out.p = A.p;
  out.over_fpx = true;
  out.allowed_poles = A.allowed_poles;
  out.entries(0, 0) = framed(0, 0);
  out.entries(0, 1) = framed(0, 1).scaled(f.inv());
  out.entries(1, 0) = framed(1, 0).scaled(f);
  out.entries(1, 1) = framed(1, 1);
  return out;
}

int det_m_multiplicity(const LaurentMatrix& A, int64_t x0) {
  SplittingCertificate cert = birkhoff_split(A);
  int min_val = 1 << 20;
  auto scan = [&](const XMat& m) {
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j)
        for (auto& [e, c] : m(i, j).terms()) min_val = std::min(min_val, c.valuation_at(x0));
  };
  scan(cert.m_side);
  scan(cert.n_side);
  RationalFunction det = cert.m_side.det().coeff(0);
  return det.valuation_at(x0) - 2 * min_val;
}

} // namespace atlas
