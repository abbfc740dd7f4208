#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "atlas/splitting.hpp"

using namespace atlas;

namespace {

constexpr int64_t kP = 101;

uint64_t seed_state = 0x5EED;
int64_t rnd(int64_t mod) {
  seed_state = seed_state * 6364136223846793005ULL + 1442695040888963407ULL;
  return int64_t((seed_state >> 33) % uint64_t(mod));
}

LaurentPoly<Fp> fp_term(int64_t c, int e, int64_t p = kP) { return LaurentPoly<Fp>::term(Fp(c, p), e); }

FpMat fp_diag(int m, int n, int64_t p = kP) {
  FpMat d;
  d(0, 0) = fp_term(1, m, p);
  d(1, 1) = fp_term(1, n, p);
  return d;
}

// random unimodular matrix over F_p[y] (or F_p[1/y] when inv): a product of
// elementary shears and unit scalings
FpMat random_unimodular(bool inv, int steps, int maxdeg, int64_t p = kP) {
  FpMat m = FpMat::identity(Fp(1, p));
  for (int s = 0; s < steps; ++s) {
    FpMat e = FpMat::identity(Fp(1, p));
    int i = (int)rnd(2);
    int deg = (int)rnd(maxdeg + 1);
    e(i, 1 - i) = fp_term(1 + rnd(p - 1), inv ? -deg : deg, p);
    m = m * e;
    if (rnd(3) == 0) {
      FpMat d;
      d(0, 0) = fp_term(1 + rnd(p - 1), 0, p);
      d(1, 1) = fp_term(1 + rnd(p - 1), 0, p);
      m = m * d;
    }
  }
  return m;
}

} // namespace

TEST_CASE("identity and diagonal matrices") {
  FpMat id = FpMat::identity(Fp(1, kP));
  BirkhoffResult<Fp> r = birkhoff_split(id);
  CHECK(r.m == 0);
  CHECK(r.n == 0);
  CHECK(verify_birkhoff(id, r, Fp(1, kP)));

  FpMat d = fp_diag(3, 1);
  r = birkhoff_split(d);
  CHECK(r.m == 3);
  CHECK(r.n == 1);
  CHECK(verify_birkhoff(d, r, Fp(1, kP)));

  // already diagonal but unordered
  FpMat d2 = fp_diag(-2, 5);
  r = birkhoff_split(d2);
  CHECK(r.m == 5);
  CHECK(r.n == -2);
  CHECK(verify_birkhoff(d2, r, Fp(1, kP)));
}

TEST_CASE("triangular example against the brute-force oracle") {
  // A = [[y, 1], [0, 1]] over a tiny field so the oracle can enumerate
  const int64_t p = 3;
  FpMat A;
  A(0, 0) = fp_term(1, 1, p);
  A(0, 1) = fp_term(1, 0, p);
  A(1, 1) = fp_term(1, 0, p);

  // oracle: search N over F_3[y] with entries c0 + c1 y, solve M = A N D^{-1},
  // check M lives in F_3[1/y] with unit determinant
  auto enumerate = [&](int m, int n) {
    std::vector<int64_t> c(8, 0);
    for (int64_t mask = 0; mask < 6561 * 81; ++mask) {
      int64_t v = mask;
      for (int i = 0; i < 8; ++i) {
        c[i] = v % 3;
        v /= 3;
      }
      FpMat N;
      N(0, 0) = fp_term(c[0], 0, p) + fp_term(c[1], 1, p);
      N(0, 1) = fp_term(c[2], 0, p) + fp_term(c[3], 1, p);
      N(1, 0) = fp_term(c[4], 0, p) + fp_term(c[5], 1, p);
      N(1, 1) = fp_term(c[6], 0, p) + fp_term(c[7], 1, p);
      LaurentPoly<Fp> det = N.det();
      if (det.is_zero() || !det.is_monomial() || det.lo() != 0) continue;
      // M = A N D^{-1}
      FpMat D_inv;
      D_inv(0, 0) = fp_term(1, -m, p);
      D_inv(1, 1) = fp_term(1, -n, p);
      FpMat M = A * N * D_inv;
      if (!M.all_poly_in_yinv()) continue;
      LaurentPoly<Fp> dm = M.det();
      if (dm.is_zero() || !dm.is_monomial() || dm.lo() != 0) continue;
      return true;
    }
    return false;
  };
  CHECK(enumerate(1, 0));   // the expected type
  CHECK(!enumerate(2, -1)); // no certificate for the wrong exponents

  BirkhoffResult<Fp> r = birkhoff_split(A);
  CHECK(r.m == 1);
  CHECK(r.n == 0);
  CHECK(verify_birkhoff(A, r, Fp(1, p)));
}

TEST_CASE("planted factorizations are recovered") {
  for (int t = 0; t < 60; ++t) {
    int m = (int)rnd(9) - 4;
    int n = (int)rnd(9) - 4;
    if (m < n) std::swap(m, n);
    FpMat M = random_unimodular(true, 3, 3);
    FpMat N = random_unimodular(false, 3, 3);
    FpMat A = M * fp_diag(m, n) * N.inverse();
    BirkhoffResult<Fp> r = birkhoff_split(A);
    CHECK(r.m == m);
    CHECK(r.n == n);
    CHECK(verify_birkhoff(A, r, Fp(1, kP)));
  }
}

TEST_CASE("splitting type is an invariant of the equivalence class") {
  for (int t = 0; t < 20; ++t) {
    int m = (int)rnd(5);
    int n = (int)rnd(5) - 4;
    if (m < n) std::swap(m, n);
    FpMat A = random_unimodular(true, 2, 2) * fp_diag(m, n) * random_unimodular(false, 2, 2);
    // multiply by lambda = unit * y^k and fresh unimodular factors
    FpMat B = random_unimodular(true, 2, 2) * A * random_unimodular(false, 2, 2);
    int shift = (int)rnd(3) - 1;
    Fp unit(1 + rnd(kP - 1), kP);
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) B(i, j) = B(i, j).shifted(shift).scaled(unit);
    BirkhoffResult<Fp> ra = birkhoff_split(A);
    BirkhoffResult<Fp> rb = birkhoff_split(B);
    CHECK(ra.m - ra.n == rb.m - rb.n);
    CHECK(rb.m + rb.n == ra.m + ra.n + 2 * shift);
  }
}

TEST_CASE("row and column swaps preserve the splitting pair") {
  for (int t = 0; t < 10; ++t) {
    int m = (int)rnd(4);
    int n = -(int)rnd(4);
    FpMat A = random_unimodular(true, 3, 2) * fp_diag(m, n) * random_unimodular(false, 3, 2);
    FpMat B;
    for (int i = 0; i < 2; ++i)
      for (int j = 0; j < 2; ++j) B(i, j) = A(1 - i, 1 - j);
    BirkhoffResult<Fp> ra = birkhoff_split(A);
    BirkhoffResult<Fp> rb = birkhoff_split(B);
    CHECK(ra.m == rb.m);
    CHECK(ra.n == rb.n);
  }
}

TEST_CASE("not-splittable determinants are rejected") {
  FpMat A;
  A(0, 0) = fp_term(1, 0) + fp_term(1, 1); // det = 1 + y: not a monomial
  A(1, 1) = fp_term(1, 0);
  CHECK_THROWS_AS((void)birkhoff_split(A), Error);
}

// ---------------------------------------------------------------------------
// matrices over F_p(x): fibers and jumps

namespace {

// planted one-jump instance: [[y^(b+2e), (x-x0) y^s], [0, 1]] obfuscated by
// x-dependent elementary factors with constant determinant
LaurentMatrix plant_jump(int b, int eps, int64_t x0, int obfuscate) {
  LaurentMatrix A;
  A.p = kP;
  A.over_fpx = true;
  int top = b + 2 * eps;
  int s = (top - b) / 2; // |2s - top| = b and 0 < s < top
  RationalFunction f = RationalFunction::from_poly(Poly::linear_root(kP, x0));
  A.entries(0, 0) = LaurentPoly<RationalFunction>::term(RationalFunction::one(kP), top);
  A.entries(0, 1) = LaurentPoly<RationalFunction>::term(f, s);
  A.entries(1, 1) = LaurentPoly<RationalFunction>::term(RationalFunction::one(kP), 0);
  // obfuscate with elementary row ops over F_p[x][1/y] and column ops over F_p[x][y]
  for (int t = 0; t < obfuscate; ++t) {
    RationalFunction c = RationalFunction::from_poly(Poly(kP, {1 + rnd(kP - 1), rnd(kP)}));
    int row = (int)rnd(2);
    int e = (int)rnd(3);
    LaurentPoly<RationalFunction> q = LaurentPoly<RationalFunction>::term(c, -e);
    for (int j = 0; j < 2; ++j)
      A.entries(row, j) = A.entries(row, j) + q * A.entries(1 - row, j);
    int col = (int)rnd(2);
    q = LaurentPoly<RationalFunction>::term(c, e);
    for (int i = 0; i < 2; ++i)
      A.entries(i, col) = A.entries(i, col) + q * A.entries(i, 1 - col);
  }
  return A;
}

} // namespace

TEST_CASE("fiber types and jump scan") {
  // x-independent matrix: same type everywhere
  LaurentMatrix C = LaurentMatrix::from_fp(kP, fp_diag(2, 0));
  C.over_fpx = true;
  for (int64_t x = 0; x < 5; ++x) CHECK(fiber_type(C, x) == 2);

  LaurentMatrix A = plant_jump(1, 1, 7, 4);
  SplittingCertificate cert = birkhoff_split(A);
  CHECK(cert.type() == 1);
  CHECK(verify_certificate(A, cert));
  JumpReport rep = scan_fibers(A);
  CHECK(rep.generic_type == 1);
  REQUIRE(rep.fiber_types.size() == 1);
  CHECK(rep.fiber_types.count(7) == 1);
  CHECK(rep.fiber_types.at(7) == 3);
  CHECK(rep.epsilon.at(7) == 1);
  // parity: the deviation is always even
  for (auto& [x, t] : rep.fiber_types) CHECK((t - rep.generic_type) % 2 == 0);
}

TEST_CASE("jump removal restores the uniform type") {
  for (auto [b, eps] : std::vector<std::pair<int, int>>{{1, 1}, {2, 1}, {0, 2}, {1, 2}}) {
    LaurentMatrix A = plant_jump(b, eps, 11, 3);
    JumpReport rep = scan_fibers(A);
    REQUIRE(rep.fiber_types.count(11) == 1);
    CHECK(rep.epsilon.at(11) == eps);

    int passes = 0;
    int mult_prev = det_m_multiplicity(A, 11);
    LaurentMatrix cur = A;
    while (passes < eps + 2) {
      int t = fiber_type(cur, 11);
      if (t == rep.generic_type) break;
      cur = remove_jump(cur, 11);
      ++passes;
      int mult = det_m_multiplicity(cur, 11);
      CHECK(mult < mult_prev); // strict decrease of the det(M) multiplicity
      mult_prev = mult;
    }
    CHECK(fiber_type(cur, 11) == rep.generic_type);
    CHECK(passes <= eps + 2);
    // the other fibers keep the generic type
    JumpReport after = scan_fibers(cur);
    CHECK(after.generic_type == rep.generic_type);
    CHECK(after.fiber_types.empty());
  }
  // removing from a uniform matrix is refused
  LaurentMatrix U = LaurentMatrix::from_fp(kP, fp_diag(1, 0));
  U.over_fpx = true;
  CHECK_THROWS_AS((void)remove_jump(U, 3), Error);
}

TEST_CASE("a plain eps=1 jump clears in one pass") {
  LaurentMatrix A = plant_jump(1, 1, 23, 0); // no obfuscation
  CHECK(fiber_type(A, 23) == 3);
  LaurentMatrix once = remove_jump(A, 23);
  CHECK(fiber_type(once, 23) == 1);
  JumpReport rep = scan_fibers(once);
  CHECK(rep.fiber_types.empty());
}
