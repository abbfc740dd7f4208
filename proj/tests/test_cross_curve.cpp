#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "atlas/bundle.hpp"
#include "atlas/splitting.hpp"

using namespace atlas;

namespace {

uint64_t seed_state = 0xFEED;
int64_t rnd(int64_t mod) {
  seed_state = seed_state * 6364136223846793005ULL + 1442695040888963407ULL;
  return int64_t((seed_state >> 33) % uint64_t(mod));
}

// curves across residue classes and 2-torsion shapes
const std::vector<CurveSpec> kCurves = {
    {7, 2, 3},    // tiny
    {13, 1, 1},   // p = 1 mod 4 (general square-root path)
    {211, 3, 7},  // moderate
    {1009, 5, 11} // larger prime
};

} // namespace

TEST_CASE("field tower across curves") {
  for (const CurveSpec& spec : kCurves) {
    CAPTURE(spec.p);
    Curve E(spec);
    auto pts = E.points();
    REQUIRE(pts.size() >= 4);
    // group-law sanity and valuations at a few points
    for (int t = 0; t < 8; ++t) {
      const CurvePoint& P = pts[rnd(pts.size())];
      const CurvePoint& Q = pts[rnd(pts.size())];
      CurvePoint R = E.add(P, Q);
      CHECK(E.on_curve(R));
      CHECK(E.add(R, E.neg(Q)) == P);
    }
    CHECK(valuation(FunctionFieldElement::from_x(spec), CurvePoint::infinity()) == -2);
    CHECK(valuation(FunctionFieldElement::from_y(spec), CurvePoint::infinity()) == -3);
    for (auto& T : E.two_torsion_affine()) {
      CHECK(valuation(FunctionFieldElement::from_y(spec), T) == 1);
    }
    // product rule at an affine point
    CurvePoint P = pts[1];
    FunctionFieldElement f = FunctionFieldElement::from_x(spec) + FunctionFieldElement::from_y(spec);
    FunctionFieldElement g =
        FunctionFieldElement::from_x(spec) - FunctionFieldElement::constant(spec, Fp(P.x, spec.p));
    if (!f.is_zero()) CHECK(valuation(f * g, P) == valuation(f, P) + valuation(g, P));
  }
}

TEST_CASE("riemann-roch across curves") {
  for (const CurveSpec& spec : kCurves) {
    CAPTURE(spec.p);
    Curve E(spec);
    ClassGroupConfig cfg;
    cfg.backend = Backend::Concrete;
    cfg.curve = spec;
    ClassGroup cls(cfg);
    RiemannRoch rr(E, cls);
    auto pts = E.points();
    for (int t = 0; t < 6; ++t) {
      Divisor d;
      int deg = 1 + (int)rnd(4);
      for (int i = 0; i < deg; ++i) d.add(pts[rnd(pts.size())], 1);
      RRBasis b = rr.rr_basis(d);
      CHECK((int64_t)b.basis.size() == deg);
      for (auto& f : b.basis) CHECK(rr.verify_in_space(f, d, b));
    }
    // exact-pole functions on every curve
    CurvePoint P = pts[1 + rnd(pts.size() - 1)];
    FunctionFieldElement f = rr.function_with_poles(Divisor::point(P, 2));
    CHECK(valuation(f, P) == -2);
  }
}

TEST_CASE("bundle normalization across curves") {
  for (const CurveSpec& spec : kCurves) {
    if (spec.p > 300) continue; // keep the suite quick
    CAPTURE(spec.p);
    Curve E(spec);
    ClassGroupConfig cfg;
    cfg.backend = Backend::Concrete;
    cfg.curve = spec;
    ClassGroup cls(cfg);
    BundleOps ops(E, cls);
    std::vector<Fp> g = {Fp(1, spec.p), Fp(rnd(spec.p), spec.p), Fp(rnd(spec.p), spec.p)};
    TransitionData td = ops.build_indec_cp1(2, g);
    NormalForm nf = ops.normalize(td);
    REQUIRE(nf.kind == NormalFormKind::IndecCP1);
    TransitionData a0 = ops.build_indec_a0(1);
    CHECK(ops.normalize(a0).kind == NormalFormKind::IndecA0);
    // a nontrivial class when the curve has one
    auto pts = E.points();
    for (auto& P : pts) {
      if (P.is_infinity()) continue;
      ClassElement D = cls.sub(cls.of_point(P), cls.of_point(CurvePoint::infinity()));
      if (cls.is_trivial(D)) continue;
      TransitionData dec = ops.build_dec_trivial_base(1, D);
      CHECK(ops.normalize(dec).kind == NormalFormKind::Dec);
      break;
    }
  }
}

TEST_CASE("splitting across curves") {
  for (const CurveSpec& spec : kCurves) {
    CAPTURE(spec.p);
    int64_t p = spec.p;
    LaurentMatrix A;
    A.p = p;
    A.over_fpx = true;
    RationalFunction f = RationalFunction::from_poly(Poly::linear_root(p, 2 % p));
    A.entries(0, 0) = LaurentPoly<RationalFunction>::term(RationalFunction::one(p), 3);
    A.entries(0, 1) = LaurentPoly<RationalFunction>::term(f, 1);
    A.entries(1, 1) = LaurentPoly<RationalFunction>::term(RationalFunction::one(p), 0);
    JumpReport rep = scan_fibers(A);
    CHECK(rep.generic_type == 1);
    CHECK(rep.fiber_types.at(2 % p) == 3);
    LaurentMatrix cur = remove_jump(A, 2 % p);
    CHECK(fiber_type(cur, 2 % p) == 1);
  }
}
