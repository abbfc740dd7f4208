#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "atlas/classify.hpp"

using namespace atlas;

namespace {

const CurveSpec kCurve{101, 2, 3};

struct Fixture {
  Curve E;
  ClassGroup cls;
  BundleOps ops;
  Classifier clf;
  LinkEngine eng;
  Fixture()
      : E(kCurve),
        cls([] {
          ClassGroupConfig cfg;
          cfg.backend = Backend::Concrete;
          cfg.curve = kCurve;
          return cfg;
        }()),
        ops(E, cls),
        clf(cls),
        eng(cls) {}
};

} // namespace

TEST_CASE("transition data to verdict: decomposable over A0") {
  Fixture fx;
  ClassElement D = fx.cls.sub(fx.cls.of_point(fx.E.points()[6]), fx.cls.of_point(CurvePoint::infinity()));
  TransitionData td = fx.ops.build_dec_a0(2, D);
  auto [tag, b, dclass] = fx.ops.extract_invariants(td);
  REQUIRE(fx.ops.normalize(td).kind == NormalFormKind::Dec);

  Descriptor desc = Descriptor::dec(tag, b, dclass);
  Verdict v = fx.clf.classify(desc);
  CHECK(v.relatively_maximal);
  CHECK(v.rule == "a0-nontrivial-invariant");
  StiffnessReport st = fx.clf.stiffness(desc);
  CHECK(st.status == Stiffness::NotStiff);

  // the data-level family members match the descriptor-level orbit: each
  // orbit node with base A0 rebuilds to data with the same invariants
  OrbitGraph g = fx.eng.enumerate_orbit(desc, 1);
  CHECK(g.nodes.size() >= 2);
  for (auto& node : g.nodes) {
    if (node.family != Family::Dec || node.b == 0) continue;
    NormalForm nf;
    nf.kind = NormalFormKind::Dec;
    nf.base = node.base;
    nf.b = node.b;
    nf.d_class = node.d;
    TransitionData rebuilt = fx.ops.build_from_normal_form(nf);
    auto [tag2, b2, d2] = fx.ops.extract_invariants(rebuilt);
    CHECK(b2 == node.b);
    CHECK(fx.cls.is_trivial(fx.cls.sub(d2, node.d)));
  }
}

TEST_CASE("transition data to verdict: indecomposable over CxP1") {
  Fixture fx;
  std::vector<Fp> g = {Fp(3, kCurve.p), Fp(1, kCurve.p), Fp(0, kCurve.p)};
  TransitionData td = fx.ops.build_indec_cp1(2, g);
  NormalForm nf = fx.ops.normalize(td);
  REQUIRE(nf.kind == NormalFormKind::IndecCP1);
  Descriptor desc = Descriptor::indec_cp1(nf.b, nf.g);
  Verdict v = fx.clf.classify(desc);
  CHECK(!v.relatively_maximal);
  CHECK(v.rule == "cp1-indecomposable");
  CHECK(!v.witness.empty()); // carries the section-raising move
}

TEST_CASE("transition data to verdict: fiber products at b = 0") {
  Fixture fx;
  ClassElement D = fx.cls.sub(fx.cls.of_point(fx.E.points()[4]), fx.cls.of_point(CurvePoint::infinity()));
  // SL factor from a nontrivial lambda class
  TransitionData sl = fx.ops.build_dec_trivial_base(0, D);
  auto [s1, s2] = fx.ops.fiber_product_decompose(sl);
  REQUIRE(s2.kind == SurfaceKind::SL);
  // the recognized product with a trivial factor is maximal onto either side
  Descriptor desc = Descriptor::fiber_product(s1, s2, 2);
  Verdict v = fx.clf.classify(desc);
  CHECK(v.relatively_maximal);
  CHECK(v.rule == "product-with-p1");
  // paired with A0 instead: every concrete class is torsion, so the AS side
  // condition fails onto the SL factor
  Descriptor onto_sl = Descriptor::fiber_product(SurfaceTag::a0(), s2, 2);
  Verdict v2 = fx.clf.classify(onto_sl);
  CHECK(!v2.relatively_maximal);
  CHECK(v2.rule == "as-torsion");

  // A0 factor from the nonsplit extension
  TransitionData a0 = fx.ops.build_indec_a0(1);
  TransitionData fp0 = a0;
  fp0.b = 0;
  fp0.base = SurfaceTag::trivial();
  fp0.form = HomogeneousForm::zero(kCurve, 0);
  fp0.form.c[0] = a0.xi;
  fp0.xi = FunctionFieldElement();
  auto [t1, t2] = fx.ops.fiber_product_decompose(fp0);
  CHECK(t2.kind == SurfaceKind::A0);
}

TEST_CASE("AS story over the concrete backend") {
  Fixture fx;
  ClassElement L = fx.cls.sub(fx.cls.of_point(fx.E.points()[4]), fx.cls.of_point(CurvePoint::infinity()));
  TransitionData td = fx.ops.build_as(L, 2, 1);
  NormalForm nf = fx.ops.normalize(td);
  REQUIRE(nf.kind == NormalFormKind::ASbnD);
  Descriptor desc = Descriptor::asbnd(nf.d_class, nf.b, nf.n);
  // torsion class over a finite field: honest negative with the chain witness
  Verdict v = fx.clf.classify(desc);
  CHECK(!v.relatively_maximal);
  CHECK(v.rule == "as-torsion");
  // the same descriptor in the abstract backend with a free generator is positive
  ClassGroupConfig acfg;
  acfg.backend = Backend::Abstract;
  acfg.rank = 1;
  ClassGroup ab(acfg);
  Classifier aclf(ab);
  CHECK(aclf.classify(Descriptor::asbnd(ab.abstract_free_generator(0), nf.b, nf.n)).relatively_maximal);
}
