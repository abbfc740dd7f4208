#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include "atlas/io.hpp"

using namespace atlas;

namespace {

const CurveSpec kCurve{101, 2, 3};

ClassGroup concrete_group() {
  ClassGroupConfig cfg;
  cfg.backend = Backend::Concrete;
  cfg.curve = kCurve;
  return ClassGroup(cfg);
}

ClassGroup abstract_group() {
  ClassGroupConfig cfg;
  cfg.backend = Backend::Abstract;
  cfg.rank = 2;
  cfg.torsion = {2, 6};
  return ClassGroup(cfg);
}

} // namespace

TEST_CASE("config parsing with defaults and overrides") {
  Json j = Json::parse(R"({
    "curve": {"p": 101, "a": 2, "b": 3},
    "class_group": {"backend": "abstract", "rank": 2, "torsion": [2, 6],
                    "Dsigma_class": {"degree": 2, "free": [0, 0], "torsion": [1, 0]}},
    "seed": 42,
    "format": "text"
  })");
  RunConfig cfg = parse_config(j);
  CHECK(cfg.curve.p == 101);
  CHECK(cfg.class_group.backend == Backend::Abstract);
  CHECK(cfg.seed == 42);
  CHECK(cfg.format == "text");
  REQUIRE(cfg.class_group.dsigma_class.has_value());
  // Dsigma with a 2-torsion part: passes the 2*Dsigma = 4*D0 constraint
  ClassGroup cls(cfg.class_group);
  CHECK(cls.dsigma().torsion[0] == 1);
  // round trip
  RunConfig cfg2 = parse_config(config_json(cfg));
  CHECK(cfg2.curve.p == cfg.curve.p);
  CHECK(cfg2.seed == cfg.seed);

  // invalid distinguished classes are rejected
  Json bad = j;
  bad["class_group"]["Dsigma_class"] = {{"degree", 2}, {"free", {1, 0}}, {"torsion", {0, 0}}};
  CHECK_THROWS_AS((void)ClassGroup(parse_config(bad).class_group), Error);
}

TEST_CASE("divisor and class element round trips") {
  ClassGroup cls = concrete_group();
  Divisor d = parse_divisor_expr("(1,39)+2*(1,62)-3*O");
  CHECK(d.degree() == 0);
  Json j = divisor_json(d);
  Divisor d2 = parse_divisor(j);
  CHECK(d == d2);

  ClassElement c = cls.class_of(d);
  ClassElement c2 = parse_class_element(cls, class_element_json(c));
  CHECK(c == c2);

  ClassGroup ab = abstract_group();
  ClassElement a = ab.add(ab.abstract_free_generator(0, 3), ab.abstract_torsion_generator(1));
  CHECK(parse_class_element(ab, class_element_json(a)) == a);
}

TEST_CASE("matrix and bundle round trips") {
  Json j = Json::parse(R"({
    "field": "fpx",
    "entries": [[{"2": 1}, {"1": "1+100*x"}], [{}, {"0": 1}]],
    "allowed_poles": []
  })");
  LaurentMatrix m = parse_matrix(101, j);
  CHECK(m.entries(0, 0).lo() == 2);
  LaurentMatrix m2 = parse_matrix(101, matrix_json(m));
  CHECK(m.entries == m2.entries);

  Curve E(kCurve);
  ClassGroup cls = concrete_group();
  BundleOps ops(E, cls);
  TransitionData td = ops.build_indec_cp1(2, {Fp(1, 101), Fp(5, 101), Fp(0, 101)});
  Json bj = bundle_json(td);
  TransitionData td2 = parse_bundle(ops, bj);
  CHECK(ops.s_isomorphic(td, td2));
  NormalForm nf = ops.normalize(td2);
  CHECK(nf.kind == NormalFormKind::IndecCP1);
}

TEST_CASE("descriptor round trips") {
  ClassGroup cls = abstract_group();
  ClassElement D = cls.abstract_free_generator(0);
  LinkEngine eng(cls);
  std::vector<Descriptor> ds = {
      Descriptor::fiber_product(SurfaceTag::sl(D), SurfaceTag::a1(), 2),
      Descriptor::dec(SurfaceTag::a1(), 2, cls.abstract_free_generator(0, -1)),
      Descriptor::indec_cp1(2, {Fp(1, 101), Fp(2, 101), Fp(0, 101)}),
      Descriptor::xa0b0(3),
      Descriptor::asbnd(D, 3, 1),
  };
  for (auto& d : ds) {
    Descriptor d2 = parse_descriptor(cls, descriptor_json(d));
    CHECK(eng.canonical_key(d) == eng.canonical_key(d2));
  }
}

TEST_CASE("deterministic serialization") {
  ClassGroup cls = abstract_group();
  Descriptor d = Descriptor::asbnd(cls.abstract_free_generator(0), 2, 1);
  CHECK(descriptor_json(d).dump() == descriptor_json(d).dump());
  LinkEngine eng(cls);
  auto rows1 = eng.available_links(d);
  auto rows2 = eng.available_links(d);
  REQUIRE(rows1.size() == rows2.size());
  for (size_t i = 0; i < rows1.size(); ++i) CHECK(rows1[i].first.name == rows2[i].first.name);
}

TEST_CASE("AS and A0 bundles round-trip through the schema") {
  Curve E(kCurve);
  ClassGroup cls = concrete_group();
  BundleOps ops(E, cls);

  TransitionData a0 = ops.build_indec_a0(2);
  TransitionData a0b = parse_bundle(ops, bundle_json(a0));
  CHECK(ops.normalize(a0b).kind == NormalFormKind::IndecA0);

  ClassElement L = cls.sub(cls.of_point(E.points()[4]), cls.of_point(CurvePoint::infinity()));
  TransitionData as = ops.build_as(L, 2, 1);
  TransitionData asb = parse_bundle(ops, bundle_json(as));
  NormalForm nf = ops.normalize(asb);
  REQUIRE(nf.kind == NormalFormKind::ASbnD);
  CHECK(nf.n == 1);
  CHECK(cls.is_trivial(cls.sub(nf.d_class, L)));

  // a mismatching declared divisor is rejected
  Json j = bundle_json(as);
  j["a_div"][0]["mult"] = 7;
  CHECK_THROWS_AS((void)parse_bundle(ops, j), Error);
}
