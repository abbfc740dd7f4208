#include "atlas/io.hpp"

#include <cctype>

namespace atlas {

namespace {

[[noreturn]] void bad(const std::string& what) { fail(Errc::MalformedInput, what); }

int64_t get_int(const Json& j, const char* key) {
  if (!j.contains(key) || !j[key].is_number_integer()) bad(std::string("missing integer field '") + key + "'");
  return j[key].get<int64_t>();
}

} // namespace

RunConfig parse_config(const Json& j) {
  RunConfig cfg;
  if (j.contains("curve")) {
    const Json& c = j["curve"];
    cfg.curve = CurveSpec(get_int(c, "p"), get_int(c, "a"), get_int(c, "b"));
  }
  cfg.class_group.curve = cfg.curve;
  if (j.contains("class_group")) {
    const Json& g = j["class_group"];
    std::string backend = g.value("backend", "concrete");
    if (backend == "concrete") {
      cfg.class_group.backend = Backend::Concrete;
    } else if (backend == "abstract") {
      cfg.class_group.backend = Backend::Abstract;
    } else {
      bad("backend must be 'concrete' or 'abstract'");
    }
    if (g.contains("rank")) cfg.class_group.rank = (int)get_int(g, "rank");
    if (g.contains("torsion")) {
      cfg.class_group.torsion.clear();
      for (auto& t : g["torsion"]) cfg.class_group.torsion.push_back(t.get<int64_t>());
    }
    ClassGroup probe(cfg.class_group); // validates shape before distinguished classes
    if (g.contains("D0_class")) cfg.class_group.d0_class = parse_class_element(probe, g["D0_class"]);
    if (g.contains("Dsigma_class")) cfg.class_group.dsigma_class = parse_class_element(probe, g["Dsigma_class"]);
  }
  if (j.contains("seed")) cfg.seed = j["seed"].get<uint64_t>();
  if (j.contains("format")) cfg.format = j["format"].get<std::string>();
  if (cfg.format != "json" && cfg.format != "text" && cfg.format != "dot") bad("format must be json, text or dot");
  return cfg;
}

Json config_json(const RunConfig& cfg) {
  Json j;
  j["curve"] = {{"p", cfg.curve.p}, {"a", cfg.curve.a}, {"b", cfg.curve.b}};
  Json g;
  g["backend"] = cfg.class_group.backend == Backend::Concrete ? "concrete" : "abstract";
  g["rank"] = cfg.class_group.rank;
  g["torsion"] = cfg.class_group.torsion;
  if (cfg.class_group.d0_class) g["D0_class"] = class_element_json(*cfg.class_group.d0_class);
  if (cfg.class_group.dsigma_class) g["Dsigma_class"] = class_element_json(*cfg.class_group.dsigma_class);
  j["class_group"] = g;
  j["seed"] = cfg.seed;
  j["format"] = cfg.format;
  return j;
}

ClassElement parse_class_element(const ClassGroup& cls, const Json& j) {
  if (!j.is_object()) bad("class element must be an object");
  int64_t degree = j.contains("degree") ? get_int(j, "degree") : 0;
  if (cls.backend() == Backend::Concrete) {
    ClassElement c = cls.zero(degree);
    if (j.contains("cl0")) {
      c.cl0 = CurvePoint::parse(j["cl0"].get<std::string>());
      cls.curve().require_on_curve(c.cl0);
    }
    return c;
  }
  ClassElement c = cls.zero(degree);
  if (j.contains("free")) {
    size_t i = 0;
    for (auto& x : j["free"]) {
      if (i >= c.free.size()) bad("free part longer than the configured rank");
      c.free[i++] = x.get<int64_t>();
    }
  }
  if (j.contains("torsion")) {
    size_t i = 0;
    for (auto& x : j["torsion"]) {
      if (i >= c.torsion.size()) bad("torsion part longer than the configured orders");
      c.torsion[i++] = x.get<int64_t>();
    }
  }
  return cls.add(c, cls.zero()); // normalize
}

Json class_element_json(const ClassElement& c) {
  Json j;
  j["degree"] = c.degree;
  if (c.backend == Backend::Concrete) {
    j["cl0"] = c.cl0.str();
  } else {
    j["free"] = c.free;
    j["torsion"] = c.torsion;
  }
  return j;
}

Divisor parse_divisor(const Json& j) {
  if (!j.is_array()) bad("divisor must be a list of {point, mult}");
  Divisor d;
  for (auto& t : j) {
    int64_t m = get_int(t, "mult");
    std::string pt = t["point"].get<std::string>();
    if (!pt.empty() && pt[0] == 'g') d.add_abstract(pt, m);
    else d.add(CurvePoint::parse(pt), m);
  }
  return d;
}

Json divisor_json(const Divisor& d) {
  Json j = Json::array();
  for (auto& [pt, m] : d.points()) j.push_back({{"point", pt.str()}, {"mult", m}});
  for (auto& [s, m] : d.symbols()) j.push_back({{"point", s}, {"mult", m}});
  return j;
}

Divisor parse_divisor_expr(const std::string& text) {
  Divisor d;
  size_t i = 0;
  auto skip = [&] {
    while (i < text.size() && std::isspace((unsigned char)text[i])) ++i;
  };
  skip();
  if (i >= text.size()) bad("empty divisor expression");
  while (i < text.size()) {
    skip();
    int64_t sign = 1;
    while (i < text.size() && (text[i] == '+' || text[i] == '-')) {
      if (text[i] == '-') sign = -sign;
      ++i;
      skip();
    }
    int64_t mult = 1;
    if (i < text.size() && std::isdigit((unsigned char)text[i])) {
      mult = 0;
      while (i < text.size() && std::isdigit((unsigned char)text[i])) mult = mult * 10 + (text[i++] - '0');
      skip();
      if (i < text.size() && text[i] == '*') {
        ++i;
        skip();
      }
    }
    if (i >= text.size()) bad("dangling term in divisor expression");
    if (text[i] == 'O' || text[i] == 'o') {
      d.add(CurvePoint::infinity(), sign * mult);
      ++i;
    } else if (text[i] == '(') {
      size_t close = text.find(')', i);
      if (close == std::string::npos) bad("unbalanced parenthesis in divisor expression");
      d.add(CurvePoint::parse(text.substr(i, close - i + 1)), sign * mult);
      i = close + 1;
    } else {
      bad("unexpected character in divisor expression: " + text.substr(i, 1));
    }
    skip();
  }
  return d;
}

FunctionFieldElement parse_ffe(const CurveSpec& curve, const Json& j) {
  if (j.is_string())
    return FunctionFieldElement::from_rational(curve, RationalFunction::parse(curve.p, j.get<std::string>()));
  if (!j.is_object()) bad("function-field element must be {u, v} or a rational string");
  RationalFunction u = RationalFunction::zero(curve.p);
  RationalFunction v = RationalFunction::zero(curve.p);
  if (j.contains("u")) u = RationalFunction::parse(curve.p, j["u"].get<std::string>());
  if (j.contains("v")) v = RationalFunction::parse(curve.p, j["v"].get<std::string>());
  return FunctionFieldElement(curve, u, v);
}

Json ffe_json(const FunctionFieldElement& f) {
  Json j;
  j["u"] = f.u().str();
  j["v"] = f.v().str();
  return j;
}

LaurentMatrix parse_matrix(int64_t p, const Json& j) {
  LaurentMatrix m;
  m.p = p;
  std::string field = j.value("field", "fp");
  if (field == "fp") m.over_fpx = false;
  else if (field == "fpx") m.over_fpx = true;
  else bad("matrix field must be 'fp' or 'fpx'");
  if (!j.contains("entries") || !j["entries"].is_array() || j["entries"].size() != 2)
    bad("matrix entries must be a 2x2 array");
  for (int i = 0; i < 2; ++i) {
    const Json& row = j["entries"][i];
    if (!row.is_array() || row.size() != 2) bad("matrix entries must be a 2x2 array");
    for (int k = 0; k < 2; ++k) {
      for (auto& [exp_str, coeff] : row[k].items()) {
        int exp = 0;
        try {
          exp = std::stoi(exp_str);
        } catch (const std::exception&) {
          bad("entry exponent must be an integer string: " + exp_str);
        }
        RationalFunction c = coeff.is_number_integer()
                                 ? RationalFunction::constant(Fp(coeff.get<int64_t>(), p))
                                 : RationalFunction::parse(p, coeff.get<std::string>());
        if (!m.over_fpx && !c.is_constant()) bad("fp matrix with a non-constant entry");
        m.entries(i, k) = m.entries(i, k) + LaurentPoly<RationalFunction>::term(c, exp);
      }
    }
  }
  if (j.contains("allowed_poles"))
    for (auto& x : j["allowed_poles"]) m.allowed_poles.push_back(x.get<int64_t>());
  return m;
}

Json matrix_json(const LaurentMatrix& m) {
  Json j;
  j["field"] = m.over_fpx ? "fpx" : "fp";
  Json entries = Json::array();
  for (int i = 0; i < 2; ++i) {
    Json row = Json::array();
    for (int k = 0; k < 2; ++k) {
      Json cell = Json::object();
      for (auto& [e, c] : m.entries(i, k).terms()) cell[std::to_string(e)] = c.str();
      row.push_back(cell);
    }
    entries.push_back(row);
  }
  j["entries"] = entries;
  j["allowed_poles"] = m.allowed_poles;
  return j;
}

Json certificate_json(const SplittingCertificate& cert) {
  Json j;
  j["m"] = cert.m;
  j["n"] = cert.n;
  j["type"] = cert.type();
  auto mat = [](const XMat& m) {
    Json entries = Json::array();
    for (int i = 0; i < 2; ++i) {
      Json row = Json::array();
      for (int k = 0; k < 2; ++k) {
        Json cell = Json::object();
        for (auto& [e, c] : m(i, k).terms()) cell[std::to_string(e)] = c.str();
        row.push_back(cell);
      }
      entries.push_back(row);
    }
    return entries;
  };
  j["M"] = mat(cert.m_side);
  j["N"] = mat(cert.n_side);
  return j;
}

SurfaceTag parse_surface_tag(const ClassGroup& cls, const Json& j) {
  if (j.is_string()) {
    std::string s = j.get<std::string>();
    if (s == "cp1" || s == "CxP1" || s == "trivial") return SurfaceTag::trivial();
    if (s == "a0" || s == "A0") return SurfaceTag::a0();
    if (s == "a1" || s == "A1") return SurfaceTag::a1();
    bad("unknown surface tag: " + s);
  }
  std::string kind = j.value("kind", "");
  if (kind == "sl" || kind == "SL") {
    if (!j.contains("class")) bad("SL tag requires a class");
    return SurfaceTag::sl(parse_class_element(cls, j["class"]));
  }
  return parse_surface_tag(cls, Json(kind));
}

Json surface_tag_json(const SurfaceTag& t) {
  switch (t.kind) {
    case SurfaceKind::TrivialCP1: return Json("cp1");
    case SurfaceKind::A0: return Json("a0");
    case SurfaceKind::A1: return Json("a1");
    case SurfaceKind::SL: {
      Json j;
      j["kind"] = "sl";
      j["class"] = class_element_json(*t.sl_class);
      return j;
    }
  }
  return Json();
}

TransitionData parse_bundle(const BundleOps& ops, const Json& j) {
  TransitionData td;
  td.curve = ops.curve().spec();
  td.base = parse_surface_tag(ops.classes(), j.at("base"));
  td.b = (int)get_int(j, "b");
  if (!j.contains("cover")) bad("bundle requires a cover block");
  for (auto& pt : j["cover"].value("U_removed", Json::array()))
    td.cover.u_removed.push_back(CurvePoint::parse(pt.get<std::string>()));
  for (auto& pt : j["cover"].value("V_removed", Json::array()))
    td.cover.v_removed.push_back(CurvePoint::parse(pt.get<std::string>()));
  td.lambda = j.contains("lambda") ? parse_ffe(td.curve, j["lambda"])
                                   : FunctionFieldElement::one(td.curve);
  td.form = HomogeneousForm::zero(td.curve, td.b);
  if (j.contains("form")) {
    if (!j["form"].is_array() || (int)j["form"].size() != td.b + 1)
      bad("form must list b+1 coefficients");
    for (int k = 0; k <= td.b; ++k) td.form.c[k] = parse_ffe(td.curve, j["form"][k]);
  }
  if (j.contains("xi")) td.xi = parse_ffe(td.curve, j["xi"]);
  if (j.contains("a")) td.a_cocycle = parse_ffe(td.curve, j["a"]);
  // divisors of the cocycles: taken from the file when present, else tracked
  // for cocycles that are rational in x
  auto try_track = [&](const FunctionFieldElement& f) -> std::optional<Divisor> {
    if (f.is_zero() || !f.is_rational()) return std::nullopt;
    try {
      return divisor_of(ops.curve(), f);
    } catch (const Error&) {
      return std::nullopt;
    }
  };
  auto load_divisor = [&](const char* key, const FunctionFieldElement& value) -> std::optional<Divisor> {
    if (!j.contains(key)) return try_track(value);
    Divisor d = parse_divisor(j[key]);
    // the declared divisor must match the cocycle pointwise
    for (auto& [pt, m] : d.points())
      if (valuation(value, pt) != m) bad(std::string(key) + " does not match the cocycle");
    return d;
  };
  td.lambda_divisor = load_divisor("lambda_div", td.lambda);
  if (!td.a_cocycle.is_zero()) td.a_divisor = load_divisor("a_div", td.a_cocycle);
  return td;
}

Json bundle_json(const TransitionData& td) {
  Json j;
  j["base"] = surface_tag_json(td.base);
  j["b"] = td.b;
  Json cover;
  Json u = Json::array(), v = Json::array();
  for (auto& pt : td.cover.u_removed) u.push_back(pt.str());
  for (auto& pt : td.cover.v_removed) v.push_back(pt.str());
  cover["U_removed"] = u;
  cover["V_removed"] = v;
  j["cover"] = cover;
  j["lambda"] = ffe_json(td.lambda);
  Json form = Json::array();
  for (auto& c : td.form.c) form.push_back(ffe_json(c));
  j["form"] = form;
  if (!td.xi.is_zero()) j["xi"] = ffe_json(td.xi);
  if (!td.a_cocycle.is_zero()) j["a"] = ffe_json(td.a_cocycle);
  if (td.lambda_divisor) j["lambda_div"] = divisor_json(*td.lambda_divisor);
  if (td.a_divisor) j["a_div"] = divisor_json(*td.a_divisor);
  return j;
}

Json normal_form_json(const NormalForm& nf) {
  Json j;
  switch (nf.kind) {
    case NormalFormKind::Dec:
      j["kind"] = "Dec";
      j["base"] = surface_tag_json(nf.base);
      j["b"] = nf.b;
      j["D"] = class_element_json(nf.d_class);
      break;
    case NormalFormKind::IndecCP1: {
      j["kind"] = "IndecCP1";
      j["b"] = nf.b;
      Json g = Json::array();
      for (auto& x : nf.g) g.push_back(x.v);
      j["g"] = g;
      break;
    }
    case NormalFormKind::IndecA0:
      j["kind"] = "IndecA0";
      j["b"] = nf.b;
      break;
    case NormalFormKind::ASbnD:
      j["kind"] = "ASbnD";
      j["L"] = class_element_json(nf.d_class);
      j["b"] = nf.b;
      j["n"] = nf.n;
      break;
  }
  return j;
}

Descriptor parse_descriptor(const ClassGroup& cls, const Json& j) {
  std::string fam = j.value("family", "");
  if (fam == "FiberProduct") {
    return Descriptor::fiber_product(parse_surface_tag(cls, j.at("s1")), parse_surface_tag(cls, j.at("s2")),
                                     (int)get_int(j, "projection"));
  }
  if (fam == "Dec") {
    return Descriptor::dec(parse_surface_tag(cls, j.at("base")), (int)get_int(j, "b"),
                           parse_class_element(cls, j.at("D")));
  }
  if (fam == "IndecCP1") {
    int b = (int)get_int(j, "b");
    std::vector<Fp> g;
    int64_t p = cls.backend() == Backend::Concrete ? cls.config().curve.p : 101;
    for (auto& x : j.at("g")) g.emplace_back(x.get<int64_t>(), p);
    return Descriptor::indec_cp1(b, g);
  }
  if (fam == "XA0b0") return Descriptor::xa0b0((int)get_int(j, "b"));
  if (fam == "ASbnD")
    return Descriptor::asbnd(parse_class_element(cls, j.at("L")), (int)get_int(j, "b"), (int)get_int(j, "n"));
  bad("unknown descriptor family: " + fam);
}

Json descriptor_json(const Descriptor& d) {
  Json j;
  j["family"] = family_name(d.family);
  switch (d.family) {
    case Family::FiberProduct:
      j["s1"] = surface_tag_json(d.s1);
      j["s2"] = surface_tag_json(d.s2);
      j["projection"] = d.projection;
      break;
    case Family::Dec:
      j["base"] = surface_tag_json(d.base);
      j["b"] = d.b;
      j["D"] = class_element_json(d.d);
      break;
    case Family::IndecCP1: {
      j["b"] = d.b;
      Json g = Json::array();
      for (auto& x : d.g) g.push_back(x.v);
      j["g"] = g;
      break;
    }
    case Family::XA0b0:
      j["b"] = d.b;
      break;
    case Family::ASbnD:
      j["L"] = class_element_json(d.d);
      j["b"] = d.b;
      j["n"] = d.n;
      break;
  }
  return j;
}

Json verdict_json(const Verdict& v) {
  Json j;
  j["relatively_maximal"] = v.relatively_maximal;
  j["rule"] = v.rule;
  j["reasons"] = v.reasons;
  j["witness_path"] = v.witness;
  return j;
}

Json stiffness_json(const StiffnessReport& r) {
  Json j;
  switch (r.status) {
    case Stiffness::Superstiff: j["status"] = "superstiff"; break;
    case Stiffness::NotStiff: j["status"] = "not-stiff"; break;
    case Stiffness::NotApplicable: j["status"] = "not-applicable"; break;
  }
  j["rule"] = r.rule;
  if (!r.family.empty()) j["family"] = r.family;
  if (!r.members.empty()) {
    Json m = Json::array();
    for (auto& d : r.members) m.push_back(descriptor_json(d));
    j["members"] = m;
  }
  return j;
}

Json aut_json(const AutDescriptor& a) {
  Json j;
  if (a.dimension) j["dimension"] = *a.dimension;
  j["kernel"] = a.kernel;
  j["image"] = a.image;
  j["sequence"] = a.sequence;
  return j;
}

} // namespace atlas
