#include "atlas/links.hpp"

#include <algorithm>
#include <deque>
#include <set>
#include <sstream>

namespace atlas {

const char* family_name(Family f) {
  switch (f) {
    case Family::FiberProduct: return "FiberProduct";
    case Family::Dec: return "Dec";
    case Family::IndecCP1: return "IndecCP1";
    case Family::XA0b0: return "XA0b0";
    case Family::ASbnD: return "ASbnD";
  }
  return "?";
}

Descriptor Descriptor::fiber_product(SurfaceTag a, SurfaceTag b, int projection) {
  Descriptor d;
  d.family = Family::FiberProduct;
  d.s1 = std::move(a);
  d.s2 = std::move(b);
  d.projection = projection;
  return d;
}

Descriptor Descriptor::dec(SurfaceTag base, int b, ClassElement cls) {
  Descriptor d;
  d.family = Family::Dec;
  d.base = std::move(base);
  d.b = b;
  d.d = std::move(cls);
  return d;
}

Descriptor Descriptor::indec_cp1(int b, std::vector<Fp> g) {
  Descriptor d;
  d.family = Family::IndecCP1;
  d.base = SurfaceTag::trivial();
  d.b = b;
  d.g = std::move(g);
  return d;
}

Descriptor Descriptor::xa0b0(int b) {
  Descriptor d;
  d.family = Family::XA0b0;
  d.base = SurfaceTag::a0();
  d.b = b;
  return d;
}

Descriptor Descriptor::asbnd(ClassElement sl_class, int b, int n) {
  Descriptor d;
  d.family = Family::ASbnD;
  d.base = SurfaceTag::sl(sl_class);
  d.d = std::move(sl_class);
  d.b = b;
  d.n = n;
  return d;
}

std::string Descriptor::str() const {
  std::ostringstream os;
  switch (family) {
    case Family::FiberProduct:
      os << "FiberProduct(" << s1.str() << ", " << s2.str() << "; onto " << (projection == 1 ? s1.str() : s2.str())
         << ")";
      break;
    case Family::Dec:
      os << "Dec(" << base.str() << ", b=" << b << ", D=" << d.str() << ")";
      break;
    case Family::IndecCP1: {
      os << "IndecCP1(b=" << b << ", g=[";
      for (size_t i = 0; i < g.size(); ++i) os << (i ? "," : "") << g[i].v;
      os << "])";
      break;
    }
    case Family::XA0b0:
      os << "X(A0," << b << ",0)";
      break;
    case Family::ASbnD:
      os << "A(S_" << d.str() << ", b=" << b << ", n=" << n << ")";
      break;
  }
  return os.str();
}

// ---------------------------------------------------------------------------

std::string LinkEngine::class_key(const ClassElement& c) const {
  ClassElement e = cls_.add(c, cls_.zero()); // canonical reduction
  std::ostringstream os;
  os << "d" << e.degree << ":";
  if (e.backend == Backend::Concrete) {
    os << e.cl0.str();
  } else {
    for (auto x : e.free) os << x << ",";
    os << ";";
    for (auto x : e.torsion) os << x << ",";
  }
  return os.str();
}

std::string LinkEngine::tag_key(const SurfaceTag& t, bool fold_sign) const {
  switch (t.kind) {
    case SurfaceKind::TrivialCP1: return "T";
    case SurfaceKind::A0: return "A0";
    case SurfaceKind::A1: return "A1";
    case SurfaceKind::SL: {
      std::string k1 = class_key(*t.sl_class);
      if (!fold_sign) return "SL[" + k1 + "]";
      std::string k2 = class_key(cls_.neg(*t.sl_class));
      return "SL[" + std::min(k1, k2) + "]";
    }
  }
  return "?";
}

bool LinkEngine::is_two_torsion(const ClassElement& c) const {
  return cls_.is_trivial(cls_.scale(2, c));
}

bool LinkEngine::infinite_order(const ClassElement& c) const {
  if (cls_.is_trivial(c)) return false;
  return cls_.order_of(c) == 0;
}

Descriptor LinkEngine::canonicalize(const Descriptor& d_in) const {
  Descriptor d = d_in;
  if (d.family == Family::ASbnD && d.b == 0) {
    // A(S,0,0) is the fiber product A0 x_C S
    return canonicalize(Descriptor::fiber_product(SurfaceTag::a0(), SurfaceTag::sl(d.d), 2));
  }
  if (d.family == Family::Dec) {
    if (d.b < 0) {
      // F_b = F_{-b}: swap the two summands; the invariant class negates
      d.b = -d.b;
      d.d = cls_.neg(d.d);
    }
    if (d.b == 0 && d.d.degree == 0) {
      // P(O + O(tau* D)) over the base is the fiber product with the second
      // factor read off from the class of D; nonzero degrees stay put (the
      // second factor is then outside the maximal-surface list)
      SurfaceTag second = cls_.is_trivial(d.d) ? SurfaceTag::trivial() : SurfaceTag::sl(d.d);
      return canonicalize(Descriptor::fiber_product(second, d.base, 2));
    }
    return d;
  }
  if (d.family == Family::FiberProduct) {
    std::string k1 = tag_key(d.s1, true);
    std::string k2 = tag_key(d.s2, true);
    if (k2 < k1) {
      std::swap(d.s1, d.s2);
      d.projection = 3 - d.projection;
    }
    return d;
  }
  return d;
}

std::string LinkEngine::canonical_key(const Descriptor& d_in) const {
  Descriptor d = canonicalize(d_in);
  std::ostringstream os;
  switch (d.family) {
    case Family::FiberProduct:
      os << "FP(" << tag_key(d.s1, true) << "|" << tag_key(d.s2, true) << "|p" << d.projection << ")";
      break;
    case Family::Dec:
      os << "Dec(" << tag_key(d.base, false) << "|" << d.b << "|" << class_key(d.d) << ")";
      break;
    case Family::IndecCP1: {
      os << "ICP1(" << d.b << "|";
      // projective normalization: first nonzero coefficient 1
      Fp scale;
      for (auto& x : d.g)
        if (!x.is_zero()) {
          scale = x.inv();
          break;
        }
      for (auto& x : d.g) os << (x * scale).v << ",";
      os << ")";
      break;
    }
    case Family::XA0b0:
      os << "XA0(" << d.b << ")";
      break;
    case Family::ASbnD:
      os << "AS(" << tag_key(d.base, false) << "|" << d.b << "|" << class_key(cls_.scale(d.n, d.d)) << ")";
      break;
  }
  return os.str();
}

void LinkEngine::require_valid(const Descriptor& d) const {
  auto check_tag = [&](const SurfaceTag& t) {
    if (t.kind == SurfaceKind::SL) {
      if (!t.sl_class) fail(Errc::MalformedInput, "SL tag without a class");
      if (t.sl_class->degree != 0 || cls_.is_trivial(*t.sl_class))
        fail(Errc::MalformedInput, "SL tag class must be nontrivial of degree zero");
    }
  };
  switch (d.family) {
    case Family::FiberProduct:
      check_tag(d.s1);
      check_tag(d.s2);
      if (d.projection != 1 && d.projection != 2) fail(Errc::MalformedInput, "projection must be 1 or 2");
      break;
    case Family::Dec:
      check_tag(d.base);
      break;
    case Family::IndecCP1: {
      if (d.b <= 0) fail(Errc::MalformedInput, "IndecCP1 requires b > 0");
      bool nz = false;
      for (auto& x : d.g) nz |= !x.is_zero();
      if (!nz) fail(Errc::MalformedInput, "IndecCP1 requires a nonzero binary form");
      if ((int)d.g.size() != d.b + 1) fail(Errc::MalformedInput, "binary form needs b+1 coefficients");
      break;
    }
    case Family::XA0b0:
      if (d.b <= 0) fail(Errc::MalformedInput, "XA0b0 requires b > 0");
      break;
    case Family::ASbnD:
      check_tag(d.base);
      if (d.b < 0 || d.n < 0 || d.n > d.b) fail(Errc::MalformedInput, "ASbnD requires 0 <= n <= b");
      break;
  }
}

std::vector<std::pair<LinkChoice, LinkResult>> LinkEngine::available_links(const Descriptor& d_in,
                                                                           LinkMode mode) const {
  Descriptor d = canonicalize(d_in);
  require_valid(d);
  std::vector<std::pair<LinkChoice, LinkResult>> out;
  auto add = [&](const std::string& name, std::optional<Descriptor> target, bool conj, int type,
                 const std::string& rule) {
    LinkResult r;
    if (target) r.target = canonicalize(*target);
    r.boundary_p2 = !target.has_value();
    r.conjugates_full_group = conj;
    r.link_type = type;
    r.rule = rule;
    out.push_back({LinkChoice{name}, r});
  };

  const ClassElement dsig = cls_.with_degree(cls_.dsigma(), 2);

  switch (d.family) {
    case Family::FiberProduct: {
      // type IV: exchange the two bundle structures
      add("swap", Descriptor::fiber_product(d.s1, d.s2, 3 - d.projection), true, 4, "b0-type-iv-swap");
      const SurfaceTag& base = d.projected_base();
      const SurfaceTag& other = d.other_factor();
      if (base.kind == SurfaceKind::A1 && other.kind == SurfaceKind::SL) {
        const ClassElement& D = *other.sl_class;
        bool conj = !is_two_torsion(D);
        std::string rule = conj ? "links-sl-a1" : "sl-a1-two-torsion";
        add("orbit-s0", Descriptor::dec(SurfaceTag::a1(), 4, cls_.sub(D, dsig)), conj, 2, rule);
        add("orbit-s1", Descriptor::dec(SurfaceTag::a1(), -4, cls_.add(D, dsig)), conj, 2, rule);
      } else if (base.kind == SurfaceKind::A1 && other.kind == SurfaceKind::A0) {
        if (mode == LinkMode::Witness)
          add("orbit", Descriptor::dec(SurfaceTag::a1(), 4, cls_.neg(dsig)), false, 2,
              "a0-a1-second-projection");
      } else if (base.kind == SurfaceKind::A0 && other.kind == SurfaceKind::SL) {
        const ClassElement& D = *other.sl_class;
        add("l00", Descriptor::dec(SurfaceTag::a0(), 1, D), true, 2, "links-a0-nontrivial");
        add("l10", Descriptor::dec(SurfaceTag::a0(), -1, D), true, 2, "links-a0-nontrivial");
      } else if (base.kind == SurfaceKind::SL && other.kind == SurfaceKind::A0) {
        const ClassElement& L = *base.sl_class;
        bool inf = infinite_order(L);
        if (inf) {
          add("l00", Descriptor::asbnd(L, 1, 0), true, 2, "links-as-table");
          add("l01", Descriptor::asbnd(L, 1, 1), true, 2, "links-as-table");
        } else if (mode == LinkMode::Witness) {
          add("l00", Descriptor::asbnd(L, 1, 0), false, 2, "as-torsion-chain");
          add("l01", Descriptor::asbnd(L, 1, 1), false, 2, "as-torsion-chain");
        }
      } else if (base.kind == SurfaceKind::SL && other.kind == SurfaceKind::SL) {
        const ClassElement& E = *base.sl_class;
        const ClassElement& D = *other.sl_class;
        bool stable = cls_.nontrivial_for_all_shifts(D, E);
        if (stable) {
          add("l00", Descriptor::dec(SurfaceTag::sl(E), 1, D), true, 2, "links-sl-dec");
          add("l01", Descriptor::dec(SurfaceTag::sl(E), 1, cls_.add(D, E)), true, 2, "links-sl-dec");
          add("l10", Descriptor::dec(SurfaceTag::sl(E), -1, D), true, 2, "links-sl-dec");
          add("l11", Descriptor::dec(SurfaceTag::sl(E), -1, cls_.sub(D, E)), true, 2, "links-sl-dec");
        } else if (mode == LinkMode::Witness) {
          add("l01", Descriptor::dec(SurfaceTag::sl(E), 1, cls_.add(D, E)), false, 2, "d-plus-ne-chain");
        }
      } else if (base.kind == SurfaceKind::A0 && other.kind == SurfaceKind::A0) {
        if (mode == LinkMode::Witness)
          add("diag", Descriptor::dec(SurfaceTag::a0(), 1, cls_.zero()), false, 2, "a0-a0-collapse");
      }
      // products with a TrivialCP1 factor and A1xA1 have no type II rows
      break;
    }
    case Family::Dec: {
      if (d.b == 1)
        add("contract", std::nullopt, false, 3, "b1-contraction");
      switch (d.base.kind) {
        case SurfaceKind::A1: {
          int64_t degD = d.d.degree;
          bool shape_ok = (d.b % 2 == 0) && d.b > 0 && degD == -(int64_t)d.b / 2;
          bool n2d = cls_.is_nontrivial_2divisor(d.d);
          if (shape_ok && n2d) {
            add("orbit-s0", Descriptor::dec(SurfaceTag::a1(), d.b + 4, cls_.sub(d.d, dsig)), true, 2,
                "links-a1-even");
            add("orbit-s1", Descriptor::dec(SurfaceTag::a1(), d.b - 4, cls_.add(d.d, dsig)), true, 2,
                "links-a1-even");
          } else if (shape_ok && !n2d) {
            if (mode == LinkMode::Witness)
              add("orbit-s0", Descriptor::dec(SurfaceTag::a1(), d.b + 4, cls_.sub(d.d, dsig)), false, 2,
                  "a1-trivial-pullback");
            else
              fail(Errc::SideConditionViolated, "D is not a nontrivial 2-divisor");
          } else if (mode == LinkMode::Orbit) {
            fail(Errc::SideConditionViolated, "A1-based class must be even b with deg(D) = -b/2");
          }
          break;
        }
        case SurfaceKind::A0: {
          if (d.d.degree != 0) {
            if (mode == LinkMode::Orbit) fail(Errc::SideConditionViolated, "deg(D) must be zero over A0");
            break;
          }
          if (!cls_.is_trivial(d.d)) {
            add("l0", Descriptor::dec(SurfaceTag::a0(), d.b + 1, d.d), true, 2, "links-a0-nontrivial");
            add("l1", Descriptor::dec(SurfaceTag::a0(), d.b - 1, d.d), true, 2, "links-a0-nontrivial");
          } else if (mode == LinkMode::Witness) {
            add("l-sigma", Descriptor::dec(SurfaceTag::a0(), d.b - 1, cls_.zero()), false, 2,
                "a0-trivial-chain");
          }
          break;
        }
        case SurfaceKind::SL: {
          const ClassElement& E = *d.base.sl_class;
          if (d.d.degree != 0) {
            if (mode == LinkMode::Orbit) fail(Errc::SideConditionViolated, "deg(D) must be zero over SL");
            break;
          }
          if (cls_.nontrivial_for_all_shifts(d.d, E)) {
            add("l00", Descriptor::dec(SurfaceTag::sl(E), d.b + 1, d.d), true, 2, "links-sl-dec");
            add("l01", Descriptor::dec(SurfaceTag::sl(E), d.b + 1, cls_.add(d.d, E)), true, 2, "links-sl-dec");
            add("l10", Descriptor::dec(SurfaceTag::sl(E), d.b - 1, d.d), true, 2, "links-sl-dec");
            add("l11", Descriptor::dec(SurfaceTag::sl(E), d.b - 1, cls_.sub(d.d, E)), true, 2, "links-sl-dec");
          } else if (mode == LinkMode::Witness) {
            if (cls_.is_trivial(d.d)) {
              // torsion classes climb to a power where the section moves;
              // infinite order descends to the fiber product
              if (cls_.order_of(E) != 0)
                add("l-climb", Descriptor::dec(SurfaceTag::sl(E), d.b + 1, cls_.zero()), false, 2,
                    "sl-torsion-climb");
              else
                add("l-chain", Descriptor::dec(SurfaceTag::sl(E), d.b - 1, cls_.zero()), false, 2,
                    "sl-trivial-chain");
            } else {
              add("l01", Descriptor::dec(SurfaceTag::sl(E), d.b + 1, cls_.add(d.d, E)), false, 2,
                  "d-plus-ne-chain");
            }
          } else {
            fail(Errc::SideConditionViolated, "some D + nE is trivial over the SL base");
          }
          break;
        }
        case SurfaceKind::TrivialCP1:
          // decomposable over CxP1: no equivariant type II rows
          if (d.d.degree != 0 && mode == LinkMode::Orbit)
            fail(Errc::SideConditionViolated, "deg(D) must be zero over CxP1");
          break;
      }
      break;
    }
    case Family::IndecCP1: {
      if (d.b == 1) add("contract", std::nullopt, false, 3, "b1-contraction");
      if (mode == LinkMode::Witness) {
        std::vector<Fp> g2 = d.g;
        g2.push_back(Fp(0, g2.empty() ? 0 : g2.front().p));
        add("const-section", Descriptor::indec_cp1(d.b + 1, g2), false, 2, "cp1-indec-collapse");
      }
      break;
    }
    case Family::XA0b0: {
      if (d.b == 1) add("contract", std::nullopt, false, 3, "b1-contraction");
      if (mode == LinkMode::Witness)
        add("min-section", Descriptor::dec(SurfaceTag::a0(), d.b + 1, cls_.zero()), false, 2,
            "a0-indec-collapse");
      break;
    }
    case Family::ASbnD: {
      if (d.b == 1) add("contract", std::nullopt, false, 3, "b1-contraction");
      const ClassElement& L = d.d;
      bool inf = infinite_order(L);
      if (!inf && mode == LinkMode::Orbit)
        fail(Errc::SideConditionViolated, "the AS table requires an infinite-order class");
      bool conj = inf;
      std::string rule = inf ? "links-as-table" : "as-torsion-chain";
      // table rows by the (b, n) regime
      if (d.n == 0 && d.b > 0) {
        add("l00", Descriptor::asbnd(L, d.b + 1, 0), conj, 2, rule);
        add("l01", Descriptor::asbnd(L, d.b + 1, 1), conj, 2, rule);
        add("l10", Descriptor::asbnd(L, d.b - 1, 0), conj, 2, rule);
      } else if (d.n == d.b && d.b > 0) {
        add("l00", Descriptor::asbnd(L, d.b + 1, d.b), conj, 2, rule);
        add("l01", Descriptor::asbnd(L, d.b + 1, d.b + 1), conj, 2, rule);
        add("l11", Descriptor::asbnd(L, d.b - 1, d.b - 1), conj, 2, rule);
      } else if (d.b > d.n && d.n > 0) {
        add("l00", Descriptor::asbnd(L, d.b + 1, d.n), conj, 2, rule);
        add("l01", Descriptor::asbnd(L, d.b + 1, d.n + 1), conj, 2, rule);
        add("l10", Descriptor::asbnd(L, d.b - 1, d.n), conj, 2, rule);
        add("l11", Descriptor::asbnd(L, d.b - 1, d.n - 1), conj, 2, rule);
      }
      break;
    }
  }
  return out;
}

LinkResult LinkEngine::apply_link(const Descriptor& d, const LinkChoice& c, LinkMode mode) const {
  for (auto& [choice, result] : available_links(d, mode))
    if (choice == c) return result;
  fail(Errc::InvalidChoice, "link '" + c.name + "' is not available from " + d.str());
}

OrbitGraph LinkEngine::enumerate_orbit(const Descriptor& d, int bound) const {
  if (bound < 0) fail(Errc::MalformedInput, "orbit bound must be >= 0");
  OrbitGraph graph;
  std::map<std::string, Descriptor> seen;
  std::set<std::tuple<std::string, std::string, std::string>> edges;
  Descriptor start = canonicalize(d);
  seen[canonical_key(start)] = start;
  std::deque<std::pair<Descriptor, int>> queue{{start, 0}};
  while (!queue.empty()) {
    auto [cur, depth] = queue.front();
    queue.pop_front();
    if (depth >= bound) continue;
    std::string cur_key = canonical_key(cur);
    std::vector<std::pair<LinkChoice, LinkResult>> rows;
    try {
      rows = available_links(cur, LinkMode::Orbit);
    } catch (const Error&) {
      continue; // no table applies; node stays a leaf
    }
    for (auto& [choice, result] : rows) {
      if (result.link_type != 2 || !result.conjugates_full_group || !result.target) continue;
      std::string key = canonical_key(*result.target);
      edges.insert({cur_key, choice.name, key});
      if (!seen.count(key)) {
        seen[key] = *result.target;
        queue.push_back({*result.target, depth + 1});
      }
    }
  }
  for (auto& [key, node] : seen) graph.nodes.push_back(node);
  graph.edges.assign(edges.begin(), edges.end());
  return graph;
}

namespace {

struct FamilyInfo {
  enum class Kind { Singleton, A1_4n, A1_4n2, A0Line, AS } kind;
  std::string singleton_key;
  ClassElement anchor;
};

} // namespace

// closed-family recognition per the stiffness classification; the anchor is
// the class datum pinning the family inside its kind
static std::optional<FamilyInfo> closed_family(const LinkEngine& eng, const ClassGroup& cls,
                                               const Descriptor& d_in) {
  Descriptor d = eng.canonicalize(d_in);
  const ClassElement dsig = cls.with_degree(cls.dsigma(), 2);
  auto singleton = [&] {
    FamilyInfo f;
    f.kind = FamilyInfo::Kind::Singleton;
    f.singleton_key = eng.canonical_key(d);
    return f;
  };
  if (d.family == Family::FiberProduct) {
    const SurfaceTag& base = d.projected_base();
    const SurfaceTag& other = d.other_factor();
    if (base.kind == SurfaceKind::TrivialCP1 || other.kind == SurfaceKind::TrivialCP1) return singleton();
    if (base.kind == SurfaceKind::A1 && other.kind == SurfaceKind::A1) return singleton();
    if (base.kind == SurfaceKind::A0 && other.kind == SurfaceKind::A1) return singleton();
    if (base.kind == SurfaceKind::SL && other.kind == SurfaceKind::A1) return singleton();
    if (base.kind == SurfaceKind::A1 && other.kind == SurfaceKind::SL) {
      const ClassElement& D = *other.sl_class;
      if (cls.is_trivial(cls.scale(2, D))) return std::nullopt;
      FamilyInfo f;
      f.kind = FamilyInfo::Kind::A1_4n;
      f.anchor = D;
      return f;
    }
    if (base.kind == SurfaceKind::A0 && other.kind == SurfaceKind::SL) {
      FamilyInfo f;
      f.kind = FamilyInfo::Kind::A0Line;
      f.anchor = *other.sl_class;
      return f;
    }
    if (base.kind == SurfaceKind::SL && other.kind == SurfaceKind::A0) {
      if (cls.is_trivial(*base.sl_class) || cls.order_of(*base.sl_class) != 0) return std::nullopt;
      FamilyInfo f;
      f.kind = FamilyInfo::Kind::AS;
      f.anchor = *base.sl_class;
      return f;
    }
    return std::nullopt;
  }
  if (d.family == Family::Dec) {
    if (d.base.kind == SurfaceKind::TrivialCP1 && d.d.degree == 0) return singleton();
    if (d.base.kind == SurfaceKind::A1) {
      if (d.b <= 0 || d.b % 2 != 0 || d.d.degree != -(int64_t)d.b / 2) return std::nullopt;
      if (!cls.is_nontrivial_2divisor(d.d)) return std::nullopt;
      FamilyInfo f;
      if (d.b % 4 == 0) {
        f.kind = FamilyInfo::Kind::A1_4n;
        f.anchor = cls.add(d.d, cls.scale(d.b / 4, dsig));
      } else {
        f.kind = FamilyInfo::Kind::A1_4n2;
        f.anchor = cls.add(d.d, cls.scale((d.b - 2) / 4, dsig));
      }
      return f;
    }
    if (d.base.kind == SurfaceKind::A0) {
      if (d.d.degree != 0 || cls.is_trivial(d.d)) return std::nullopt;
      FamilyInfo f;
      f.kind = FamilyInfo::Kind::A0Line;
      f.anchor = d.d;
      return f;
    }
    return std::nullopt;
  }
  if (d.family == Family::ASbnD) {
    if (cls.is_trivial(d.d) || cls.order_of(d.d) != 0) return std::nullopt;
    FamilyInfo f;
    f.kind = FamilyInfo::Kind::AS;
    f.anchor = d.d;
    return f;
  }
  return std::nullopt;
}

ConjugacyAnswer LinkEngine::is_conjugate(const Descriptor& a, const Descriptor& b, int bound) const {
  ConjugacyAnswer ans;
  std::string target_key = canonical_key(b);
  if (canonical_key(a) == target_key) {
    ans.kind = ConjugacyAnswer::Kind::Yes;
    ans.reason = "identical descriptors";
    return ans;
  }
  // bounded BFS with path recovery
  Descriptor start = canonicalize(a);
  std::map<std::string, std::pair<std::string, std::string>> parent; // key -> (parent key, choice)
  std::map<std::string, Descriptor> seen;
  std::string start_key = canonical_key(start);
  seen[start_key] = start;
  std::deque<std::pair<Descriptor, int>> queue{{start, 0}};
  while (!queue.empty()) {
    auto [cur, depth] = queue.front();
    queue.pop_front();
    if (depth >= bound) continue;
    std::string cur_key = canonical_key(cur);
    std::vector<std::pair<LinkChoice, LinkResult>> rows;
    try {
      rows = available_links(cur, LinkMode::Orbit);
    } catch (const Error&) {
      continue;
    }
    for (auto& [choice, result] : rows) {
      if (result.link_type != 2 || !result.conjugates_full_group || !result.target) continue;
      std::string key = canonical_key(*result.target);
      if (seen.count(key)) continue;
      seen[key] = *result.target;
      parent[key] = {cur_key, choice.name};
      if (key == target_key) {
        ans.kind = ConjugacyAnswer::Kind::Yes;
        std::vector<std::string> path;
        std::string k = key;
        while (parent.count(k)) {
          path.push_back(parent[k].second);
          k = parent[k].first;
        }
        std::reverse(path.begin(), path.end());
        ans.path = path;
        ans.reason = "link path found";
        return ans;
      }
      queue.push_back({*result.target, depth + 1});
    }
  }

  auto fa = closed_family(*this, cls_, a);
  auto fb = closed_family(*this, cls_, b);
  if (!fa || !fb) {
    ans.kind = ConjugacyAnswer::Kind::Unknown;
    ans.reason = "bound exhausted outside the recognized families";
    return ans;
  }
  auto equal = [&](const ClassElement& x, const ClassElement& y) { return cls_.is_trivial(cls_.sub(x, y)); };
  const ClassElement dsig = cls_.with_degree(cls_.dsigma(), 2);
  bool same = false;
  bool flip_ambiguity = false;
  if (fa->kind != fb->kind) {
    same = false;
  } else {
    switch (fa->kind) {
      case FamilyInfo::Kind::Singleton:
        same = fa->singleton_key == fb->singleton_key;
        break;
      case FamilyInfo::Kind::A1_4n:
      case FamilyInfo::Kind::A0Line:
        same = equal(fa->anchor, fb->anchor) || equal(fa->anchor, cls_.neg(fb->anchor));
        break;
      case FamilyInfo::Kind::A1_4n2:
        same = equal(fa->anchor, fb->anchor) ||
               equal(fa->anchor, cls_.neg(cls_.add(fb->anchor, dsig)));
        break;
      case FamilyInfo::Kind::AS:
        same = equal(fa->anchor, fb->anchor);
        // the opposite orientation presents the same surface; not decided here
        flip_ambiguity = !same && equal(fa->anchor, cls_.neg(fb->anchor));
        break;
    }
  }
  if (same) {
    ans.kind = ConjugacyAnswer::Kind::Unknown;
    ans.reason = "same closed family beyond the search bound";
    return ans;
  }
  if (flip_ambiguity) {
    ans.kind = ConjugacyAnswer::Kind::Unknown;
    ans.reason = "opposite SL-class orientations are not compared";
    return ans;
  }
  ans.kind = ConjugacyAnswer::Kind::No;
  ans.reason = "distinct closed conjugacy families";
  return ans;
}

} // namespace atlas
