#include "atlas/classify.hpp"

#include <sstream>

namespace atlas {

namespace {

Verdict positive(const std::string& rule, std::vector<std::string> reasons = {}) {
  Verdict v;
  v.relatively_maximal = true;
  v.rule = rule;
  v.reasons = std::move(reasons);
  return v;
}

Verdict negative(const std::string& rule, std::vector<std::string> reasons = {},
                 std::vector<std::string> witness = {}) {
  Verdict v;
  v.relatively_maximal = false;
  v.rule = rule;
  v.reasons = std::move(reasons);
  v.witness = std::move(witness);
  return v;
}

} // namespace

std::vector<std::string> Classifier::witness_path(const Descriptor& d, int steps) const {
  // follow witness-mode moves to record where the group grows
  std::vector<std::string> path;
  Descriptor cur = engine_.canonicalize(d);
  for (int i = 0; i < steps; ++i) {
    std::vector<std::pair<LinkChoice, LinkResult>> rows;
    try {
      rows = engine_.available_links(cur, LinkMode::Witness);
    } catch (const Error&) {
      break;
    }
    bool advanced = false;
    for (auto& [choice, result] : rows) {
      if (result.link_type != 2 || result.conjugates_full_group || !result.target) continue;
      path.push_back(choice.name + " -> " + result.target->str() + " [" + result.rule + "]");
      cur = *result.target;
      advanced = true;
      break;
    }
    if (!advanced) break;
  }
  return path;
}

Verdict Classifier::classify(const Descriptor& d_in, int genus) const {
  Descriptor d = engine_.canonicalize(d_in);
  if (genus >= 2) {
    if (d.family == Family::FiberProduct && d.s1.kind == SurfaceKind::TrivialCP1 &&
        d.s2.kind == SurfaceKind::TrivialCP1)
      return positive("genus2-product", {"X = C x P1 x P1 over C x P1"});
    return negative("genus2-only-product", {"for genus >= 2 only the trivial product is relatively maximal"});
  }
  if (genus != 1) fail(Errc::OutOfUniverse, "genus must be 1 or >= 2");
  return classify_genus1(d);
}

Verdict Classifier::classify_genus1(const Descriptor& d) const {
  switch (d.family) {
    case Family::FiberProduct: {
      const SurfaceTag& base = d.projected_base();
      const SurfaceTag& other = d.other_factor();
      // products with a trivial factor: both structures are relatively maximal
      if (base.kind == SurfaceKind::TrivialCP1 || other.kind == SurfaceKind::TrivialCP1)
        return positive("product-with-p1", {"S x P1 with S among the four maximal surfaces"});
      if (base.kind == SurfaceKind::A1 && other.kind == SurfaceKind::A1)
        return positive("a1-x-a1");
      if (base.kind == SurfaceKind::A0 && other.kind == SurfaceKind::A1)
        return positive("a0-a1-first-projection", {"projection onto A0"});
      if (base.kind == SurfaceKind::A1 && other.kind == SurfaceKind::A0)
        return negative("a0-a1-second-projection", {"projection onto A1 reaches a trivial-pullback model"},
                        witness_path(d, 1));
      if (base.kind == SurfaceKind::A0 && other.kind == SurfaceKind::A0)
        return negative("a0-a0-collapse", {"both projections collapse onto the (A0,1,0) family"},
                        witness_path(d, 2));
      if (base.kind == SurfaceKind::SL && other.kind == SurfaceKind::A1)
        return positive("sl-a1-first-projection", {"projection onto the decomposable factor"});
      if (base.kind == SurfaceKind::A1 && other.kind == SurfaceKind::SL) {
        const ClassElement& D = *other.sl_class;
        if (two_torsion(D))
          return negative("sl-a1-two-torsion", {"D is 2-torsion so the A1 chain hits a trivial pullback"},
                          witness_path(d, 1));
        return positive("sl-a1-second-projection", {"D is not 2-torsion"});
      }
      if (base.kind == SurfaceKind::A0 && other.kind == SurfaceKind::SL)
        return positive("sl-a0-first-projection", {"projection onto A0"});
      if (base.kind == SurfaceKind::SL && other.kind == SurfaceKind::A0) {
        const ClassElement& L = *base.sl_class;
        if (infinite_order(L)) return positive("sl-a0-second-projection", {"the class has infinite order"});
        return negative("as-torsion", {"torsion class: the AS chain reaches the torsion line-bundle rule"},
                        witness_path(d, 2));
      }
      if (base.kind == SurfaceKind::SL && other.kind == SurfaceKind::SL) {
        const ClassElement& E = *base.sl_class;
        const ClassElement& D = *other.sl_class;
        if (cls_.nontrivial_for_all_shifts(D, E))
          return positive("sl-x-sl", {"D + nE is nontrivial for every integer n"});
        return negative("d-plus-ne-trivial", {"some D + nE is trivial"}, witness_path(d, 1));
      }
      fail(Errc::OutOfUniverse, "fiber product outside the candidate list");
    }
    case Family::Dec: {
      const ClassElement& D = d.d;
      if (d.b == 0 && D.degree != 0)
        return negative("fiber-factor-not-maximal",
                        {"b = 0 with deg(D) != 0: the second ruled factor is not a maximal surface"});
      switch (d.base.kind) {
        case SurfaceKind::TrivialCP1:
          if (D.degree != 0) return negative("deg-obstruction", {"deg(D) != 0 forces a trivial C-action"});
          return positive("cp1-decomposable", {"decomposable with deg(D) = 0"});
        case SurfaceKind::A0:
          if (D.degree != 0) return negative("deg-obstruction", {"deg(D) != 0 forces a trivial C-action"});
          if (cls_.is_trivial(D))
            return negative("a0-trivial-invariant", {"the (A0,b,0) bundles descend to the product"},
                            witness_path(d, d.b + 1));
          return positive("a0-nontrivial-invariant", {"D nontrivial of degree zero"});
        case SurfaceKind::SL: {
          const ClassElement& E = *d.base.sl_class;
          if (D.degree != 0) return negative("deg-obstruction", {"deg(D) != 0 forces a trivial C-action"});
          if (cls_.is_trivial(D))
            return negative("sl-trivial-invariant", {"the (S,b,0) chain lands outside the positive families"},
                            witness_path(d, d.b + 1));
          if (cls_.nontrivial_for_all_shifts(D, E))
            return positive("sl-dec-family", {"D + nE is nontrivial for every integer n"});
          return negative("d-plus-ne-trivial", {"some D + nE is trivial"}, witness_path(d, 1));
        }
        case SurfaceKind::A1: {
          int64_t degD = D.degree;
          // deg(m2* D + b D0) = 4 deg D + 2b
          if (4 * degD + 2 * d.b != 0)
            return negative("a1-deg-obstruction", {"deg(m2*(D) + b D0) != 0"});
          if (!cls_.is_nontrivial_2divisor(D))
            return negative("a1-trivial-pullback", {"m2*(D) + b D0 is trivial"}, witness_path(d, 1));
          return positive("a1-even-chain", {"D is a nontrivial 2-divisor of degree -b/2"});
        }
      }
      fail(Errc::OutOfUniverse, "unknown base surface");
    }
    case Family::IndecCP1:
      return negative("cp1-indecomposable", {"the invariant constant section raises b with a larger group"},
                      witness_path(d, 1));
    case Family::XA0b0:
      return negative("a0-indec-collapse", {"the minimal-section move lands on the decomposable (A0,b+1,0)"},
                      witness_path(d, 1));
    case Family::ASbnD: {
      if (infinite_order(d.d)) return positive("as-family", {"the SL class has infinite order"});
      return negative("as-torsion", {"torsion class: the chain reaches the torsion line-bundle rule"},
                      witness_path(d, 2));
    }
  }
  fail(Errc::OutOfUniverse, "descriptor outside the implemented universe");
}

StiffnessReport Classifier::stiffness(const Descriptor& d_in, int genus) const {
  Descriptor d = engine_.canonicalize(d_in);
  StiffnessReport rep;
  Verdict v = classify(d, genus);
  if (!v.relatively_maximal) {
    rep.status = Stiffness::NotApplicable;
    rep.rule = "not-relatively-maximal";
    return rep;
  }
  if (genus >= 2) {
    rep.status = Stiffness::Superstiff;
    rep.rule = "genus2-product";
    return rep;
  }
  const ClassElement dsig = cls_.with_degree(cls_.dsigma(), 2);
  auto sample = [&](const Descriptor& a, const Descriptor& b) {
    rep.members = {engine_.canonicalize(a), engine_.canonicalize(b)};
  };
  switch (d.family) {
    case Family::FiberProduct: {
      const SurfaceTag& base = d.projected_base();
      const SurfaceTag& other = d.other_factor();
      if (base.kind == SurfaceKind::A1 && other.kind == SurfaceKind::SL) {
        rep.status = Stiffness::NotStiff;
        rep.rule = "a1-4n-family";
        rep.family = "Dec(A1, 4n, D - n*Dsigma) for n in Z";
        sample(d, Descriptor::dec(SurfaceTag::a1(), 4, cls_.sub(*other.sl_class, dsig)));
        return rep;
      }
      if (base.kind == SurfaceKind::SL && other.kind == SurfaceKind::A0) {
        rep.status = Stiffness::NotStiff;
        rep.rule = "as-family";
        rep.family = "A(S, b, n*D) for 0 <= n <= b";
        sample(d, Descriptor::asbnd(*base.sl_class, 1, 0));
        return rep;
      }
      if (base.kind == SurfaceKind::A0 && other.kind == SurfaceKind::SL) {
        rep.status = Stiffness::NotStiff;
        rep.rule = "a0-line-family";
        rep.family = "Dec(A0, b, D) for b in Z";
        sample(d, Descriptor::dec(SurfaceTag::a0(), 1, *other.sl_class));
        return rep;
      }
      if (base.kind == SurfaceKind::SL && other.kind == SurfaceKind::SL) {
        rep.status = Stiffness::NotStiff;
        rep.rule = "sl-bn-family";
        rep.family = "Dec(S_E, b, D + n*E) for b, n in Z";
        sample(d, Descriptor::dec(SurfaceTag::sl(*base.sl_class), 1, *other.sl_class));
        return rep;
      }
      rep.status = Stiffness::Superstiff;
      rep.rule = "fiber-product-superstiff";
      return rep;
    }
    case Family::Dec: {
      if (d.base.kind == SurfaceKind::TrivialCP1) {
        rep.status = Stiffness::Superstiff;
        rep.rule = "cp1-decomposable";
        return rep;
      }
      if (d.base.kind == SurfaceKind::A0) {
        rep.status = Stiffness::NotStiff;
        rep.rule = "a0-line-family";
        rep.family = "Dec(A0, b, D) for b in Z";
        sample(d, Descriptor::dec(SurfaceTag::a0(), d.b + 1, d.d));
        return rep;
      }
      if (d.base.kind == SurfaceKind::SL) {
        rep.status = Stiffness::NotStiff;
        rep.rule = "sl-bn-family";
        rep.family = "Dec(S_E, b, D + n*E) for b, n in Z";
        sample(d, Descriptor::dec(d.base, d.b + 1, d.d));
        return rep;
      }
      // A1 base, b even
      rep.status = Stiffness::NotStiff;
      if (d.b % 4 == 0) {
        rep.rule = "a1-4n-family";
        rep.family = "Dec(A1, 4n, D - n*Dsigma) for n in Z";
      } else {
        rep.rule = "a1-4n2-family";
        rep.family = "Dec(A1, 4n+2, D - n*Dsigma) for n in Z";
      }
      sample(d, Descriptor::dec(SurfaceTag::a1(), d.b + 4, cls_.sub(d.d, dsig)));
      return rep;
    }
    case Family::ASbnD: {
      rep.status = Stiffness::NotStiff;
      rep.rule = "as-family";
      rep.family = "A(S, b, n*D) for 0 <= n <= b";
      sample(d, Descriptor::asbnd(d.d, d.b + 1, d.n));
      return rep;
    }
    default:
      break;
  }
  rep.status = Stiffness::NotApplicable;
  rep.rule = "unclassified";
  return rep;
}

BirMax Classifier::bir_maximality(const Descriptor& d_in, int genus) const {
  Descriptor d = engine_.canonicalize(d_in);
  if (genus >= 2) {
    Verdict v = classify(d, genus);
    return v.relatively_maximal ? BirMax::Maximal : BirMax::NotMaximal;
  }
  Verdict v = classify(d, 1);
  switch (d.family) {
    case Family::FiberProduct: {
      const SurfaceTag& base = d.projected_base();
      const SurfaceTag& other = d.other_factor();
      auto kinds = [&](SurfaceKind a, SurfaceKind b) {
        return (base.kind == a && other.kind == b) || (base.kind == b && other.kind == a);
      };
      if (base.kind == SurfaceKind::TrivialCP1 || other.kind == SurfaceKind::TrivialCP1)
        return BirMax::Maximal; // case (i)
      if (kinds(SurfaceKind::A1, SurfaceKind::A1)) return BirMax::Maximal; // case (v)
      if (kinds(SurfaceKind::SL, SurfaceKind::A1)) return BirMax::Maximal; // case (vi)
      if (kinds(SurfaceKind::A0, SurfaceKind::A1)) return BirMax::NotMaximal; // case (iv)
      if (kinds(SurfaceKind::SL, SurfaceKind::A0)) {
        const ClassElement& L = base.kind == SurfaceKind::SL ? *base.sl_class : *other.sl_class;
        if (!infinite_order(L)) return BirMax::NotMaximal; // case (vii), finite order
        return BirMax::Open;                               // case (vii), infinite order
      }
      if (kinds(SurfaceKind::SL, SurfaceKind::SL)) {
        const ClassElement& E = *base.sl_class;
        const ClassElement& D = *other.sl_class;
        if (cls_.has_coprime_relation(D, E)) return BirMax::NotMaximal; // case (viii)
        return BirMax::Open;
      }
      if (kinds(SurfaceKind::A0, SurfaceKind::A0)) return BirMax::NotMaximal; // not even relatively maximal
      fail(Errc::OutOfUniverse, "fiber product outside the candidate list");
    }
    case Family::Dec:
      if (d.base.kind == SurfaceKind::TrivialCP1 && v.relatively_maximal)
        return d.b == 1 ? BirMax::Open : BirMax::Maximal; // case (ix)
      if (d.base.kind == SurfaceKind::A1 && v.relatively_maximal) {
        if (d.b % 4 == 2) return BirMax::Maximal; // case (x) conjugates
        return BirMax::Maximal;                   // case (vi) conjugates
      }
      if (d.base.kind == SurfaceKind::A0 && v.relatively_maximal) {
        // conjugate to case (vii) with the projection onto A0
        return infinite_order(d.d) ? BirMax::Open : BirMax::NotMaximal;
      }
      if (d.base.kind == SurfaceKind::SL && v.relatively_maximal) {
        const ClassElement& E = *d.base.sl_class;
        if (cls_.has_coprime_relation(d.d, E)) return BirMax::NotMaximal;
        return BirMax::Open;
      }
      return BirMax::NotMaximal;
    case Family::ASbnD:
      if (!v.relatively_maximal) return BirMax::NotMaximal;
      // conjugate to case (vii) with the projection onto S
      return BirMax::Open;
    default:
      return BirMax::NotMaximal;
  }
}

std::string Classifier::bir_rule(const Descriptor& d_in, int genus) const {
  Descriptor d = engine_.canonicalize(d_in);
  BirMax m = bir_maximality(d, genus);
  switch (m) {
    case BirMax::Maximal: return "coro-maximal-cases";
    case BirMax::NotMaximal: {
      Verdict v = classify(d, genus);
      if (!v.relatively_maximal) return "not-relatively-maximal";
      return "coro-negative-cases";
    }
    case BirMax::Open: return "open-forthcoming";
  }
  return "?";
}

AutDescriptor aut_surface(const SurfaceTag& tag) {
  AutDescriptor a;
  switch (tag.kind) {
    case SurfaceKind::TrivialCP1:
      a.dimension = 4;
      a.kernel = "PGL2";
      a.image = "full";
      a.sequence = "Aut0(C x P1) = Aut0(C) x PGL2";
      break;
    case SurfaceKind::A0:
      a.dimension = 2;
      a.kernel = "Ga";
      a.image = "full";
      a.sequence = "0 -> Ga -> Aut0(A0) -> Aut0(C) -> 0";
      break;
    case SurfaceKind::A1:
      a.dimension = 1;
      a.kernel = "(Z/2)^2";
      a.image = "full";
      a.sequence = "0 -> (Z/2)^2 -> Aut0(A1) -> Aut0(C) -> 0";
      break;
    case SurfaceKind::SL:
      a.dimension = 2;
      a.kernel = "Gm";
      a.image = "full";
      a.sequence = "0 -> Gm -> Aut0(S) -> Aut0(C) -> 0";
      break;
  }
  return a;
}

AutDescriptor Classifier::aut_descriptor(const Descriptor& d_in) const {
  Descriptor d = engine_.canonicalize(d_in);
  AutDescriptor a;
  switch (d.family) {
    case Family::FiberProduct: {
      AutDescriptor a1 = aut_surface(d.s1);
      AutDescriptor a2 = aut_surface(d.s2);
      a.dimension = *a1.dimension + *a2.dimension - 1;
      a.kernel = aut_surface(d.other_factor()).kernel;
      if (d.other_factor().kind == SurfaceKind::A1) a.kernel = "trivial"; // finite kernel, connected part
      a.image = "full";
      a.sequence = "Aut0(X) = Aut0(S1) x_{Aut0(C)} Aut0(S2)";
      return a;
    }
    case Family::Dec: {
      AutDescriptor base = aut_surface(d.base);
      if (d.base.kind == SurfaceKind::TrivialCP1 && cls_.is_trivial(d.d) && d.d.degree == 0) {
        // C x F_b: fiberwise group Gm x (sections of O(b sigma))
        a.dimension = *base.dimension + 1 + (d.b + 1);
        a.kernel = "product";
        a.image = "full";
        a.sequence = "0 -> Gm x Ga^(b+1) -> Aut0(X) -> Aut0(C x P1) -> 0";
        return a;
      }
      a.dimension = *base.dimension + 1;
      a.kernel = "Gm";
      a.image = "full";
      a.sequence = "0 -> Gm -> Aut0(X) -> Aut0(S) -> 0";
      return a;
    }
    case Family::IndecCP1:
      a.kernel = "product";
      a.image = "AutC-times-proper-subgroup";
      a.sequence = "pi_*(Aut0(X)) = Aut0(C) x G with G a proper subgroup of PGL2 (stabilizer of the binary form)";
      return a;
    case Family::XA0b0:
      a.kernel = "not-computed";
      a.image = "not-computed";
      a.sequence = "indecomposable (A0,b,0) bundle";
      return a;
    case Family::ASbnD:
      a.dimension = 3;
      a.kernel = "Ga";
      a.image = "full";
      a.sequence = "conjugate to Aut0(A0 x_C S) = Aut0(A0) x_{Aut0(C)} Aut0(S)";
      return a;
  }
  return a;
}

} // namespace atlas
