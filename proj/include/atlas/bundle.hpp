#pragma once

#include <optional>

#include "atlas/riemann_roch.hpp"

namespace atlas {

enum class SurfaceKind { TrivialCP1, A0, A1, SL };

const char* surface_kind_name(SurfaceKind k);

/// Base ruled surface of a two-chart bundle presentation. SL carries the
/// nontrivial degree-zero class of its defining line bundle.
struct SurfaceTag {
  SurfaceKind kind = SurfaceKind::TrivialCP1;
  std::optional<ClassElement> sl_class;

  static SurfaceTag trivial() { return {SurfaceKind::TrivialCP1, std::nullopt}; }
  static SurfaceTag a0() { return {SurfaceKind::A0, std::nullopt}; }
  static SurfaceTag a1() { return {SurfaceKind::A1, std::nullopt}; }
  static SurfaceTag sl(ClassElement cls) { return {SurfaceKind::SL, std::move(cls)}; }

  int segre() const { return kind == SurfaceKind::A1 ? 1 : 0; }
  std::string str() const;
};

/// Two charts U = C \ u_removed and V = C \ v_removed covering C; removed
/// sets are disjoint and consist of rational points. Transition maps go
/// from the V chart to the U chart.
struct Cover {
  std::vector<CurvePoint> u_removed;
  std::vector<CurvePoint> v_removed;

  bool contains_u(const CurvePoint& P) const;
  bool contains_v(const CurvePoint& P) const;
};

/// Degree-b form sum c[k] z0^k z1^(b-k) with function-field coefficients.
struct HomogeneousForm {
  int b = 0;
  std::vector<FunctionFieldElement> c; // size b+1

  static HomogeneousForm zero(const CurveSpec& curve, int b);
  bool is_zero() const;
};

/// Two-chart transition datum of an F_b-bundle over a ruled surface above
/// the curve: [y0 : y1 ; z0 : z1] -> [y0 : lambda y1 + form(z) y0 ; s.(z)].
/// The base matrix s is identity (TrivialCP1), [[1,0],[xi,1]] (A0, xi =
/// alpha^{-1}) or diag(1, a) (SL).
struct TransitionData {
  CurveSpec curve;
  SurfaceTag base;
  int b = 0;
  Cover cover;
  FunctionFieldElement lambda;
  std::optional<Divisor> lambda_divisor;
  HomogeneousForm form;
  FunctionFieldElement xi;         // A0 base off-diagonal (poles at the two chart points)
  std::optional<Divisor> xi_divisor;
  FunctionFieldElement a_cocycle;  // SL base diagonal cocycle
  std::optional<Divisor> a_divisor;
};

enum class NormalFormKind { Dec, IndecCP1, IndecA0, ASbnD };

/// Canonical representative of a bundle family. IndecA0 with b = 0 encodes
/// the non-split rank-2 extension factor arising in fiber products.
struct NormalForm {
  NormalFormKind kind = NormalFormKind::Dec;
  SurfaceTag base;
  int b = 0;
  ClassElement d_class;     // Dec: invariant class; ASbnD: the SL base class
  std::vector<Fp> g;        // IndecCP1 binary form, first nonzero entry scaled to 1
  int n = 0;                // ASbnD

  std::string str() const;
};

/// Scalar + coefficient twist from the two-chart isomorphism criterion:
/// lambda' = (mu_u/mu_v) lambda, form' = mu_u*form - (mu_u/mu_v) lambda*q_v
/// + q_u(s.z). mu factors may be chart units; q vectors have size b+1.
struct Coboundary {
  FunctionFieldElement mu_u, mu_v;
  std::optional<Divisor> mu_u_divisor, mu_v_divisor;
  std::vector<FunctionFieldElement> q_u, q_v;
};

class BundleOps {
public:
  BundleOps(const Curve& E, const ClassGroup& cls) : E_(E), cls_(cls), rr_(E, cls) {}

  const Curve& curve() const { return E_; }
  const ClassGroup& classes() const { return cls_; }
  const RiemannRoch& rr() const { return rr_; }

  // constructors for the canonical families
  TransitionData build_indec_cp1(int b, const std::vector<Fp>& g) const;
  TransitionData build_dec_trivial_base(int b, const ClassElement& d) const;
  TransitionData build_indec_a0(int b) const;
  TransitionData build_dec_a0(int b, const ClassElement& d) const;
  TransitionData build_as(const ClassElement& sl_class, int b, int n) const;
  TransitionData build_dec_sl(const ClassElement& sl_class, int b, const ClassElement& d) const;
  TransitionData build_from_normal_form(const NormalForm& nf) const;

  /// exact twist by the two-chart isomorphism data; preserves the class
  TransitionData apply_coboundary(const TransitionData& td, const Coboundary& cb) const;

  /// substitute the z-coordinates by an invertible 2x2 matrix (TrivialCP1
  /// base only): realizes pullback along a constant automorphism of P^1
  TransitionData substitute_z(const TransitionData& td, const std::array<std::array<Fp, 2>, 2>& m) const;

  std::tuple<SurfaceTag, int, ClassElement> extract_invariants(const TransitionData& td) const;
  NormalForm normalize(const TransitionData& td) const;
  bool is_decomposable(const TransitionData& td) const;
  bool s_isomorphic(const TransitionData& a, const TransitionData& b) const;
  bool normal_forms_equal(const NormalForm& a, const NormalForm& b) const;

  /// b = 0 data: identify the second ruled-surface factor
  std::pair<SurfaceTag, SurfaceTag> fiber_product_decompose(const TransitionData& td) const;

  /// regularity: lambda and all form coefficients pole-free on the overlap
  void validate(const TransitionData& td) const;

private:
  Divisor tracked_divisor(const FunctionFieldElement& f, const std::optional<Divisor>& cached) const;
  std::vector<CurvePoint> pole_candidates(const FunctionFieldElement& f) const;

  /// Exact decision of "form = sum_i alpha_i candidate_i + coboundary" via
  /// linear algebra over F_p on local-expansion windows at the chart points.
  /// Candidates are (index, function) pairs. Returns the alphas, or nullopt
  /// when the form is not in the candidate-plus-coboundary span.
  std::optional<std::vector<Fp>> solve_mod_coboundary(
      const TransitionData& td, const std::vector<std::pair<int, FunctionFieldElement>>& candidates) const;

  NormalForm normalize_trivial_base(const TransitionData& td) const;
  NormalForm normalize_a0_base(const TransitionData& td) const;
  NormalForm normalize_sl_base(const TransitionData& td) const;
  NormalForm normalize_fp0(const TransitionData& td) const;

  const Curve& E_;
  const ClassGroup& cls_;
  RiemannRoch rr_;
};

} // namespace atlas
