#include "atlas/bundle.hpp"

#include <algorithm>
#include <sstream>

namespace atlas {

namespace {

int64_t binom(int n, int k) {
  if (k < 0 || k > n) return 0;
  int64_t r = 1;
  for (int i = 0; i < k; ++i) r = r * (n - i) / (i + 1);
  return r;
}

} // namespace

const char* surface_kind_name(SurfaceKind k) {
  switch (k) {
    case SurfaceKind::TrivialCP1: return "CxP1";
    case SurfaceKind::A0: return "A0";
    case SurfaceKind::A1: return "A1";
    case SurfaceKind::SL: return "SL";
  }
  return "?";
}

std::string SurfaceTag::str() const {
  std::string s = surface_kind_name(kind);
  if (kind == SurfaceKind::SL && sl_class) s += "(" + sl_class->str() + ")";
  return s;
}

bool Cover::contains_u(const CurvePoint& P) const {
  return std::find(u_removed.begin(), u_removed.end(), P) != u_removed.end();
}

bool Cover::contains_v(const CurvePoint& P) const {
  return std::find(v_removed.begin(), v_removed.end(), P) != v_removed.end();
}

HomogeneousForm HomogeneousForm::zero(const CurveSpec& curve, int b) {
  HomogeneousForm f;
  f.b = b;
  f.c.assign(b + 1, FunctionFieldElement::zero(curve));
  return f;
}

bool HomogeneousForm::is_zero() const {
  for (auto& x : c)
    if (!x.is_zero()) return false;
  return true;
}

std::string NormalForm::str() const {
  std::ostringstream os;
  switch (kind) {
    case NormalFormKind::Dec:
      os << "Dec(" << base.str() << ", b=" << b << ", D=" << d_class.str() << ")";
      break;
    case NormalFormKind::IndecCP1: {
      os << "IndecCP1(b=" << b << ", g=[";
      for (size_t i = 0; i < g.size(); ++i) os << (i ? "," : "") << g[i].v;
      os << "])";
      break;
    }
    case NormalFormKind::IndecA0:
      os << "IndecA0(b=" << b << ")";
      break;
    case NormalFormKind::ASbnD:
      os << "AS(L=" << d_class.str() << ", b=" << b << ", n=" << n << ")";
      break;
  }
  return os.str();
}

Divisor BundleOps::tracked_divisor(const FunctionFieldElement& f, const std::optional<Divisor>& cached) const {
  if (cached) return *cached;
  return divisor_of(E_, f);
}

// ---------------------------------------------------------------------------
// canonical chart data

namespace {

struct ChartBasis {
  CurvePoint P;        // class representative (affine) or O for trivial classes
  CurvePoint T;        // translation point
  CurvePoint R;        // P (+) [1-d] T so that R + (d-1)T has class (d, P)
};

} // namespace

static ChartBasis chart_basis(const Curve& E, const CurvePoint& P, int64_t d) {
  // deterministic translation point avoiding collisions
  for (int64_t x = 0; x < E.p(); ++x) {
    for (const CurvePoint& T : E.lift_x(x)) {
      CurvePoint R = E.add(P, E.mul(1 - d, T));
      std::vector<CurvePoint> pts = {P, CurvePoint::infinity(), T, R};
      bool distinct = true;
      for (size_t i = 0; i < pts.size() && distinct; ++i)
        for (size_t j = i + 1; j < pts.size(); ++j)
          if (pts[i] == pts[j]) {
            distinct = false;
            break;
          }
      if (distinct) return {P, T, R};
    }
  }
  fail(Errc::NoSuchFunction, "curve has too few rational points for the canonical charts");
}

static CurvePoint first_affine_point(const Curve& E) {
  for (int64_t x = 0; x < E.p(); ++x) {
    auto lifts = E.lift_x(x);
    if (!lifts.empty()) return lifts.front();
  }
  fail(Errc::NoSuchFunction, "curve has no affine rational point");
}

// ---------------------------------------------------------------------------
// constructors

TransitionData BundleOps::build_indec_cp1(int b, const std::vector<Fp>& g) const {
  if (b <= 0) fail(Errc::MalformedInput, "IndecCP1 requires b > 0");
  if ((int)g.size() != b + 1) fail(Errc::MalformedInput, "binary form needs b+1 coefficients");
  const CurveSpec& c = E_.spec();
  CurvePoint p = first_affine_point(E_);
  CurvePoint o = CurvePoint::infinity();
  Divisor poles;
  poles.add(p, 1);
  poles.add(o, 1);
  FunctionFieldElement xi = rr_.function_with_poles(poles);
  TransitionData td;
  td.curve = c;
  td.base = SurfaceTag::trivial();
  td.b = b;
  td.cover.u_removed = {p};
  td.cover.v_removed = {o};
  td.lambda = FunctionFieldElement::one(c);
  td.lambda_divisor = Divisor();
  td.form = HomogeneousForm::zero(c, b);
  for (int k = 0; k <= b; ++k)
    if (!g[k].is_zero()) td.form.c[k] = xi.scaled(g[k]);
  return td;
}

TransitionData BundleOps::build_dec_trivial_base(int b, const ClassElement& d) const {
  const CurveSpec& c = E_.spec();
  TransitionData td;
  td.curve = c;
  td.base = SurfaceTag::trivial();
  td.b = b;
  td.form = HomogeneousForm::zero(c, b);
  if (cls_.is_trivial(d)) {
    CurvePoint p = first_affine_point(E_);
    td.cover.u_removed = {p};
    td.cover.v_removed = {CurvePoint::infinity()};
    td.lambda = FunctionFieldElement::one(c);
    td.lambda_divisor = Divisor();
    return td;
  }
  if (d.backend != Backend::Concrete) fail(Errc::BackendMismatch, "transition data needs the concrete backend");
  ChartBasis cb = chart_basis(E_, d.cl0, d.degree);
  CurvePoint o = CurvePoint::infinity();
  // div(lambda) = (R + (d-1)T) - (P + (d-1)O); V-part carries the class
  Divisor dv;
  dv.add(cb.R, 1);
  dv.add(cb.T, d.degree - 1);
  dv.add(cb.P, -1);
  dv.add(o, -(d.degree - 1));
  TrackedFunction lam = rr_.function_with_divisor(dv);
  td.cover.u_removed = {cb.P, o};
  td.cover.v_removed = {cb.R, cb.T};
  td.lambda = lam.value();
  td.lambda_divisor = lam.divisor();
  return td;
}

TransitionData BundleOps::build_indec_a0(int b) const {
  if (b <= 0) fail(Errc::MalformedInput, "the indecomposable (A0,b,0) bundle requires b > 0");
  const CurveSpec& c = E_.spec();
  CurvePoint p = first_affine_point(E_);
  CurvePoint o = CurvePoint::infinity();
  Divisor poles;
  poles.add(p, 1);
  poles.add(o, 1);
  TrackedFunction xi(rr_.function_with_poles(poles), Divisor());
  TransitionData td;
  td.curve = c;
  td.base = SurfaceTag::a0();
  td.b = b;
  td.cover.u_removed = {p};
  td.cover.v_removed = {o};
  td.lambda = FunctionFieldElement::one(c);
  td.lambda_divisor = Divisor();
  td.xi = xi.value();
  td.form = HomogeneousForm::zero(c, b);
  td.form.c[0] = td.xi; // a0 = 1 normal form: xi * z1^b
  return td;
}

TransitionData BundleOps::build_dec_a0(int b, const ClassElement& d) const {
  const CurveSpec& c = E_.spec();
  TransitionData td;
  td.curve = c;
  td.base = SurfaceTag::a0();
  td.b = b;
  td.form = HomogeneousForm::zero(c, b);
  CurvePoint o = CurvePoint::infinity();
  if (cls_.is_trivial(d)) {
    TransitionData base = build_indec_a0(std::max(b, 1));
    td.cover = base.cover;
    td.xi = base.xi;
    td.lambda = FunctionFieldElement::one(c);
    td.lambda_divisor = Divisor();
    return td;
  }
  if (d.backend != Backend::Concrete) fail(Errc::BackendMismatch, "transition data needs the concrete backend");
  ChartBasis cb = chart_basis(E_, d.cl0, d.degree);
  Divisor dv;
  dv.add(cb.R, 1);
  dv.add(cb.T, d.degree - 1);
  dv.add(cb.P, -1);
  dv.add(o, -(d.degree - 1));
  TrackedFunction lam = rr_.function_with_divisor(dv);
  Divisor xip;
  xip.add(cb.P, 1);
  xip.add(cb.T, 1);
  td.cover.u_removed = {cb.P, o};
  td.cover.v_removed = {cb.R, cb.T};
  td.lambda = lam.value();
  td.lambda_divisor = lam.divisor();
  td.xi = rr_.function_with_poles(xip);
  return td;
}

TransitionData BundleOps::build_as(const ClassElement& sl_class, int b, int n) const {
  if (b < 0 || n < 0 || n > b) fail(Errc::MalformedInput, "AS data needs 0 <= n <= b");
  if (cls_.is_trivial(sl_class) || sl_class.degree != 0)
    fail(Errc::MalformedInput, "the SL base class must be nontrivial of degree zero");
  if (sl_class.backend != Backend::Concrete)
    fail(Errc::BackendMismatch, "transition data needs the concrete backend");
  const CurveSpec& c = E_.spec();
  ChartBasis cb = chart_basis(E_, sl_class.cl0, 0);
  CurvePoint o = CurvePoint::infinity();
  Divisor da;
  da.add(cb.R, 1);
  da.add(cb.T, -1);
  da.add(cb.P, -1);
  da.add(o, 1);
  TrackedFunction a = rr_.function_with_divisor(da);
  Divisor xip;
  xip.add(cb.P, 1);
  xip.add(cb.T, 1);
  FunctionFieldElement xi = rr_.function_with_poles(xip);
  TrackedFunction lam = a.pow(n);
  TransitionData td;
  td.curve = c;
  td.base = SurfaceTag::sl(sl_class);
  td.b = b;
  td.cover.u_removed = {cb.P, o};
  td.cover.v_removed = {cb.R, cb.T};
  td.a_cocycle = a.value();
  td.a_divisor = a.divisor();
  td.lambda = lam.value();
  td.lambda_divisor = lam.divisor();
  td.form = HomogeneousForm::zero(c, b);
  td.form.c[b - n] = lam.value() * xi; // a^n * xi * z0^(b-n) z1^n
  return td;
}

TransitionData BundleOps::build_dec_sl(const ClassElement& sl_class, int b, const ClassElement& d) const {
  if (cls_.is_trivial(sl_class) || sl_class.degree != 0)
    fail(Errc::MalformedInput, "the SL base class must be nontrivial of degree zero");
  if (sl_class.backend != Backend::Concrete)
    fail(Errc::BackendMismatch, "transition data needs the concrete backend");
  const CurveSpec& c = E_.spec();
  ChartBasis cb = chart_basis(E_, sl_class.cl0, 0);
  CurvePoint o = CurvePoint::infinity();
  Divisor da;
  da.add(cb.R, 1);
  da.add(cb.T, -1);
  da.add(cb.P, -1);
  da.add(o, 1);
  TrackedFunction a = rr_.function_with_divisor(da);
  TransitionData td;
  td.curve = c;
  td.base = SurfaceTag::sl(sl_class);
  td.b = b;
  td.cover.u_removed = {cb.P, o};
  td.cover.v_removed = {cb.R, cb.T};
  td.a_cocycle = a.value();
  td.a_divisor = a.divisor();
  td.form = HomogeneousForm::zero(c, b);
  if (cls_.is_trivial(d)) {
    td.lambda = FunctionFieldElement::one(c);
    td.lambda_divisor = Divisor();
    return td;
  }
  if (d.backend != Backend::Concrete) fail(Errc::BackendMismatch, "transition data needs the concrete backend");
  // lambda cocycle for D: V-part R' + j*T and U-part P_D + (deg-1)*O both
  // carry the class of D, so their difference is principal on these charts
  CurvePoint PD = d.cl0;
  int64_t j = d.degree - 1;
  CurvePoint Rp = E_.add(d.cl0, E_.mul(-j, cb.T));
  for (int tries = 0; tries < 8 && (Rp == cb.P || Rp == o || Rp == PD); ++tries) {
    j += 1;
    Rp = E_.add(d.cl0, E_.mul(-j, cb.T));
  }
  if (Rp == cb.P || Rp == o || Rp == PD) fail(Errc::NoSuchFunction, "no chart-compatible class representative");
  Divisor dv;
  dv.add(Rp, 1);
  dv.add(cb.T, j);
  dv.add(PD, -1);
  dv.add(o, -(d.degree - 1));
  if (dv.degree() != 0) fail(Errc::MalformedInput, "internal: cocycle divisor must have degree zero");
  TrackedFunction lam = rr_.function_with_divisor(dv);
  auto push_unique = [](std::vector<CurvePoint>& set, const CurvePoint& pt) {
    if (std::find(set.begin(), set.end(), pt) == set.end()) set.push_back(pt);
  };
  push_unique(td.cover.u_removed, PD);
  push_unique(td.cover.v_removed, Rp);
  for (auto& u : td.cover.u_removed)
    if (td.cover.contains_v(u)) fail(Errc::NoSuchFunction, "chart sets collided for this class");
  td.lambda = lam.value();
  td.lambda_divisor = lam.divisor();
  return td;
}

TransitionData BundleOps::build_from_normal_form(const NormalForm& nf) const {
  switch (nf.kind) {
    case NormalFormKind::IndecCP1: {
      std::vector<Fp> g = nf.g;
      g.resize(nf.b + 1, Fp(0, E_.p()));
      return build_indec_cp1(nf.b, g);
    }
    case NormalFormKind::IndecA0:
      return build_indec_a0(nf.b);
    case NormalFormKind::ASbnD:
      return build_as(nf.d_class, nf.b, nf.n);
    case NormalFormKind::Dec:
      switch (nf.base.kind) {
        case SurfaceKind::TrivialCP1: return build_dec_trivial_base(nf.b, nf.d_class);
        case SurfaceKind::A0: return build_dec_a0(nf.b, nf.d_class);
        case SurfaceKind::SL: return build_dec_sl(*nf.base.sl_class, nf.b, nf.d_class);
        case SurfaceKind::A1: fail(Errc::OutOfFamily, "A1-based bundles are handled at descriptor level");
      }
  }
  fail(Errc::MalformedInput, "unknown normal form");
}

// ---------------------------------------------------------------------------
// coboundary action

TransitionData BundleOps::apply_coboundary(const TransitionData& td, const Coboundary& cb) const {
  int b = td.b;
  if ((int)cb.q_u.size() != b + 1 || (int)cb.q_v.size() != b + 1)
    fail(Errc::MalformedInput, "coboundary coefficient vectors must have size b+1");
  TransitionData out = td;
  FunctionFieldElement ratio = cb.mu_u / cb.mu_v;
  out.lambda = ratio * td.lambda;
  if (td.lambda_divisor) {
    Divisor d = *td.lambda_divisor;
    if (cb.mu_u_divisor) d = d + *cb.mu_u_divisor;
    if (cb.mu_v_divisor) d = d - *cb.mu_v_divisor;
    if (!cb.mu_u_divisor && !cb.mu_u.is_constant()) out.lambda_divisor.reset();
    else if (!cb.mu_v_divisor && !cb.mu_v.is_constant()) out.lambda_divisor.reset();
    else out.lambda_divisor = d;
  }
  FunctionFieldElement lam_ratio = ratio * td.lambda;
  // form' = mu_u * form - (mu_u/mu_v) lambda * q_v + q_u(s.z)
  for (int k = 0; k <= b; ++k) out.form.c[k] = cb.mu_u * td.form.c[k] - lam_ratio * cb.q_v[k];
  switch (td.base.kind) {
    case SurfaceKind::TrivialCP1:
      for (int k = 0; k <= b; ++k) out.form.c[k] = out.form.c[k] + cb.q_u[k];
      break;
    case SurfaceKind::A0: {
      // q_u(z0, xi z0 + z1) spreads index s into indices s+t with weight
      // C(b-s, t) xi^t
      std::vector<FunctionFieldElement> xi_pow{FunctionFieldElement::one(td.curve)};
      for (int t = 1; t <= b; ++t) xi_pow.push_back(xi_pow.back() * td.xi);
      for (int s = 0; s <= b; ++s) {
        if (cb.q_u[s].is_zero()) continue;
        for (int t = 0; s + t <= b; ++t) {
          Fp w(binom(b - s, t), E_.p());
          if (w.is_zero()) continue;
          out.form.c[s + t] = out.form.c[s + t] + cb.q_u[s].scaled(w) * xi_pow[t];
        }
      }
      break;
    }
    case SurfaceKind::SL: {
      // q_u(z0, a z1) multiplies index k by a^(b-k)
      for (int k = 0; k <= b; ++k) {
        if (cb.q_u[k].is_zero()) continue;
        out.form.c[k] = out.form.c[k] + cb.q_u[k] * td.a_cocycle.pow(b - k);
      }
      break;
    }
    case SurfaceKind::A1:
      fail(Errc::OutOfFamily, "A1-based transition data is not represented");
  }
  return out;
}

TransitionData BundleOps::substitute_z(const TransitionData& td, const std::array<std::array<Fp, 2>, 2>& m) const {
  if (td.base.kind != SurfaceKind::TrivialCP1)
    fail(Errc::OutOfFamily, "z-substitution is only defined over the trivial base");
  // (z0, z1) -> (a z0 + b z1, c z0 + d z1); expand sum c_k (a z0+b z1)^k (c z0+d z1)^(b-k)
  int b = td.b;
  const CurveSpec& curve = td.curve;
  TransitionData out = td;
  std::vector<FunctionFieldElement> acc(b + 1, FunctionFieldElement::zero(curve));
  for (int k = 0; k <= b; ++k) {
    if (td.form.c[k].is_zero()) continue;
    // (a z0 + b z1)^k: sum_i C(k,i) a^i b^(k-i) z0^i z1^(k-i)
    for (int i = 0; i <= k; ++i) {
      Fp w1 = Fp(binom(k, i), curve.p) * m[0][0].pow(i) * m[0][1].pow(k - i);
      if (w1.is_zero()) continue;
      for (int j = 0; j <= b - k; ++j) {
        Fp w2 = Fp(binom(b - k, j), curve.p) * m[1][0].pow(j) * m[1][1].pow(b - k - j);
        if (w2.is_zero()) continue;
        acc[i + j] = acc[i + j] + td.form.c[k].scaled(w1 * w2);
      }
    }
  }
  out.form.c = std::move(acc);
  return out;
}

// ---------------------------------------------------------------------------
// invariants and validation

std::tuple<SurfaceTag, int, ClassElement> BundleOps::extract_invariants(const TransitionData& td) const {
  Divisor dl = tracked_divisor(td.lambda, td.lambda_divisor);
  // the V-side part of div(lambda) carries the class of the invariant divisor
  Divisor v_part;
  for (auto& [pt, m] : dl.points())
    if (td.cover.contains_v(pt)) v_part.add(pt, m);
  return {td.base, td.b, cls_.class_of(v_part)};
}

std::vector<CurvePoint> BundleOps::pole_candidates(const FunctionFieldElement& f) const {
  std::vector<CurvePoint> out;
  out.push_back(CurvePoint::infinity());
  auto add_roots = [&](const Poly& den) {
    Poly cof = Poly::zero(E_.p());
    for (auto& [x0, m] : den.rational_roots(&cof)) {
      auto lifts = E_.lift_x(x0);
      if (lifts.empty()) fail(Errc::UnsupportedSupport, "denominator root over no rational point");
      for (auto& pt : lifts) out.push_back(pt);
    }
    if (cof.degree() > 0) fail(Errc::UnsupportedSupport, "denominator with non-rational roots");
  };
  if (!f.u().is_zero()) add_roots(f.u().den());
  if (!f.v().is_zero()) add_roots(f.v().den());
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end()), out.end());
  return out;
}

void BundleOps::validate(const TransitionData& td) const {
  for (auto& p : td.cover.u_removed)
    if (td.cover.contains_v(p)) fail(Errc::MalformedInput, "chart removed sets must be disjoint");
  auto check_regular = [&](const FunctionFieldElement& f, const char* what) {
    if (f.is_zero()) return;
    for (auto& z : pole_candidates(f)) {
      if (td.cover.contains_u(z) || td.cover.contains_v(z)) continue;
      if (valuation(f, z) < 0)
        fail(Errc::MalformedInput, std::string(what) + " has a pole on the chart overlap at " + z.str());
    }
  };
  check_regular(td.lambda, "lambda");
  for (auto& c : td.form.c) check_regular(c, "form coefficient");
  if (td.lambda.is_zero()) fail(Errc::MalformedInput, "lambda must be nonzero");
  if ((int)td.form.c.size() != td.b + 1) fail(Errc::MalformedInput, "form size mismatch");
}

// ---------------------------------------------------------------------------
// coboundary membership via linear algebra on expansion windows

namespace {

// Gaussian elimination over F_p: solve A x = rhs; any particular solution.
std::optional<std::vector<int64_t>> solve_linear(int64_t p, std::vector<std::vector<int64_t>> rows,
                                                 std::vector<int64_t> rhs, int cols) {
  int nrows = (int)rows.size();
  int rank = 0;
  std::vector<int> pivot_col;
  for (int col = 0; col < cols && rank < nrows; ++col) {
    int sel = -1;
    for (int r = rank; r < nrows; ++r)
      if (rows[r][col] != 0) {
        sel = r;
        break;
      }
    if (sel < 0) continue;
    std::swap(rows[sel], rows[rank]);
    std::swap(rhs[sel], rhs[rank]);
    int64_t inv = mod_inv(rows[rank][col], p);
    for (int c = col; c < cols; ++c) rows[rank][c] = rows[rank][c] * inv % p;
    rhs[rank] = rhs[rank] * inv % p;
    for (int r = 0; r < nrows; ++r) {
      if (r == rank || rows[r][col] == 0) continue;
      int64_t f = rows[r][col];
      for (int c = col; c < cols; ++c) rows[r][c] = (rows[r][c] - f * rows[rank][c] % p + p * p) % p;
      rhs[r] = (rhs[r] - f * rhs[rank] % p + p * p) % p;
    }
    pivot_col.push_back(col);
    ++rank;
  }
  for (int r = rank; r < nrows; ++r)
    if (rhs[r] != 0) return std::nullopt; // inconsistent
  std::vector<int64_t> x(cols, 0);
  for (int r = 0; r < rank; ++r) x[pivot_col[r]] = rhs[r];
  return x;
}

} // namespace

std::optional<std::vector<Fp>> BundleOps::solve_mod_coboundary(
    const TransitionData& td, const std::vector<std::pair<int, FunctionFieldElement>>& candidates) const {
  const CurveSpec& curve = td.curve;
  int64_t p = curve.p;
  int b = td.b;

  std::vector<CurvePoint> pts = td.cover.u_removed;
  pts.insert(pts.end(), td.cover.v_removed.begin(), td.cover.v_removed.end());
  std::sort(pts.begin(), pts.end());
  pts.erase(std::unique(pts.begin(), pts.end()), pts.end());

  // model size: worst pole order among the data, candidates and multipliers
  auto max_pole = [&](const FunctionFieldElement& f) {
    int worst = 0;
    if (f.is_zero()) return 0;
    for (auto& z : pts) worst = std::max(worst, -valuation(f, z));
    return worst;
  };
  int data_order = 0;
  for (auto& c : td.form.c) data_order = std::max(data_order, max_pole(c));
  for (auto& [k, cand] : candidates) data_order = std::max(data_order, max_pole(cand));
  int mult_order = max_pole(td.lambda);
  if (td.base.kind == SurfaceKind::A0) mult_order = std::max(mult_order, b * max_pole(td.xi));
  if (td.base.kind == SurfaceKind::SL) mult_order = std::max(mult_order, b * max_pole(td.a_cocycle));

  for (int margin = 2; margin <= 8; margin += 3) {
    int K = data_order + mult_order + margin; // pole budget for the q spaces
    int KK = K + mult_order;                  // worst pole order of any column
    int width = 2 * KK + 2;
    // frames grow on demand: internal u/v poles may sit deeper than the
    // element's valuation and cost precision inside products
    std::vector<int> frame_prec(pts.size(), 2 * KK + 14);
    std::vector<LocalFrame> frames;
    for (size_t i = 0; i < pts.size(); ++i) frames.push_back(local_frame(curve, pts[i], frame_prec[i]));

    // coordinates of one function-field element at one chart point
    auto window = [&](const FunctionFieldElement& f, size_t i) {
      std::vector<int64_t> w(width, 0);
      if (f.is_zero()) return w;
      for (int attempt = 0; attempt < 8; ++attempt) {
        Series s = expand_series(f, frames[i], width - KK);
        if (s.known_nonzero() && s.lead() < -KK) fail(Errc::OutOfFamily, "expansion window too small");
        if (s.precision() >= width - KK) return s.coeff_window(-KK, width);
        frame_prec[i] = 2 * frame_prec[i] + 8;
        frames[i] = local_frame(curve, pts[i], frame_prec[i]);
      }
      fail(Errc::PrecisionExhausted, "coordinate window lost precision");
    };
    // coordinates of a whole form vector
    auto form_coords = [&](const std::vector<FunctionFieldElement>& form) {
      std::vector<int64_t> out;
      out.reserve((b + 1) * pts.size() * width);
      for (int k = 0; k <= b; ++k)
        for (size_t i = 0; i < pts.size(); ++i) {
          auto w = window(form[k], i);
          out.insert(out.end(), w.begin(), w.end());
        }
      return out;
    };

    // spanning sets for the chart-regular coefficient spaces
    Divisor du, dv;
    for (auto& z : td.cover.u_removed) du.add(z, K);
    for (auto& z : td.cover.v_removed) dv.add(z, K);
    std::vector<FunctionFieldElement> u_basis = rr_.rr_basis(du).basis;
    std::vector<FunctionFieldElement> v_basis = rr_.rr_basis(dv).basis;

    // columns: candidates first, then q_u and q_v coefficients per index
    std::vector<std::vector<int64_t>> columns;
    auto zero_form = [&] { return std::vector<FunctionFieldElement>(b + 1, FunctionFieldElement::zero(curve)); };
    for (auto& [k, cand] : candidates) {
      auto f = zero_form();
      f[k] = cand;
      columns.push_back(form_coords(f));
    }
    // q_v action: index-diagonal, weight -lambda (sign folded into the solution)
    for (int k = 0; k <= b; ++k)
      for (auto& h : v_basis) {
        auto f = zero_form();
        f[k] = td.lambda * h;
        columns.push_back(form_coords(f));
      }
    // q_u action depends on the base transition
    for (int s = 0; s <= b; ++s)
      for (auto& h : u_basis) {
        auto f = zero_form();
        switch (td.base.kind) {
          case SurfaceKind::TrivialCP1:
            f[s] = h;
            break;
          case SurfaceKind::A0: {
            FunctionFieldElement xit = FunctionFieldElement::one(curve);
            for (int t = 0; s + t <= b; ++t) {
              Fp w(binom(b - s, t) % p, p);
              if (!w.is_zero()) f[s + t] = f[s + t] + h.scaled(w) * xit;
              xit = xit * td.xi;
            }
            break;
          }
          case SurfaceKind::SL:
            f[s] = h * td.a_cocycle.pow(b - s);
            break;
          case SurfaceKind::A1:
            fail(Errc::OutOfFamily, "A1-based transition data is not represented");
        }
        columns.push_back(form_coords(f));
      }

    std::vector<int64_t> rhs = form_coords(td.form.c);
    int nrows = (int)rhs.size();
    int ncols = (int)columns.size();
    std::vector<std::vector<int64_t>> rows(nrows, std::vector<int64_t>(ncols, 0));
    for (int c = 0; c < ncols; ++c)
      for (int r = 0; r < nrows; ++r) rows[r][c] = columns[c][r];
    auto sol = solve_linear(p, std::move(rows), std::move(rhs), ncols);
    if (!sol) {
      if (margin + 3 <= 8) continue; // retry with a larger window
      return std::nullopt;
    }
    std::vector<Fp> alphas;
    for (size_t i = 0; i < candidates.size(); ++i) alphas.emplace_back((*sol)[i], p);
    return alphas;
  }
  return std::nullopt;
}

// ---------------------------------------------------------------------------
// normalization

NormalForm BundleOps::normalize(const TransitionData& td) const {
  validate(td);
  if (td.b == 0) return normalize_fp0(td);
  switch (td.base.kind) {
    case SurfaceKind::TrivialCP1: return normalize_trivial_base(td);
    case SurfaceKind::A0: return normalize_a0_base(td);
    case SurfaceKind::SL: return normalize_sl_base(td);
    case SurfaceKind::A1: fail(Errc::OutOfFamily, "A1-based data is handled at descriptor level");
  }
  fail(Errc::MalformedInput, "unreachable");
}

NormalForm BundleOps::normalize_trivial_base(const TransitionData& td) const {
  auto [tag, b, dclass] = extract_invariants(td);
  const CurveSpec& curve = td.curve;
  if (dclass.degree != 0) fail(Errc::OutOfFamily, "trivial-base family needs deg(D) = 0");

  if (!cls_.is_trivial(dclass)) {
    // nontrivial class: every datum is a coboundary twist of the split form
    if (!solve_mod_coboundary(td, {}))
      fail(Errc::OutOfFamily, "form is not a coboundary twist of the split bundle");
    NormalForm nf;
    nf.kind = NormalFormKind::Dec;
    nf.base = SurfaceTag::trivial();
    nf.b = b;
    nf.d_class = dclass;
    return nf;
  }

  // trivial class: residues live in xi * (binary forms in z)
  if (td.cover.u_removed.size() != 1 || td.cover.v_removed.size() != 1)
    fail(Errc::OutOfFamily, "trivial-class family expects singleton chart sets");
  CurvePoint pu = td.cover.u_removed[0];
  CurvePoint pv = td.cover.v_removed[0];
  Divisor xip;
  xip.add(pu, 1);
  xip.add(pv, 1);
  FunctionFieldElement xi = rr_.function_with_poles(xip);
  std::vector<std::pair<int, FunctionFieldElement>> candidates;
  for (int k = 0; k <= b; ++k) candidates.emplace_back(k, xi);
  auto alphas = solve_mod_coboundary(td, candidates);
  if (!alphas) fail(Errc::OutOfFamily, "form is outside the residue family over the trivial base");
  bool all_zero = true;
  for (auto& a : *alphas) all_zero &= a.is_zero();
  NormalForm nf;
  nf.b = b;
  nf.base = SurfaceTag::trivial();
  if (all_zero) {
    nf.kind = NormalFormKind::Dec;
    nf.d_class = cls_.zero();
    return nf;
  }
  nf.kind = NormalFormKind::IndecCP1;
  std::vector<Fp> g = *alphas;
  Fp scale(0, curve.p);
  for (auto& x : g)
    if (!x.is_zero()) {
      scale = x.inv();
      break;
    }
  for (auto& x : g) x = x * scale;
  nf.g = g;
  return nf;
}

NormalForm BundleOps::normalize_a0_base(const TransitionData& td) const {
  auto [tag, b, dclass] = extract_invariants(td);
  if (dclass.degree != 0) fail(Errc::OutOfFamily, "A0-base family needs deg(D) = 0");
  if (td.xi.is_zero()) fail(Errc::MalformedInput, "A0 base needs its xi entry");

  if (!cls_.is_trivial(dclass)) {
    if (!solve_mod_coboundary(td, {}))
      fail(Errc::OutOfFamily, "form is not a coboundary twist of the split bundle over A0");
    NormalForm nf;
    nf.kind = NormalFormKind::Dec;
    nf.base = SurfaceTag::a0();
    nf.b = b;
    nf.d_class = dclass;
    return nf;
  }

  // trivial class: the only residue is xi at the z1^b coefficient
  std::vector<std::pair<int, FunctionFieldElement>> candidates{{0, td.xi}};
  auto alphas = solve_mod_coboundary(td, candidates);
  if (!alphas) fail(Errc::OutOfFamily, "form is outside the residue family over A0");
  NormalForm nf;
  nf.b = b;
  nf.base = SurfaceTag::a0();
  if ((*alphas)[0].is_zero()) {
    nf.kind = NormalFormKind::Dec;
    nf.d_class = cls_.zero();
  } else {
    nf.kind = NormalFormKind::IndecA0;
  }
  return nf;
}

NormalForm BundleOps::normalize_sl_base(const TransitionData& td) const {
  auto [tag, b, dclass] = extract_invariants(td);
  if (dclass.degree != 0) fail(Errc::OutOfFamily, "SL-base family needs deg(D) = 0");
  if (td.a_cocycle.is_zero()) fail(Errc::MalformedInput, "SL base needs its cocycle entry");
  const ClassElement& L = *td.base.sl_class;

  // candidate index: class(lambda) = n*L picks z0^(b-n) z1^n; smallest n wins
  std::optional<int> n_match;
  for (int n = 0; n <= b; ++n)
    if (cls_.is_trivial(cls_.sub(dclass, cls_.scale(n, L)))) {
      n_match = n;
      break;
    }

  std::vector<std::pair<int, FunctionFieldElement>> candidates;
  if (n_match) {
    // xi has poles at the a-cocycle pole points: one per chart side
    Divisor da = tracked_divisor(td.a_cocycle, td.a_divisor);
    CurvePoint PL = CurvePoint::infinity();
    for (auto& z : td.cover.u_removed)
      if (da.mult(z) < 0) PL = z;
    CurvePoint T = CurvePoint::infinity();
    for (auto& z : td.cover.v_removed)
      if (da.mult(z) < 0) T = z;
    if (PL.is_infinity() || T.is_infinity())
      fail(Errc::OutOfFamily, "canonical SL charts not recognized");
    Divisor xip;
    xip.add(PL, 1);
    xip.add(T, 1);
    FunctionFieldElement xi = rr_.function_with_poles(xip);
    candidates.emplace_back(b - *n_match, td.lambda * xi);
  }
  auto alphas = solve_mod_coboundary(td, candidates);
  if (!alphas) fail(Errc::OutOfFamily, "form is outside the residue family over the SL base");
  NormalForm nf;
  nf.b = b;
  nf.base = td.base;
  if (!candidates.empty() && !(*alphas)[0].is_zero()) {
    nf.kind = NormalFormKind::ASbnD;
    nf.d_class = L;
    nf.n = *n_match;
    return nf;
  }
  nf.kind = NormalFormKind::Dec;
  nf.d_class = dclass;
  return nf;
}

NormalForm BundleOps::normalize_fp0(const TransitionData& td) const {
  auto [s1, s2] = fiber_product_decompose(td);
  NormalForm nf;
  nf.b = 0;
  nf.base = td.base;
  switch (s2.kind) {
    case SurfaceKind::TrivialCP1:
      nf.kind = NormalFormKind::Dec;
      nf.d_class = cls_.zero();
      return nf;
    case SurfaceKind::SL:
      nf.kind = NormalFormKind::Dec;
      nf.d_class = *s2.sl_class;
      return nf;
    case SurfaceKind::A0:
      nf.kind = NormalFormKind::IndecA0;
      return nf;
    default:
      fail(Errc::OutOfFamily, "unexpected fiber factor");
  }
}

bool BundleOps::is_decomposable(const TransitionData& td) const {
  return normalize(td).kind == NormalFormKind::Dec;
}

bool BundleOps::normal_forms_equal(const NormalForm& a, const NormalForm& b) const {
  if (a.kind != b.kind || a.b != b.b) return false;
  switch (a.kind) {
    case NormalFormKind::Dec:
      if (a.base.kind != b.base.kind) return false;
      if (a.base.kind == SurfaceKind::SL &&
          !cls_.is_trivial(cls_.sub(*a.base.sl_class, *b.base.sl_class)))
        return false;
      return cls_.sub(a.d_class, b.d_class).degree == 0 && cls_.is_trivial(cls_.sub(a.d_class, b.d_class));
    case NormalFormKind::IndecCP1:
      return a.g == b.g; // both scaled to leading coefficient 1
    case NormalFormKind::IndecA0:
      return true;
    case NormalFormKind::ASbnD:
      return a.n == b.n && cls_.is_trivial(cls_.sub(a.d_class, b.d_class));
  }
  return false;
}

bool BundleOps::s_isomorphic(const TransitionData& a, const TransitionData& b) const {
  if (a.base.kind != b.base.kind) return false;
  if (a.b != b.b) return false;
  NormalForm na = normalize(a);
  NormalForm nb = normalize(b);
  // class comparisons are chart-free; projective-form comparisons are
  // relative to the chart choice, so demand the same cover there
  bool form_based = na.kind == NormalFormKind::IndecCP1 || nb.kind == NormalFormKind::IndecCP1;
  if (form_based) {
    auto sorted = [](std::vector<CurvePoint> v) {
      std::sort(v.begin(), v.end());
      return v;
    };
    if (sorted(a.cover.u_removed) != sorted(b.cover.u_removed) ||
        sorted(a.cover.v_removed) != sorted(b.cover.v_removed))
      fail(Errc::OutOfFamily, "form comparison requires matching chart sets");
  }
  return normal_forms_equal(na, nb);
}

std::pair<SurfaceTag, SurfaceTag> BundleOps::fiber_product_decompose(const TransitionData& td) const {
  if (td.b != 0) fail(Errc::MalformedInput, "fiber-product recognition needs b = 0");
  validate(td);
  const CurveSpec& curve = td.curve;
  Divisor dl = tracked_divisor(td.lambda, td.lambda_divisor);
  Divisor v_part;
  for (auto& [pt, m] : dl.points())
    if (td.cover.contains_v(pt)) v_part.add(pt, m);
  ClassElement dclass = cls_.class_of(v_part);
  if (dclass.degree != 0)
    fail(Errc::OutOfFamily, "the second ruled factor has nonzero degree and is outside the surface list");
  if (!cls_.is_trivial(dclass)) return {td.base, SurfaceTag::sl(dclass)};

  // trivial class: normalize lambda to a constant, then decide the
  // Ext^1(O, O) dichotomy by the residue against fwp(pu + pv)
  TransitionData work = td;
  if (!td.lambda.is_constant()) {
    Divisor u_part = dl - v_part;
    TrackedFunction hv = rr_.function_with_divisor(v_part);
    TrackedFunction hu = rr_.function_with_divisor(u_part.scaled(-1));
    Coboundary cb;
    cb.mu_u = hu.value();
    cb.mu_u_divisor = hu.divisor();
    cb.mu_v = FunctionFieldElement::one(curve) / hv.value();
    cb.mu_v_divisor = hv.divisor().scaled(-1);
    cb.q_u.assign(td.b + 1, FunctionFieldElement::zero(curve));
    cb.q_v.assign(td.b + 1, FunctionFieldElement::zero(curve));
    work = apply_coboundary(work, cb);
    if (!work.lambda.is_constant()) fail(Errc::OutOfFamily, "lambda did not normalize to a constant");
  }
  if (work.form.c[0].is_zero()) return {td.base, SurfaceTag::trivial()};

  CurvePoint pu = work.cover.u_removed.empty() ? CurvePoint::infinity() : work.cover.u_removed[0];
  CurvePoint pv = work.cover.v_removed.empty() ? CurvePoint::infinity() : work.cover.v_removed[0];
  if (work.cover.u_removed.empty() || work.cover.v_removed.empty())
    fail(Errc::OutOfFamily, "fiber recognition needs nonempty chart sets");
  Divisor xip;
  xip.add(pu, 1);
  xip.add(pv, 1);
  FunctionFieldElement xi = rr_.function_with_poles(xip);
  auto alphas = solve_mod_coboundary(work, {{0, xi}});
  if (!alphas) fail(Errc::OutOfFamily, "extension residue is outside the model space");
  if ((*alphas)[0].is_zero()) return {td.base, SurfaceTag::trivial()};
  return {td.base, SurfaceTag::a0()};
}

} // namespace atlas
