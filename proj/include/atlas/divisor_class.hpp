#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "atlas/curve.hpp"

namespace atlas {

/// Formal Z-linear combination of rational points (plus named abstract
/// generators when the abstract class-group backend is active).
class Divisor {
public:
  Divisor() = default;

  void add(const CurvePoint& P, int64_t mult);
  void add_abstract(const std::string& symbol, int64_t mult);
  int64_t mult(const CurvePoint& P) const;
  int64_t degree() const;
  bool is_zero() const { return points_.empty() && symbols_.empty(); }
  bool has_abstract() const { return !symbols_.empty(); }
  bool is_effective() const;

  const std::map<CurvePoint, int64_t>& points() const { return points_; }
  const std::map<std::string, int64_t>& symbols() const { return symbols_; }

  friend Divisor operator+(const Divisor& a, const Divisor& b);
  friend Divisor operator-(const Divisor& a, const Divisor& b);
  Divisor operator-() const;
  Divisor scaled(int64_t n) const;
  bool operator==(const Divisor& o) const { return points_ == o.points_ && symbols_ == o.symbols_; }

  static Divisor point(const CurvePoint& P, int64_t mult = 1) {
    Divisor d;
    d.add(P, mult);
    return d;
  }

  std::string str() const;

private:
  std::map<CurvePoint, int64_t> points_;
  std::map<std::string, int64_t> symbols_;
};

enum class Backend { Concrete, Abstract };

/// A divisor class: degree plus the degree-zero part. Concrete backend: cl0
/// is a curve point under Abel-Jacobi (class of P - O). Abstract backend:
/// cl0 lives in Z^r + sum Z/m_i with componentwise normal form.
struct ClassElement {
  Backend backend = Backend::Concrete;
  int64_t degree = 0;
  CurvePoint cl0;                 // concrete
  std::vector<int64_t> free;      // abstract free part
  std::vector<int64_t> torsion;   // abstract torsion part, reduced mod orders

  bool operator==(const ClassElement& o) const;
  bool operator!=(const ClassElement& o) const { return !(*this == o); }
  std::string str() const;
};

struct ClassGroupConfig {
  Backend backend = Backend::Concrete;
  CurveSpec curve;                 // concrete backend
  int rank = 1;                    // abstract backend
  std::vector<int64_t> torsion;    // abstract torsion orders m_i
  // distinguished degree-2 classes; defaults make both trivial (D0 ~ 2p0)
  std::optional<ClassElement> d0_class;
  std::optional<ClassElement> dsigma_class;
};

/// Class-group arithmetic for one configured backend. The constraint
/// 2*cl0(Dsigma) = 4*cl0(D0) is validated on construction.
class ClassGroup {
public:
  explicit ClassGroup(ClassGroupConfig config);

  const ClassGroupConfig& config() const { return config_; }
  Backend backend() const { return config_.backend; }
  const Curve& curve() const;

  ClassElement zero(int64_t degree = 0) const;
  ClassElement of_point(const CurvePoint& P) const;           // degree 1
  ClassElement abstract_free_generator(int index, int64_t degree = 0) const;
  ClassElement abstract_torsion_generator(int index, int64_t degree = 0) const;
  ClassElement with_degree(const ClassElement& c, int64_t degree) const;

  ClassElement class_of(const Divisor& D) const;
  ClassElement add(const ClassElement& a, const ClassElement& b) const;
  ClassElement sub(const ClassElement& a, const ClassElement& b) const;
  ClassElement neg(const ClassElement& a) const;
  ClassElement scale(int64_t n, const ClassElement& a) const;
  bool is_trivial(const ClassElement& a) const; // degree 0 and trivial cl0

  bool lin_equiv(const Divisor& D, const Divisor& E) const;
  bool is_principal(const Divisor& D) const;

  /// order of a degree-zero class; 0 encodes infinite order
  int64_t order_of(const ClassElement& c) const;

  /// pullback along multiplication by two: (4*degree, 2*cl0)
  ClassElement m2_pullback(const ClassElement& c) const;

  /// true iff m2*(D) - 2*deg(D)*D0 is a nontrivial degree-zero class
  bool is_nontrivial_2divisor(const ClassElement& c) const;
  bool is_nontrivial_2divisor(const Divisor& D) const { return is_nontrivial_2divisor(class_of(D)); }

  ClassElement d0() const;      // degree-2 distinguished class
  ClassElement dsigma() const;  // degree-2 distinguished class

  /// true iff D + n*E is nontrivial for every integer n (exact decision)
  bool nontrivial_for_all_shifts(const ClassElement& D, const ClassElement& E) const;

  /// true iff some coprime pair (u,v) has u*D + v*E trivial (exact decision)
  bool has_coprime_relation(const ClassElement& D, const ClassElement& E) const;

private:
  void check_distinguished() const;
  ClassElement canonical(ClassElement c) const;
  ClassGroupConfig config_;
  std::optional<Curve> curve_;
};

} // namespace atlas
