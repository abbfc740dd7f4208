#pragma once

#include <optional>

#include "atlas/bundle.hpp"

namespace atlas {

enum class Family { FiberProduct, Dec, IndecCP1, XA0b0, ASbnD };

const char* family_name(Family f);

/// Symbolic bundle descriptor over a ruled surface above the elliptic curve.
/// FiberProduct(s1, s2, projection): X = s1 x_C s2 with the structure map
/// onto the chosen factor. Dec(base, b, d): P(O + O(b*sigma + tau*d)).
struct Descriptor {
  Family family = Family::Dec;
  SurfaceTag s1, s2;
  int projection = 1;
  SurfaceTag base;
  int b = 0;
  ClassElement d;      // Dec invariant class; ASbnD: the SL base class
  std::vector<Fp> g;   // IndecCP1 projective binary form
  int n = 0;           // ASbnD

  static Descriptor fiber_product(SurfaceTag a, SurfaceTag b, int projection);
  static Descriptor dec(SurfaceTag base, int b, ClassElement d);
  static Descriptor indec_cp1(int b, std::vector<Fp> g);
  static Descriptor xa0b0(int b);
  static Descriptor asbnd(ClassElement sl_class, int b, int n);

  const SurfaceTag& projected_base() const { return projection == 1 ? s1 : s2; }
  const SurfaceTag& other_factor() const { return projection == 1 ? s2 : s1; }
  std::string str() const;
};

struct LinkChoice {
  std::string name; // l00 / l01 / l10 / l11 / orbit-s0 / orbit-s1 / swap / contract / chain moves
  bool operator==(const LinkChoice& o) const { return name == o.name; }
};

struct LinkResult {
  std::optional<Descriptor> target; // empty for the P2-bundle boundary
  bool boundary_p2 = false;
  bool conjugates_full_group = true;
  int link_type = 2; // II, III, IV
  std::string rule;
};

enum class LinkMode { Orbit, Witness };

struct OrbitGraph {
  std::vector<Descriptor> nodes; // sorted by canonical key
  std::vector<std::tuple<std::string, std::string, std::string>> edges; // from-key, choice, to-key
};

struct ConjugacyAnswer {
  enum class Kind { Yes, No, Unknown } kind = Kind::Unknown;
  std::vector<std::string> path; // link choice names for Yes
  std::string reason;
};

class LinkEngine {
public:
  explicit LinkEngine(const ClassGroup& cls) : cls_(cls) {}

  const ClassGroup& classes() const { return cls_; }

  /// F_b = F_{-b} normalization, b = 0 fiber-product conversion, AS b = 0
  /// conversion; returns the stored canonical form
  Descriptor canonicalize(const Descriptor& d) const;
  /// deduplication key: fiber-product SL factors keyed up to sign
  std::string canonical_key(const Descriptor& d) const;

  std::vector<std::pair<LinkChoice, LinkResult>> available_links(const Descriptor& d,
                                                                 LinkMode mode = LinkMode::Orbit) const;
  LinkResult apply_link(const Descriptor& d, const LinkChoice& c, LinkMode mode = LinkMode::Orbit) const;

  /// BFS over conjugation-flagged type II links up to `bound` applications
  OrbitGraph enumerate_orbit(const Descriptor& d, int bound) const;

  ConjugacyAnswer is_conjugate(const Descriptor& a, const Descriptor& b, int bound) const;

private:
  std::string class_key(const ClassElement& c) const;
  std::string tag_key(const SurfaceTag& t, bool fold_sign) const;
  void require_valid(const Descriptor& d) const;
  bool is_two_torsion(const ClassElement& c) const;
  bool infinite_order(const ClassElement& c) const;
  const ClassGroup& cls_;
};

} // namespace atlas
