#pragma once

#include "atlas/links.hpp"

namespace atlas {

struct Verdict {
  bool relatively_maximal = false;
  std::string rule;                  // rule identifier with side-condition values
  std::vector<std::string> reasons;
  std::vector<std::string> witness;  // link path for negative verdicts when one exists
};

enum class Stiffness { Superstiff, NotStiff, NotApplicable };

struct StiffnessReport {
  Stiffness status = Stiffness::NotApplicable;
  std::string rule;
  std::string family;                 // parametrized family description for NotStiff
  std::vector<Descriptor> members;    // two distinct members witnessing non-stiffness
};

enum class BirMax { Maximal, NotMaximal, Open };

struct AutDescriptor {
  std::optional<int> dimension;
  std::string kernel;  // Ga | Gm | (Z/2)^2 | trivial | PGL2 | product | not-computed
  std::string image;   // full | AutC-times-proper-subgroup | trivial | not-computed
  std::string sequence;
};

/// Aut-degree data of the base surfaces themselves.
AutDescriptor aut_surface(const SurfaceTag& tag);

class Classifier {
public:
  explicit Classifier(const ClassGroup& cls) : cls_(cls), engine_(cls) {}

  const LinkEngine& engine() const { return engine_; }

  Verdict classify(const Descriptor& d, int genus = 1) const;
  StiffnessReport stiffness(const Descriptor& d, int genus = 1) const;
  BirMax bir_maximality(const Descriptor& d, int genus = 1) const;
  std::string bir_rule(const Descriptor& d, int genus = 1) const;
  AutDescriptor aut_descriptor(const Descriptor& d) const;

private:
  Verdict classify_genus1(const Descriptor& d) const;
  bool two_torsion(const ClassElement& c) const { return cls_.is_trivial(cls_.scale(2, c)); }
  bool infinite_order(const ClassElement& c) const {
    return !cls_.is_trivial(c) && cls_.order_of(c) == 0;
  }
  std::vector<std::string> witness_path(const Descriptor& d, int steps) const;

  const ClassGroup& cls_;
  LinkEngine engine_;
};

} // namespace atlas
