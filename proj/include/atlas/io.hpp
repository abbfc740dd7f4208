#pragma once

#include <json.hpp>

#include "atlas/classify.hpp"
#include "atlas/splitting.hpp"

namespace atlas {

using Json = nlohmann::ordered_json;

struct RunConfig {
  CurveSpec curve{101, 1, 3};
  ClassGroupConfig class_group;
  uint64_t seed = 0xC0FFEE;
  std::string format = "json"; // json | text | dot

  RunConfig() {
    class_group.backend = Backend::Concrete;
    class_group.curve = curve;
  }
};

RunConfig parse_config(const Json& j);
Json config_json(const RunConfig& cfg);

// class group / divisors
ClassElement parse_class_element(const ClassGroup& cls, const Json& j);
Json class_element_json(const ClassElement& c);
Divisor parse_divisor(const Json& j);
Json divisor_json(const Divisor& d);
/// CLI divisor expressions: "(x,y) + 2*(x,y) - 3*O"
Divisor parse_divisor_expr(const std::string& text);

// function field
FunctionFieldElement parse_ffe(const CurveSpec& curve, const Json& j);
Json ffe_json(const FunctionFieldElement& f);

// Laurent matrices
LaurentMatrix parse_matrix(int64_t p, const Json& j);
Json matrix_json(const LaurentMatrix& m);
Json certificate_json(const SplittingCertificate& cert);

// bundles
SurfaceTag parse_surface_tag(const ClassGroup& cls, const Json& j);
Json surface_tag_json(const SurfaceTag& t);
TransitionData parse_bundle(const BundleOps& ops, const Json& j);
Json bundle_json(const TransitionData& td);
Json normal_form_json(const NormalForm& nf);

// descriptors
Descriptor parse_descriptor(const ClassGroup& cls, const Json& j);
Json descriptor_json(const Descriptor& d);

// reports
Json verdict_json(const Verdict& v);
Json stiffness_json(const StiffnessReport& r);
Json aut_json(const AutDescriptor& a);

} // namespace atlas
