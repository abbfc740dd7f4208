// Command-line surface for the classification library: splitting
// certificates, bundle normalization, divisor-class queries, Riemann-Roch
// spaces, Sarkisov link tables, orbit enumeration and the verdict reports.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "atlas/io.hpp"

using namespace atlas;

namespace {

constexpr int kSchemaVersion = 1;

Json load_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) fail(Errc::MalformedInput, "cannot open " + path);
  Json j;
  try {
    in >> j;
  } catch (const std::exception& e) {
    fail(Errc::MalformedInput, std::string("invalid JSON: ") + e.what());
  }
  return j;
}

RunConfig load_config(const std::string& explicit_path) {
  std::string path = explicit_path;
  if (path.empty()) {
    if (const char* env = std::getenv("ATLAS_CONFIG")) path = env;
  }
  if (path.empty()) {
    std::ifstream probe("atlas.json");
    if (probe) path = "atlas.json";
  }
  if (path.empty()) return RunConfig{};
  return parse_config(load_json(path));
}

void emit(const Json& j) { std::cout << j.dump(2) << "\n"; }

int run_split(const RunConfig& cfg, const std::string& file) {
  Json in = load_json(file);
  LaurentMatrix A = parse_matrix(cfg.curve.p, in);
  SplittingCertificate cert = birkhoff_split(A);
  bool ok = verify_certificate(A, cert);
  Json out;
  out["schema_version"] = kSchemaVersion;
  out["certificate"] = certificate_json(cert);
  out["verified"] = ok;
  out["rules"] = Json::array({"birkhoff-reduction"});
  emit(out);
  return ok ? 0 : 1;
}

int run_normalize(const RunConfig& cfg, const std::string& file) {
  Curve E(cfg.curve);
  ClassGroup cls(cfg.class_group);
  BundleOps ops(E, cls);
  TransitionData td = parse_bundle(ops, load_json(file));
  NormalForm nf = ops.normalize(td);
  auto [tag, b, dclass] = ops.extract_invariants(td);
  Json out;
  out["schema_version"] = kSchemaVersion;
  out["normal_form"] = normal_form_json(nf);
  Json inv;
  inv["base"] = surface_tag_json(tag);
  inv["b"] = b;
  inv["D"] = class_element_json(dclass);
  out["invariants"] = inv;
  out["rules"] = Json::array({"two-chart-normalization"});
  emit(out);
  return 0;
}

int run_classify(const RunConfig& cfg, const std::string& file, int genus, const std::string& field) {
  ClassGroup cls(cfg.class_group);
  Classifier clf(cls);
  Descriptor d = parse_descriptor(cls, load_json(file));
  Verdict v = clf.classify(d, genus);
  StiffnessReport st = clf.stiffness(d, genus);
  BirMax bm = clf.bir_maximality(d, genus);
  AutDescriptor aut = clf.aut_descriptor(d);
  Json out;
  out["schema_version"] = kSchemaVersion;
  out["descriptor"] = descriptor_json(clf.engine().canonicalize(d));
  out["relatively_maximal"] = v.relatively_maximal;
  out["stiffness"] = stiffness_json(st);
  out["bir_maximality"] = bm == BirMax::Maximal ? "maximal" : bm == BirMax::NotMaximal ? "not-maximal" : "open";
  out["aut"] = aut_json(aut);
  out["reasons"] = v.reasons;
  out["witness_path"] = v.witness;
  out["rules"] = Json::array({v.rule, st.rule, clf.bir_rule(d, genus)});
  emit(out);
  if (field == "bir_maximality" && bm == BirMax::Open) return 4;
  return 0;
}

int run_links(const RunConfig& cfg, const std::string& file, bool witness) {
  ClassGroup cls(cfg.class_group);
  LinkEngine engine(cls);
  Descriptor d = parse_descriptor(cls, load_json(file));
  auto rows = engine.available_links(d, witness ? LinkMode::Witness : LinkMode::Orbit);
  Json out;
  out["schema_version"] = kSchemaVersion;
  out["descriptor"] = descriptor_json(engine.canonicalize(d));
  Json list = Json::array();
  for (auto& [choice, result] : rows) {
    Json row;
    row["choice"] = choice.name;
    row["type"] = result.link_type;
    row["conjugates_full_group"] = result.conjugates_full_group;
    row["rule"] = result.rule;
    if (result.boundary_p2) row["target"] = "P2-bundle";
    else row["target"] = descriptor_json(*result.target);
    list.push_back(row);
  }
  out["links"] = list;
  emit(out);
  return 0;
}

int run_orbit(const RunConfig& cfg, const std::string& file, int bound) {
  ClassGroup cls(cfg.class_group);
  LinkEngine engine(cls);
  Descriptor d = parse_descriptor(cls, load_json(file));
  OrbitGraph g = engine.enumerate_orbit(d, bound);
  // nodes sorted by canonical key
  std::vector<std::pair<std::string, const Descriptor*>> sorted;
  for (auto& node : g.nodes) sorted.push_back({engine.canonical_key(node), &node});
  std::sort(sorted.begin(), sorted.end(), [](auto& a, auto& b) { return a.first < b.first; });
  if (cfg.format == "dot") {
    std::cout << "digraph orbit {\n";
    for (auto& [key, node] : sorted) std::cout << "  \"" << key << "\" [label=\"" << node->str() << "\"];\n";
    for (auto& [from, choice, to] : g.edges)
      std::cout << "  \"" << from << "\" -> \"" << to << "\" [label=\"" << choice << "\"];\n";
    std::cout << "}\n";
    return 0;
  }
  Json out;
  out["schema_version"] = kSchemaVersion;
  Json nodes = Json::array();
  for (auto& [key, node] : sorted) {
    Json n = descriptor_json(*node);
    n["key"] = key;
    nodes.push_back(n);
  }
  out["nodes"] = nodes;
  Json edges = Json::array();
  for (auto& [from, choice, to] : g.edges) edges.push_back({{"from", from}, {"choice", choice}, {"to", to}});
  out["edges"] = edges;
  std::ostringstream dot;
  dot << "digraph orbit {\n";
  for (auto& [key, node] : sorted) dot << "  \"" << key << "\" [label=\"" << node->str() << "\"];\n";
  for (auto& [from, choice, to] : g.edges)
    dot << "  \"" << from << "\" -> \"" << to << "\" [label=\"" << choice << "\"];\n";
  dot << "}\n";
  out["dot"] = dot.str();
  emit(out);
  return 0;
}

int run_divisor(const RunConfig& cfg, const std::string& expr) {
  ClassGroup cls(cfg.class_group);
  Divisor d = parse_divisor_expr(expr);
  ClassElement c = cls.class_of(d);
  Json out;
  out["schema_version"] = kSchemaVersion;
  out["divisor"] = divisor_json(d);
  out["degree"] = d.degree();
  out["class"] = class_element_json(c);
  out["principal"] = cls.is_trivial(c);
  if (c.degree == 0) {
    int64_t n = cls.order_of(c);
    if (n == 0) out["order"] = "infinite";
    else out["order"] = n;
  }
  out["m2_pullback"] = class_element_json(cls.m2_pullback(c));
  out["nontrivial_2divisor"] = cls.is_nontrivial_2divisor(c);
  out["rules"] = Json::array({"group-law-reduction"});
  emit(out);
  return 0;
}

int run_rr(const RunConfig& cfg, const std::string& expr) {
  Curve E(cfg.curve);
  ClassGroup cls(cfg.class_group);
  RiemannRoch rr(E, cls);
  Divisor d = parse_divisor_expr(expr);
  RRBasis basis = rr.rr_basis(d);
  Json out;
  out["schema_version"] = kSchemaVersion;
  out["divisor"] = divisor_json(d);
  out["dimension"] = basis.basis.size();
  Json b = Json::array();
  for (auto& f : basis.basis) b.push_back(ffe_json(f));
  out["basis"] = b;
  out["rules"] = Json::array({"line-vertical-reduction"});
  emit(out);
  return 0;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"exact classification toolkit for P1-bundles over ruled surfaces above an elliptic curve"};
  app.require_subcommand(1);
  std::string config_path;
  app.add_option("--config", config_path, "configuration file (default: $ATLAS_CONFIG, then ./atlas.json)");

  std::string file, expr, field = "all";
  int genus = 1, bound = 3;
  bool witness = false;

  auto* split = app.add_subcommand("split", "Birkhoff factorization certificate for a Laurent matrix");
  split->add_option("matrix", file, "matrix JSON file")->required();

  auto* normalize = app.add_subcommand("normalize", "canonical form and invariants of a transition datum");
  normalize->add_option("bundle", file, "bundle JSON file")->required();

  auto* classify = app.add_subcommand("classify", "classification verdict for a descriptor");
  classify->add_option("descriptor", file, "descriptor JSON file")->required();
  classify->add_option("--genus", genus, "genus flag: 1 or 2 (2 means any genus >= 2)");
  classify->add_option("--field", field, "queried field: all | relatively_maximal | stiffness | bir_maximality | aut");

  auto* links = app.add_subcommand("links", "available Sarkisov links from a descriptor");
  links->add_option("descriptor", file, "descriptor JSON file")->required();
  links->add_flag("--witness", witness, "include non-conjugating witness moves");

  auto* orbit = app.add_subcommand("orbit", "bounded conjugation-orbit enumeration");
  orbit->add_option("descriptor", file, "descriptor JSON file")->required();
  orbit->add_option("--bound", bound, "maximal number of link applications")->required();

  auto* divisor = app.add_subcommand("divisor", "divisor-class report");
  divisor->add_option("expr", expr, "divisor expression, e.g. \"(1,2)+2*(3,4)-3*O\"")->required();

  auto* rr = app.add_subcommand("rr", "Riemann-Roch space of a divisor");
  rr->add_option("expr", expr, "divisor expression")->required();

  CLI11_PARSE(app, argc, argv);

  try {
    RunConfig cfg = load_config(config_path);
    if (split->parsed()) return run_split(cfg, file);
    if (normalize->parsed()) return run_normalize(cfg, file);
    if (classify->parsed()) return run_classify(cfg, file, genus, field);
    if (links->parsed()) return run_links(cfg, file, witness);
    if (orbit->parsed()) return run_orbit(cfg, file, bound);
    if (divisor->parsed()) return run_divisor(cfg, expr);
    if (rr->parsed()) return run_rr(cfg, expr);
  } catch (const Error& e) {
    std::cerr << errc_name(e.code()) << ": " << e.what() << "\n";
    switch (e.code()) {
      case Errc::OutOfUniverse:
      case Errc::OutOfFamily:
      case Errc::SideConditionViolated:
        return 3;
      case Errc::MalformedInput:
        return 2;
      default:
        return 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
