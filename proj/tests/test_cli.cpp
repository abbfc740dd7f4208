#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <string>

namespace {

struct RunResult {
  int exit_code;
  std::string out;
};

RunResult run(const std::string& args) {
  std::string cmd = std::string(ATLAS_CLI_PATH) + " " + args + " 2>/dev/null";
  FILE* pipe = popen(cmd.c_str(), "r");
  REQUIRE(pipe != nullptr);
  std::string out;
  char buf[4096];
  while (size_t n = fread(buf, 1, sizeof buf, pipe)) out.append(buf, n);
  int status = pclose(pipe);
  return {WEXITSTATUS(status), out};
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream f(path);
  f << content;
}

} // namespace

TEST_CASE("split subcommand verifies its certificate") {
  write_file("/tmp/atlas_identity.json", R"({
    "field": "fp",
    "entries": [[{"0": 1}, {}], [{}, {"0": 1}]]
  })");
  RunResult r = run("split /tmp/atlas_identity.json");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"m\": 0") != std::string::npos);
  CHECK(r.out.find("\"n\": 0") != std::string::npos);
  CHECK(r.out.find("\"verified\": true") != std::string::npos);

  write_file("/tmp/atlas_tri.json", R"({
    "field": "fp",
    "entries": [[{"1": 1}, {"0": 1}], [{}, {"0": 1}]]
  })");
  r = run("split /tmp/atlas_tri.json");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"m\": 1") != std::string::npos);

  // malformed input: exit 2
  write_file("/tmp/atlas_bad.json", "{nope");
  CHECK(run("split /tmp/atlas_bad.json").exit_code == 2);
}

TEST_CASE("classify subcommand and exit codes") {
  write_file("/tmp/atlas_cfg_abs.json", R"({
    "curve": {"p": 101, "a": 2, "b": 3},
    "class_group": {"backend": "abstract", "rank": 2, "torsion": [2]}
  })");
  write_file("/tmp/atlas_a0xa1_p2.json", R"({
    "family": "FiberProduct", "s1": "a0", "s2": "a1", "projection": 2
  })");
  RunResult r = run("--config /tmp/atlas_cfg_abs.json classify /tmp/atlas_a0xa1_p2.json");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"relatively_maximal\": false") != std::string::npos);

  // open bir-maximality when queried as the field: exit 4
  write_file("/tmp/atlas_b1.json", R"({
    "family": "Dec", "base": "cp1", "b": 1,
    "D": {"degree": 0, "free": [1, 0], "torsion": [0]}
  })");
  r = run("--config /tmp/atlas_cfg_abs.json classify /tmp/atlas_b1.json --field bir_maximality");
  CHECK(r.exit_code == 4);
  CHECK(r.out.find("\"bir_maximality\": \"open\"") != std::string::npos);

  // byte-identical reports across runs
  RunResult r2 = run("--config /tmp/atlas_cfg_abs.json classify /tmp/atlas_a0xa1_p2.json");
  CHECK(r.out.size() > 0);
  CHECK(run("--config /tmp/atlas_cfg_abs.json classify /tmp/atlas_a0xa1_p2.json").out == r2.out);
}

TEST_CASE("links and orbit subcommands") {
  write_file("/tmp/atlas_cfg_abs.json", R"({
    "curve": {"p": 101, "a": 2, "b": 3},
    "class_group": {"backend": "abstract", "rank": 2, "torsion": [2]}
  })");
  write_file("/tmp/atlas_as.json", R"({
    "family": "ASbnD", "L": {"degree": 0, "free": [1, 0], "torsion": [0]}, "b": 3, "n": 1
  })");
  RunResult r = run("--config /tmp/atlas_cfg_abs.json links /tmp/atlas_as.json");
  CHECK(r.exit_code == 0);
  for (const char* row : {"l00", "l01", "l10", "l11"}) CHECK(r.out.find(row) != std::string::npos);

  write_file("/tmp/atlas_sla1.json", R"({
    "family": "FiberProduct",
    "s1": {"kind": "sl", "class": {"degree": 0, "free": [1, 0], "torsion": [0]}},
    "s2": "a1", "projection": 2
  })");
  r = run("--config /tmp/atlas_cfg_abs.json orbit /tmp/atlas_sla1.json --bound 2");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"nodes\"") != std::string::npos);

  // dot output via a config with format=dot
  write_file("/tmp/atlas_cfg_dot.json", R"({
    "curve": {"p": 101, "a": 2, "b": 3},
    "class_group": {"backend": "abstract", "rank": 2, "torsion": [2]},
    "format": "dot"
  })");
  r = run("--config /tmp/atlas_cfg_dot.json orbit /tmp/atlas_sla1.json --bound 1");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("digraph orbit") != std::string::npos);

  // side conditions violated: exit 3
  write_file("/tmp/atlas_as_torsion.json", R"({
    "family": "ASbnD", "L": {"degree": 0, "free": [0, 0], "torsion": [1]}, "b": 2, "n": 1
  })");
  CHECK(run("--config /tmp/atlas_cfg_abs.json links /tmp/atlas_as_torsion.json").exit_code == 3);
}

TEST_CASE("divisor and rr subcommands over the default concrete config") {
  write_file("/tmp/atlas_cfg_conc.json", R"({
    "curve": {"p": 101, "a": 2, "b": 3},
    "class_group": {"backend": "concrete"}
  })");
  RunResult r = run("--config /tmp/atlas_cfg_conc.json rr \"(1,39)+(3,6)\"");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"dimension\": 2") != std::string::npos);

  r = run("--config /tmp/atlas_cfg_conc.json divisor \"(1,39)+(1,62)-2*O\"");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"principal\": true") != std::string::npos);
}

TEST_CASE("normalize subcommand") {
  write_file("/tmp/atlas_cfg_conc.json", R"({
    "curve": {"p": 101, "a": 2, "b": 3},
    "class_group": {"backend": "concrete"}
  })");
  // canonical two-chart datum of the indecomposable (b=2, g=[1,4,0]) bundle
  write_file("/tmp/atlas_bundle.json", R"json({
    "base": "cp1", "b": 2,
    "cover": {"U_removed": ["(1,39)"], "V_removed": ["O"]},
    "lambda": {"u": "1", "v": "0"},
    "form": [
      {"u": "11+28*x/100+x", "v": "1/100+x"},
      {"u": "44+11*x/100+x", "v": "4/100+x"},
      {"u": "0", "v": "0"}
    ]
  })json");
  RunResult r = run("--config /tmp/atlas_cfg_conc.json normalize /tmp/atlas_bundle.json");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"kind\": \"IndecCP1\"") != std::string::npos);
  CHECK(r.out.find("\"g\"") != std::string::npos);

  // cover sets outside the implemented family: exit 3, no crash
  write_file("/tmp/atlas_bundle_bad.json", R"json({
    "base": "cp1", "b": 1,
    "cover": {"U_removed": ["(1,39)", "(1,62)"], "V_removed": ["(3,6)", "(3,95)"]},
    "lambda": {"u": "3+98*x/1+100*x", "v": "0"},
    "form": [{"u": "0", "v": "0"}, {"u": "0", "v": "0"}]
  })json");
  CHECK(run("--config /tmp/atlas_cfg_conc.json normalize /tmp/atlas_bundle_bad.json").exit_code == 3);
}

TEST_CASE("classify over the concrete backend") {
  write_file("/tmp/atlas_cfg_conc2.json", R"({
    "curve": {"p": 101, "a": 2, "b": 3},
    "class_group": {"backend": "concrete"}
  })");
  write_file("/tmp/atlas_dec_conc.json", R"json({
    "family": "Dec", "base": "cp1", "b": 2, "D": {"degree": 0, "cl0": "(1,39)"}
  })json");
  RunResult r = run("--config /tmp/atlas_cfg_conc2.json classify /tmp/atlas_dec_conc.json");
  CHECK(r.exit_code == 0);
  CHECK(r.out.find("\"relatively_maximal\": true") != std::string::npos);
  CHECK(r.out.find("\"status\": \"superstiff\"") != std::string::npos);

  // degree != 0 divisor report omits the order field
  RunResult d = run("--config /tmp/atlas_cfg_conc2.json divisor \"(1,39)+O\"");
  CHECK(d.exit_code == 0);
  CHECK(d.out.find("\"order\"") == std::string::npos);
  CHECK(d.out.find("\"degree\": 2") != std::string::npos);
}
