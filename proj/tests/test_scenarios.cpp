#include <cstdlib>
#include <set>
#include <sstream>

#include "doctest.h"
#include "json.hpp"

#include "clonometry/scenarios.hpp"

using namespace clonometry;
using namespace clonometry::scenarios;

namespace {

int count_char(const std::string& text, char c) {
  return static_cast<int>(std::count(text.begin(), text.end(), c));
}

struct ScaleGuard {
  ~ScaleGuard() { unsetenv("CLONOMETRY_TOLERANCE_SCALE"); }
};

}  // namespace

TEST_CASE("kind names round-trip") {
  const Kind kinds[] = {Kind::qubit_povm,    Kind::spin_uncertainty,
                        Kind::spin_coherent_benchmark, Kind::cv_joint,
                        Kind::cv_sigma_scan, Kind::werner_scan,
                        Kind::route_crosscheck};
  std::set<std::string> names;
  for (Kind k : kinds) {
    const std::string name = kind_name(k);
    CHECK(names.insert(name).second);
    REQUIRE(kind_from_name(name).has_value());
    CHECK(*kind_from_name(name) == k);
  }
  CHECK(!kind_from_name("qubit").has_value());
  CHECK(!kind_from_name("").has_value());
}

TEST_CASE("config parsing fills defaults and reads every knob") {
  const std::string text = R"({
    "scenarios": [
      {"kind": "qubit-povm"},
      {"kind": "spin-coherent-benchmark", "name": "bench", "j_values": [0.5, 2.0],
       "theta": 0.4, "phi": 1.2, "n_theta": 32, "n_phi": 64},
      {"kind": "cv-joint", "name": "joint", "nmax": 24, "sigma": 0.9,
       "grid": {"half_width": 7.0, "h": 0.1},
       "input": {"type": "coherent", "alpha_re": 0.3, "alpha_im": -0.2}},
      {"kind": "werner-scan", "name": "wide", "lambda_values": [0.85],
       "input": {"type": "fock", "n": 2}}
    ]
  })";
  const auto list = parse_config(text);
  REQUIRE(list.size() == 4);

  CHECK(list[0].kind == Kind::qubit_povm);
  CHECK(list[0].name == "qubit-povm");

  CHECK(list[1].j_values == std::vector<double>{0.5, 2.0});
  CHECK(list[1].n_theta == 32);
  CHECK(list[1].theta == doctest::Approx(0.4));

  CHECK(list[2].nmax == 24);
  CHECK(list[2].sigma == doctest::Approx(0.9));
  CHECK(list[2].grid.half_width == doctest::Approx(7.0));
  CHECK(list[2].grid.h == doctest::Approx(0.1));
  CHECK(list[2].input.type == "coherent");
  CHECK(list[2].input.alpha == Cx(0.3, -0.2));

  CHECK(list[3].nmax == 40);
  CHECK(list[3].grid.half_width == doctest::Approx(14.0));  // scan default
  CHECK(list[3].input.type == "fock");
  CHECK(list[3].input.n == 2);
}

TEST_CASE("malformed text raises a parse error") {
  CHECK_THROWS_AS(parse_config("{\"scenarios\": ["), ParseError);
  CHECK_THROWS_AS(parse_config(""), ParseError);
  CHECK_THROWS_AS(parse_config("kind: qubit-povm"), ParseError);
}

TEST_CASE("validation rejects bad documents") {
  auto one = [](const std::string& body) {
    return parse_config("{\"scenarios\": [" + body + "]}");
  };
  // structural problems
  CHECK_THROWS_AS(parse_config("{\"scenarios\": []}"), ValidationError);
  CHECK_THROWS_AS(parse_config("{\"runs\": []}"), ValidationError);
  CHECK_THROWS_AS(parse_config("[1, 2]"), ValidationError);
  CHECK_THROWS_AS(one("{\"name\": \"x\"}"), ValidationError);
  CHECK_THROWS_AS(one("{\"kind\": \"no-such-kind\"}"), ValidationError);
  // unknown keys anywhere
  CHECK_THROWS_AS(one("{\"kind\": \"qubit-povm\", \"seed\": 1}"), ValidationError);
  CHECK_THROWS_AS(one("{\"kind\": \"qubit-povm\", \"sigma\": 1.0}"), ValidationError);
  CHECK_THROWS_AS(
      one("{\"kind\": \"cv-joint\", \"grid\": {\"half_width\": 5, \"dx\": 0.1}}"),
      ValidationError);
  CHECK_THROWS_AS(
      one("{\"kind\": \"cv-joint\", \"input\": {\"type\": \"vacuum\", \"n\": 1}}"),
      ValidationError);
  // out-of-range values
  CHECK_THROWS_AS(one("{\"kind\": \"cv-joint\", \"nmax\": 4}"), ValidationError);
  CHECK_THROWS_AS(one("{\"kind\": \"cv-joint\", \"nmax\": 200}"), ValidationError);
  CHECK_THROWS_AS(one("{\"kind\": \"cv-joint\", \"sigma\": 0.1}"), ValidationError);
  CHECK_THROWS_AS(one("{\"kind\": \"werner-scan\", \"lambda_values\": [0.5]}"),
                  ValidationError);
  CHECK_THROWS_AS(one("{\"kind\": \"werner-scan\", \"lambda_values\": [0.999]}"),
                  ValidationError);
  CHECK_THROWS_AS(one("{\"kind\": \"werner-scan\", \"lambda_values\": []}"),
                  ValidationError);
  CHECK_THROWS_AS(one("{\"kind\": \"spin-coherent-benchmark\", \"j_values\": [0.7]}"),
                  ValidationError);
  CHECK_THROWS_AS(one("{\"kind\": \"spin-coherent-benchmark\", \"j_values\": [9.0]}"),
                  ValidationError);
  CHECK_THROWS_AS(
      one("{\"kind\": \"cv-joint\", \"grid\": {\"half_width\": 5, \"h\": 0.9}}"),
      ValidationError);
  CHECK_THROWS_AS(
      one("{\"kind\": \"cv-joint\", \"input\": {\"type\": \"squeezed\"}}"),
      ValidationError);
  CHECK_THROWS_AS(one("{\"kind\": \"cv-joint\", \"input\": "
                      "{\"type\": \"coherent\", \"alpha_re\": 9.0}}"),
                  ValidationError);
  CHECK_THROWS_AS(one("{\"kind\": \"cv-joint\", \"input\": {\"type\": \"fock\", \"n\": 30}}"),
                  ValidationError);
  CHECK_THROWS_AS(one("{\"kind\": \"qubit-povm\", \"name\": \"bad name\"}"),
                  ValidationError);
  // duplicate names
  CHECK_THROWS_AS(parse_config("{\"scenarios\": [{\"kind\": \"qubit-povm\"}, "
                               "{\"kind\": \"qubit-povm\"}]}"),
                  ValidationError);
  // wrong types
  CHECK_THROWS_AS(one("{\"kind\": \"cv-joint\", \"nmax\": \"forty\"}"), ValidationError);
  CHECK_THROWS_AS(one("{\"kind\": \"cv-joint\", \"nmax\": 12.5}"), ValidationError);
  CHECK_THROWS_AS(one("{\"kind\": \"werner-scan\", \"lambda_values\": [\"x\"]}"),
                  ValidationError);
}

TEST_CASE("run_scenario validates its argument") {
  CloneScenario s;
  s.kind = Kind::cv_joint;
  s.name = "bad";
  s.nmax = 4;
  CHECK_THROWS_AS(run_scenario(s), ValidationError);
  s.nmax = 20;
  s.sigma = 10.0;
  CHECK_THROWS_AS(run_scenario(s), ValidationError);
}

TEST_CASE("qubit scenarios produce passing rows") {
  CloneScenario povm;
  povm.kind = Kind::qubit_povm;
  povm.name = "povm";
  const ScenarioResult r = run_scenario(povm);
  REQUIRE(r.rows.size() == 9);
  CHECK(r.failures() == 0);
  CHECK(r.warnings.empty());
  for (const ResultRow& row : r.rows) {
    CHECK(row.pass());
    CHECK(row.deviation() == std::abs(row.value - row.target));
    CHECK(!row.formula.empty());
  }

  CloneScenario spin;
  spin.kind = Kind::spin_uncertainty;
  spin.name = "spin";
  spin.theta = 0.9;
  spin.phi = 2.0;
  const ScenarioResult u = run_scenario(spin);
  REQUIRE(u.rows.size() == 4);
  CHECK(u.failures() == 0);
  CHECK(u.rows[0].value == doctest::Approx(109.0 / 50.0).epsilon(1e-12));
  CHECK(u.rows[1].value == doctest::Approx(2.0).epsilon(1e-12));

  CloneScenario bench;
  bench.kind = Kind::spin_coherent_benchmark;
  bench.name = "bench";
  bench.j_values = {0.5, 1.0};
  bench.theta = 0.3;
  bench.phi = 0.8;
  const ScenarioResult b = run_scenario(bench);
  REQUIRE(b.rows.size() == 6);
  CHECK(b.failures() == 0);
  CHECK(b.rows[0].param == "j=0.5");
  CHECK(b.rows[3].param == "j=1");
}

TEST_CASE("csv output is a fixed-width deterministic table") {
  CloneScenario povm;
  povm.kind = Kind::qubit_povm;
  povm.name = "povm";
  const ScenarioResult r = run_scenario(povm);
  const std::string csv = to_csv(r);
  const std::string again = to_csv(run_scenario(povm));
  CHECK(csv == again);
  CHECK(csv.back() == '\n');

  std::istringstream lines(csv);
  std::string line;
  REQUIRE(std::getline(lines, line));
  CHECK(line == "kind,name,row,param,quantity,value,target,deviation,tolerance,pass,formula");
  int rows = 0;
  while (std::getline(lines, line)) {
    CHECK(count_char(line, ',') == 10);
    CHECK(line.find("povm") != std::string::npos);
    ++rows;
  }
  CHECK(rows == 9);
}

TEST_CASE("json sidecar parses and echoes the parameters") {
  CloneScenario spin;
  spin.kind = Kind::spin_uncertainty;
  spin.name = "spin";
  spin.theta = 0.25;
  const ScenarioResult r = run_scenario(spin);
  const auto j = nlohmann::json::parse(to_json_sidecar(r));
  CHECK(j["name"] == "spin");
  CHECK(j["kind"] == "spin-uncertainty");
  CHECK(j["version"] == version_string);
  CHECK(j["rows"] == 4);
  CHECK(j["failures"] == 0);
  CHECK(j["tolerance_scale"] == 1.0);
  CHECK(j["parameters"]["theta"] == 0.25);
  CHECK(!j.contains("truncation"));

  CloneScenario routes;
  routes.kind = Kind::route_crosscheck;
  routes.name = "routes";
  routes.nmax = 20;
  ScenarioResult fake;
  fake.scenario = routes;  // sidecar needs no rows
  const auto k = nlohmann::json::parse(to_json_sidecar(fake));
  CHECK(k["truncation"]["nmax"] == 20);
}

TEST_CASE("tolerance scale comes from the environment") {
  ScaleGuard guard;
  unsetenv("CLONOMETRY_TOLERANCE_SCALE");
  CHECK(tolerance_scale() == 1.0);
  setenv("CLONOMETRY_TOLERANCE_SCALE", "2.5", 1);
  CHECK(tolerance_scale() == 2.5);

  CloneScenario povm;
  povm.kind = Kind::qubit_povm;
  povm.name = "povm";
  const double scaled = run_scenario(povm).rows[0].tolerance;
  setenv("CLONOMETRY_TOLERANCE_SCALE", "1.0", 1);
  CHECK(scaled == doctest::Approx(2.5 * run_scenario(povm).rows[0].tolerance));

  for (const char* bad : {"0", "-1", "banana", "1x", "nan", "inf", ""}) {
    setenv("CLONOMETRY_TOLERANCE_SCALE", bad, 1);
    if (*bad == '\0')
      CHECK(tolerance_scale() == 1.0);  // empty behaves as unset
    else
      CHECK_THROWS_AS(tolerance_scale(), ValidationError);
  }
}

TEST_CASE("bundled catalog covers every kind") {
  const auto bundle = bundled_scenarios();
  REQUIRE(bundle.size() >= 7);
  std::set<Kind> kinds;
  std::set<std::string> names;
  for (const CloneScenario& s : bundle) {
    kinds.insert(s.kind);
    CHECK(names.insert(s.name).second);
    CHECK(!s.description.empty());
    std::string extra;
    if (s.kind == Kind::spin_coherent_benchmark) extra = ", \"j_values\": [0.5]";
    if (s.kind == Kind::cv_sigma_scan) extra = ", \"sigma_values\": [1.0]";
    if (s.kind == Kind::werner_scan) extra = ", \"lambda_values\": [0.9]";
    CHECK_NOTHROW(parse_config("{\"scenarios\": [{\"kind\": \"" + kind_name(s.kind) +
                               "\"" + extra + "}]}"));
  }
  CHECK(kinds.size() == 7);

  const std::string catalog = catalog_text();
  for (const CloneScenario& s : bundle) {
    CHECK(catalog.find(s.name) != std::string::npos);
    CHECK(catalog.find(s.description) != std::string::npos);
  }
  CHECK(count_char(catalog, '\n') == static_cast<int>(bundle.size()));
  // every entry names the relation it checks
  std::istringstream lines(catalog);
  std::string line;
  while (std::getline(lines, line)) CHECK(line.find("targets:") != std::string::npos);
}

TEST_CASE("schema text is machine readable") {
  const auto schema = nlohmann::json::parse(schema_text());
  REQUIRE(schema.contains("kinds"));
  CHECK(schema["kinds"].size() == 7);
  for (const auto& item : schema["kinds"].items())
    CHECK(kind_from_name(item.key()).has_value());
  CHECK(schema.contains("exit_codes"));
  CHECK(schema.contains("environment"));
}
