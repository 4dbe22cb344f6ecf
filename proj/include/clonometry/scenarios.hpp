#pragma once

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "clonometry/hilbert.hpp"

namespace clonometry::scenarios {

inline constexpr const char* version_string = "1.0.0";

enum class Kind {
  qubit_povm,
  spin_uncertainty,
  spin_coherent_benchmark,
  cv_joint,
  cv_sigma_scan,
  werner_scan,
  route_crosscheck,
};

std::string kind_name(Kind kind);
std::optional<Kind> kind_from_name(const std::string& name);

// Input-state descriptor for the mode scenarios.
struct InputState {
  std::string type = "vacuum";  // vacuum | coherent | fock
  Cx alpha = 0.0;               // coherent amplitude
  int n = 0;                    // occupied level
};

struct GridParams {
  double half_width = 9.5;
  double h = 0.05;
};

// One declarative experiment. Unused knobs keep their defaults; which knobs a
// kind accepts is fixed by the config schema and enforced during validation.
struct CloneScenario {
  Kind kind = Kind::qubit_povm;
  std::string name;
  std::string description;

  int nmax = 40;
  double sigma = 1.0;
  std::vector<double> sigma_values;
  std::vector<double> lambda_values;
  std::vector<double> j_values;
  double theta = 0.0;
  double phi = 0.0;
  int n_theta = 64;
  int n_phi = 128;
  GridParams grid;
  InputState input;
};

struct ResultRow {
  std::string quantity;
  std::string param;  // e.g. "lambda=0.9"; empty when the row has no knob
  double value = 0.0;
  double target = 0.0;
  double tolerance = 0.0;  // absolute, already multiplied by the global scale
  std::string formula;     // closed form the target column comes from

  double deviation() const;  // |value - target|, recomputed on use
  bool pass() const;
};

struct ScenarioResult {
  CloneScenario scenario;
  std::vector<ResultRow> rows;
  std::vector<std::string> warnings;

  int failures() const;
};

struct ParseError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ValidationError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// CLONOMETRY_TOLERANCE_SCALE, default 1; rejects non-positive or unreadable
// values with a ValidationError.
double tolerance_scale();

ScenarioResult run_scenario(const CloneScenario& scenario);

// Canonical instances, one per kind, runnable as "builtin:<name>".
std::vector<CloneScenario> bundled_scenarios();
std::string catalog_text();  // one entry per bundled scenario with its formulas
std::string schema_text();   // the config document schema

// Parses and validates a whole config document ({"scenarios": [...]}).
// Malformed text throws ParseError; well-formed text with bad content
// (unknown keys, out-of-range values, duplicate names) throws ValidationError.
std::vector<CloneScenario> parse_config(const std::string& text);

// Long-format table: kind,name,row,param,quantity,value,target,deviation,
// tolerance,pass,formula with %.12g numbers; deviation recomputed here.
std::string to_csv(const ScenarioResult& result);
// Metadata sidecar: parameters, truncation, tolerance scale, version.
std::string to_json_sidecar(const ScenarioResult& result);

}  // namespace clonometry::scenarios
