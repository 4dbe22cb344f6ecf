#include "clonometry/scenarios.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <set>
#include <utility>

#include "json.hpp"

#include "clonometry/fock_cv.hpp"
#include "clonometry/qubit_cloning.hpp"
#include "clonometry/spin_coherent.hpp"
#include "clonometry/werner.hpp"

namespace clonometry::scenarios {

namespace {

using nlohmann::json;
using ojson = nlohmann::ordered_json;

constexpr std::pair<Kind, const char*> kind_table[] = {
    {Kind::qubit_povm, "qubit-povm"},
    {Kind::spin_uncertainty, "spin-uncertainty"},
    {Kind::spin_coherent_benchmark, "spin-coherent-benchmark"},
    {Kind::cv_joint, "cv-joint"},
    {Kind::cv_sigma_scan, "cv-sigma-scan"},
    {Kind::werner_scan, "werner-scan"},
    {Kind::route_crosscheck, "route-crosscheck"},
};

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

std::string label(const char* key, double v) {
  return std::string(key) + "=" + num(v);
}

Ket mode_input(const cv::FockSpace& space, const InputState& in) {
  if (in.type == "coherent") return cv::coherent_ket(space, in.alpha);
  Vec v = Vec::Zero(space.dim());
  v(in.type == "fock" ? in.n : 0) = 1.0;
  return Ket{space.single(), v};
}

// max |a - b| over the paired-index block with both mode levels below `keep`
double block_dev(const Mat& a, const Mat& b, int dim, int keep) {
  double worst = 0.0;
  for (int mc = 0; mc < keep; ++mc)
    for (int ma = 0; ma < keep; ++ma)
      for (int nc = 0; nc < keep; ++nc)
        for (int na = 0; na < keep; ++na)
          worst = std::max(worst, std::abs(a(mc * dim + ma, nc * dim + na) -
                                           b(mc * dim + ma, nc * dim + na)));
  return worst;
}

void add_row(ScenarioResult& result, double scale, std::string quantity, std::string param,
             double value, double target, double tolerance, std::string formula) {
  result.rows.push_back(ResultRow{std::move(quantity), std::move(param), value, target,
                                  tolerance * scale, std::move(formula)});
}

void run_qubit_povm(ScenarioResult& result, double scale) {
  const auto outcomes = qubit::all_spin_outcomes();
  Mat sum = Mat::Zero(2, 2);
  for (const auto& m : outcomes) {
    Mat element = qubit::derived_povm(m).mat;
    sum += element;
    char tag[32];
    std::snprintf(tag, sizeof tag, "m=(%+d %+d %+d)", m.mx, m.my, m.mz);
    add_row(result, scale, "povm element deviation", tag,
            max_abs(element - qubit::derived_povm_closed_form(m)), 0.0, 1e-12,
            "(1/8)(1 + (5/9) m.sigma)");
  }
  add_row(result, scale, "completeness", "", max_abs(sum - Mat::Identity(2, 2)), 0.0, 1e-12,
          "sum_m Pi(m) = 1");
}

void run_spin_uncertainty(ScenarioResult& result, double scale) {
  const CloneScenario& s = result.scenario;
  Ket input = qubit::spin_coherent_state(0.5, s.theta, s.phi);
  MomentReport clone_report = qubit::estimate_moments(input);
  const double clone_based = clone_report.total_uncertainty;
  const double optimal = qubit::coherent_total_uncertainty(0.5, input);
  add_row(result, scale, "clone-based total uncertainty", "", clone_based, 109.0 / 50.0,
          1e-9, "109/50");
  add_row(result, scale, "coherent-optimal total uncertainty", "", optimal, 2.0, 1e-9,
          "j(j+1)^2/(j+3/2) + 3(j+1)^2/(2j+3) - j^2");
  add_row(result, scale, "optimal saturates the lower bound", "",
          optimal - qubit::coherent_uncertainty_bound(0.5), 0.0, 1e-9, "2j+1");
  add_row(result, scale, "clone-based excess over optimal", "", clone_based - optimal,
          9.0 / 50.0, 1e-9, "109/50 - 2 = 9/50");
}

void run_spin_coherent_benchmark(ScenarioResult& result, double scale) {
  const CloneScenario& s = result.scenario;
  for (double j : s.j_values) {
    Ket input = qubit::spin_coherent_state(j, s.theta, s.phi);
    const auto moments = qubit::coherent_moment_operators(j, s.n_theta, s.n_phi);
    const double closed = qubit::coherent_total_uncertainty(j, input);
    const double quad = qubit::coherent_total_uncertainty_quadrature(j, input, moments);
    add_row(result, scale, "estimated total uncertainty", label("j", j), quad, closed, 1e-6,
            "j(j+1)^2/(j+3/2) + 3(j+1)^2/(2j+3) - sum_a <J_a>^2");
    add_row(result, scale, "lower-bound violation", label("j", j),
            std::max(0.0, qubit::coherent_uncertainty_bound(j) - closed), 0.0, 1e-9,
            "total >= 2j+1");
    add_row(result, scale, "resolution of identity residual", label("j", j),
            moments.completeness_residual, 0.0, 1e-8, "int dmu (2j+1)/(4pi) |n><n| = 1");
  }
}

void run_cv_joint(ScenarioResult& result, double scale) {
  const CloneScenario& s = result.scenario;
  const cv::FockSpace space{s.nmax};
  cv::JointCloner cloner = cv::make_joint_cloner(space, s.sigma);
  const QuadratureGrid grid = uniform_grid(s.grid.half_width, s.grid.h);
  MomentReport report = cv::moment_check(cloner, mode_input(space, s.input), grid);
  result.warnings.insert(result.warnings.end(), report.warnings.begin(),
                         report.warnings.end());
  add_row(result, scale, "outcome probability", "", report.probability_total, 1.0, 1e-3,
          "h^2 sum F(x y) -> 1");
  for (const char* name : {"x", "y"}) {
    const MomentEntry& e = report.entry(name);
    add_row(result, scale, std::string("first moment ") + name, "", e.measured, e.expected,
            5e-3, "outcome means follow the input state");
    add_row(result, scale, std::string("added noise ") + name, "", e.added_noise,
            e.expected_added_noise, 5e-3,
            name[0] == 'x' ? "sigma^2/4" : "1/(4 sigma^2)");
  }
  for (const char* name : {"x_phi_plus", "x_phi_minus"}) {
    const MomentEntry& e = report.entry(name);
    add_row(result, scale, std::string("added noise ") + name, "", e.added_noise,
            e.expected_added_noise, 5e-3, "(1/4)|sin 2phi| with tan phi = sigma^2");
  }
}

void run_cv_sigma_scan(ScenarioResult& result, double scale) {
  const CloneScenario& s = result.scenario;
  const cv::FockSpace space{s.nmax};
  const QuadratureGrid grid = uniform_grid(s.grid.half_width, s.grid.h);
  Ket input = mode_input(space, s.input);
  for (double sigma : s.sigma_values) {
    cv::JointCloner cloner = cv::make_joint_cloner(space, sigma);
    MomentReport report = cv::moment_check(cloner, input, grid);
    result.warnings.insert(result.warnings.end(), report.warnings.begin(),
                           report.warnings.end());
    const double ax = report.entry("x").added_noise;
    const double ay = report.entry("y").added_noise;
    add_row(result, scale, "added noise x", label("sigma", sigma), ax,
            0.25 * sigma * sigma, 5e-3, "sigma^2/4");
    add_row(result, scale, "added noise y", label("sigma", sigma), ay,
            0.25 / (sigma * sigma), 5e-3, "1/(4 sigma^2)");
    add_row(result, scale, "noise product", label("sigma", sigma), ax * ay, 1.0 / 16.0,
            5e-3, "x-noise * y-noise = 1/16");
  }
}

void run_werner_scan(ScenarioResult& result, double scale) {
  const CloneScenario& s = result.scenario;
  const cv::FockSpace space{s.nmax};
  const QuadratureGrid grid = uniform_grid(s.grid.half_width, s.grid.h);
  werner::DivergenceScan scan =
      werner::moments_g_scan(space, mode_input(space, s.input), s.lambda_values, grid);
  for (const werner::ScanPoint& point : scan.points) {
    add_row(result, scale, "added-noise excess", label("lambda", point.lambda), point.excess,
            point.predicted, 0.10 * point.predicted, "(1/8)(1 + 2 lambda/(1-lambda))");
    add_row(result, scale, "shortfall against quarter-unit optimum",
            label("lambda", point.lambda), std::max(0.0, 0.25 - point.excess), 0.0, 1e-12,
            "excess > 1/4");
  }
  add_row(result, scale, "fitted divergence coefficient", "", scan.fitted_coefficient, 0.125,
          0.05 * 0.125, "slope of excess against 2 lambda/(1-lambda)");
}

void run_route_crosscheck(ScenarioResult& result, double scale) {
  const CloneScenario& s = result.scenario;
  {
    Mat direct = qubit::symmetric_projector(3, 2).mat;
    Mat recursive = qubit::symmetric_projector_recursive(3, 2).mat;
    add_row(result, scale, "symmetric projector direct vs recursive", "sites=3",
            max_abs(direct - recursive), 0.0, 1e-12,
            "S_M = (1/M)(1 + sum_i swap(i M))(S_{M-1} x 1)");
  }
  {
    const cv::FockSpace space{s.nmax};
    Mat integral = cv::projector_displacement_integral(space);
    Mat direct = cv::projector_pca(space, 1.0);
    add_row(result, scale, "cloner projector squeezed form vs integral",
            label("nmax", s.nmax), block_dev(integral, direct, space.dim(), s.nmax / 2),
            0.0, 1e-4, "(2/pi) int e^{-|z|^2} D+(z) x D(z)");
  }
  {
    const cv::FockSpace space{std::min(s.nmax, 30)};
    Mat integral = werner::swap_displacement_integral(space);
    Mat direct = werner::swap_operator(space).mat;
    add_row(result, scale, "swap operator vs displacement-pair integral",
            label("nmax", space.nmax),
            block_dev(integral, direct, space.dim(), space.nmax / 3), 0.0, 1e-3,
            "(1/pi) int D(a) x D+(a)");
  }
  {
    const cv::FockSpace space{s.nmax};
    Mat swap_form = werner::symmetrizer_s2_cv(space).mat;
    Mat parity_form = werner::symmetrizer_parity_form(space).mat;
    add_row(result, scale, "symmetrizer swap form vs parity form", label("nmax", s.nmax),
            block_dev(swap_form, parity_form, space.dim(), std::min(20, s.nmax / 2)), 0.0,
            1e-4, "(1 + swap)/2 = V (P_even x 1) V+");
  }
  {
    const cv::FockSpace space{s.nmax};
    cv::JointCloner cloner = cv::make_joint_cloner(space, 1.0);
    Ket input = cv::coherent_ket(space, Cx(0.5, 0.0));
    Operator reduced = partial_trace(cv::clone_channel_cv(cloner, input), {0});
    Operator mixture = cv::displacement_mixture(space, input, 1.0);
    add_row(result, scale, "clone reduction vs displacement mixture", label("nmax", s.nmax),
            trace_distance(reduced.mat / reduced.mat.trace().real(),
                           mixture.mat / mixture.mat.trace().real()),
            0.0, 1e-3, "reduction = int d^2z |f(z)|^2 D+(z) rho D(z)");
  }
  {
    Ket input = qubit::spin_coherent_state(1.0, 0.4, 1.1);
    const auto moments = qubit::coherent_moment_operators(1.0);
    add_row(result, scale, "spin uncertainty closed form vs sphere rule", "j=1",
            std::abs(qubit::coherent_total_uncertainty(1.0, input) -
                     qubit::coherent_total_uncertainty_quadrature(1.0, input, moments)),
            0.0, 1e-6, "j(j+1)^2/(j+3/2) + 3(j+1)^2/(2j+3) - sum_a <J_a>^2");
  }
}

bool valid_name(const std::string& name) {
  if (name.empty() || name.size() > 64) return false;
  return std::all_of(name.begin(), name.end(), [](unsigned char c) {
    return std::isalnum(c) || c == '-' || c == '_' || c == '.';
  });
}

void check(bool ok, const std::string& message) {
  if (!ok) throw ValidationError(message);
}

void validate_scenario(const CloneScenario& s) {
  const std::string where = "scenario '" + s.name + "'";
  check(valid_name(s.name), where + ": name must be [A-Za-z0-9._-]{1,64}");
  check(s.nmax >= 8 && s.nmax <= 80, where + ": nmax must lie in [8, 80]");
  check(std::isfinite(s.theta) && std::isfinite(s.phi), where + ": angles must be finite");
  check(s.grid.h > 0.0 && s.grid.h <= 0.5, where + ": grid.h must lie in (0, 0.5]");
  check(s.grid.half_width >= 1.0 && s.grid.half_width <= 50.0,
        where + ": grid.half_width must lie in [1, 50]");
  check(s.input.type == "vacuum" || s.input.type == "coherent" || s.input.type == "fock",
        where + ": input.type must be vacuum, coherent or fock");
  if (s.input.type == "coherent")
    check(std::abs(s.input.alpha) <= std::sqrt(double(s.nmax)) / 3.0,
          where + ": |alpha| must stay within sqrt(nmax)/3");
  if (s.input.type == "fock")
    check(s.input.n >= 0 && s.input.n <= s.nmax / 2,
          where + ": fock level must lie in [0, nmax/2]");

  switch (s.kind) {
    case Kind::qubit_povm:
    case Kind::spin_uncertainty:
    case Kind::route_crosscheck:
      break;
    case Kind::spin_coherent_benchmark:
      check(!s.j_values.empty(), where + ": j_values must be non-empty");
      for (double j : s.j_values)
        check(j >= 0.5 && j <= 6.0 && std::abs(2.0 * j - std::round(2.0 * j)) < 1e-9,
              where + ": j must be a half-integer in [0.5, 6]");
      check(s.n_theta >= 8 && s.n_theta <= 512, where + ": n_theta must lie in [8, 512]");
      check(s.n_phi >= 8 && s.n_phi <= 1024, where + ": n_phi must lie in [8, 1024]");
      break;
    case Kind::cv_joint:
      check(s.sigma >= 0.3 && s.sigma <= 3.5, where + ": sigma must lie in [0.3, 3.5]");
      break;
    case Kind::cv_sigma_scan:
      check(!s.sigma_values.empty(), where + ": sigma_values must be non-empty");
      for (double sigma : s.sigma_values)
        check(sigma >= 0.3 && sigma <= 3.5, where + ": sigma must lie in [0.3, 3.5]");
      break;
    case Kind::werner_scan:
      check(!s.lambda_values.empty(), where + ": lambda_values must be non-empty");
      for (double lambda : s.lambda_values)
        check(lambda >= 0.8 && lambda <= 0.995,
              where + ": lambda must lie in [0.8, 0.995]");
      break;
  }
}

// ---- config document ----

void expect_keys(const json& obj, const std::set<std::string>& allowed,
                 const std::string& where) {
  for (const auto& item : obj.items())
    check(allowed.count(item.key()) == 1, where + ": unknown key '" + item.key() + "'");
}

double number_field(const json& obj, const char* key, double fallback,
                    const std::string& where) {
  if (!obj.contains(key)) return fallback;
  check(obj[key].is_number(), where + ": '" + key + "' must be a number");
  return obj[key].get<double>();
}

int int_field(const json& obj, const char* key, int fallback, const std::string& where) {
  if (!obj.contains(key)) return fallback;
  check(obj[key].is_number_integer(), where + ": '" + key + "' must be an integer");
  return obj[key].get<int>();
}

std::vector<double> list_field(const json& obj, const char* key,
                               const std::string& where) {
  check(obj.contains(key), where + ": missing required key '" + key + "'");
  check(obj[key].is_array(), where + ": '" + key + "' must be an array of numbers");
  std::vector<double> values;
  for (const auto& v : obj[key]) {
    check(v.is_number(), where + ": '" + key + "' must contain numbers only");
    values.push_back(v.get<double>());
  }
  return values;
}

GridParams grid_field(const json& obj, const GridParams& fallback, const std::string& where) {
  if (!obj.contains("grid")) return fallback;
  const json& g = obj["grid"];
  check(g.is_object(), where + ": 'grid' must be an object");
  expect_keys(g, {"half_width", "h"}, where + ".grid");
  return GridParams{number_field(g, "half_width", fallback.half_width, where + ".grid"),
                    number_field(g, "h", fallback.h, where + ".grid")};
}

InputState input_field(const json& obj, const InputState& fallback,
                       const std::string& where) {
  if (!obj.contains("input")) return fallback;
  const json& in = obj["input"];
  check(in.is_object(), where + ": 'input' must be an object");
  check(in.contains("type") && in["type"].is_string(),
        where + ".input: 'type' must be a string");
  InputState state;
  state.type = in["type"].get<std::string>();
  if (state.type == "coherent") {
    expect_keys(in, {"type", "alpha_re", "alpha_im"}, where + ".input");
    state.alpha = Cx(number_field(in, "alpha_re", 0.0, where + ".input"),
                     number_field(in, "alpha_im", 0.0, where + ".input"));
  } else if (state.type == "fock") {
    expect_keys(in, {"type", "n"}, where + ".input");
    state.n = int_field(in, "n", 0, where + ".input");
  } else {
    expect_keys(in, {"type"}, where + ".input");
  }
  return state;
}

std::set<std::string> allowed_keys(Kind kind) {
  std::set<std::string> keys = {"kind", "name"};
  switch (kind) {
    case Kind::qubit_povm:
      break;
    case Kind::spin_uncertainty:
      keys.insert({"theta", "phi"});
      break;
    case Kind::spin_coherent_benchmark:
      keys.insert({"j_values", "theta", "phi", "n_theta", "n_phi"});
      break;
    case Kind::cv_joint:
      keys.insert({"nmax", "sigma", "grid", "input"});
      break;
    case Kind::cv_sigma_scan:
      keys.insert({"nmax", "sigma_values", "grid", "input"});
      break;
    case Kind::werner_scan:
      keys.insert({"nmax", "lambda_values", "grid", "input"});
      break;
    case Kind::route_crosscheck:
      keys.insert({"nmax"});
      break;
  }
  return keys;
}

CloneScenario scenario_from_json(const json& obj, int index) {
  std::string where = "scenarios[" + std::to_string(index) + "]";
  check(obj.is_object(), where + ": must be an object");
  check(obj.contains("kind") && obj["kind"].is_string(),
        where + ": 'kind' must be a string");
  const std::string kind_text = obj["kind"].get<std::string>();
  const auto kind = kind_from_name(kind_text);
  check(kind.has_value(), where + ": unknown kind '" + kind_text + "'");

  CloneScenario s;
  s.kind = *kind;
  s.name = kind_text;
  if (obj.contains("name")) {
    check(obj["name"].is_string(), where + ": 'name' must be a string");
    s.name = obj["name"].get<std::string>();
  }
  where = "scenario '" + s.name + "'";
  expect_keys(obj, allowed_keys(s.kind), where);

  s.theta = number_field(obj, "theta", s.theta, where);
  s.phi = number_field(obj, "phi", s.phi, where);
  s.nmax = int_field(obj, "nmax", s.nmax, where);
  s.sigma = number_field(obj, "sigma", s.sigma, where);
  s.n_theta = int_field(obj, "n_theta", s.n_theta, where);
  s.n_phi = int_field(obj, "n_phi", s.n_phi, where);
  s.grid = grid_field(obj, s.grid, where);
  s.input = input_field(obj, s.input, where);
  if (s.kind == Kind::spin_coherent_benchmark) s.j_values = list_field(obj, "j_values", where);
  if (s.kind == Kind::cv_sigma_scan) s.sigma_values = list_field(obj, "sigma_values", where);
  if (s.kind == Kind::werner_scan) {
    s.lambda_values = list_field(obj, "lambda_values", where);
    s.grid = obj.contains("grid") ? s.grid : GridParams{14.0, 0.05};
  }
  validate_scenario(s);
  return s;
}

ojson input_to_json(const InputState& in) {
  ojson j;
  j["type"] = in.type;
  if (in.type == "coherent") {
    j["alpha_re"] = in.alpha.real();
    j["alpha_im"] = in.alpha.imag();
  }
  if (in.type == "fock") j["n"] = in.n;
  return j;
}

ojson grid_to_json(const GridParams& grid) {
  ojson j;
  j["half_width"] = grid.half_width;
  j["h"] = grid.h;
  return j;
}

ojson parameters_to_json(const CloneScenario& s) {
  ojson p;
  switch (s.kind) {
    case Kind::qubit_povm:
      break;
    case Kind::spin_uncertainty:
      p["theta"] = s.theta;
      p["phi"] = s.phi;
      break;
    case Kind::spin_coherent_benchmark:
      p["j_values"] = s.j_values;
      p["theta"] = s.theta;
      p["phi"] = s.phi;
      p["n_theta"] = s.n_theta;
      p["n_phi"] = s.n_phi;
      break;
    case Kind::cv_joint:
      p["nmax"] = s.nmax;
      p["sigma"] = s.sigma;
      p["grid"] = grid_to_json(s.grid);
      p["input"] = input_to_json(s.input);
      break;
    case Kind::cv_sigma_scan:
      p["nmax"] = s.nmax;
      p["sigma_values"] = s.sigma_values;
      p["grid"] = grid_to_json(s.grid);
      p["input"] = input_to_json(s.input);
      break;
    case Kind::werner_scan:
      p["nmax"] = s.nmax;
      p["lambda_values"] = s.lambda_values;
      p["grid"] = grid_to_json(s.grid);
      p["input"] = input_to_json(s.input);
      break;
    case Kind::route_crosscheck:
      p["nmax"] = s.nmax;
      break;
  }
  return p;
}

bool uses_mode_truncation(Kind kind) {
  return kind == Kind::cv_joint || kind == Kind::cv_sigma_scan ||
         kind == Kind::werner_scan || kind == Kind::route_crosscheck;
}

}  // namespace

std::string kind_name(Kind kind) {
  for (const auto& [k, name] : kind_table)
    if (k == kind) return name;
  return "unknown";
}

std::optional<Kind> kind_from_name(const std::string& name) {
  for (const auto& [k, table_name] : kind_table)
    if (name == table_name) return k;
  return std::nullopt;
}

double ResultRow::deviation() const { return std::abs(value - target); }

bool ResultRow::pass() const { return deviation() <= tolerance; }

int ScenarioResult::failures() const {
  return static_cast<int>(
      std::count_if(rows.begin(), rows.end(), [](const ResultRow& r) { return !r.pass(); }));
}

double tolerance_scale() {
  const char* raw = std::getenv("CLONOMETRY_TOLERANCE_SCALE");
  if (raw == nullptr || *raw == '\0') return 1.0;
  char* end = nullptr;
  const double value = std::strtod(raw, &end);
  if (end == raw || *end != '\0' || !std::isfinite(value) || value <= 0.0)
    throw ValidationError("CLONOMETRY_TOLERANCE_SCALE must be a positive number");
  return value;
}

ScenarioResult run_scenario(const CloneScenario& scenario) {
  validate_scenario(scenario);
  const double scale = tolerance_scale();
  ScenarioResult result;
  result.scenario = scenario;
  switch (scenario.kind) {
    case Kind::qubit_povm: run_qubit_povm(result, scale); break;
    case Kind::spin_uncertainty: run_spin_uncertainty(result, scale); break;
    case Kind::spin_coherent_benchmark: run_spin_coherent_benchmark(result, scale); break;
    case Kind::cv_joint: run_cv_joint(result, scale); break;
    case Kind::cv_sigma_scan: run_cv_sigma_scan(result, scale); break;
    case Kind::werner_scan: run_werner_scan(result, scale); break;
    case Kind::route_crosscheck: run_route_crosscheck(result, scale); break;
  }
  return result;
}

std::vector<CloneScenario> bundled_scenarios() {
  std::vector<CloneScenario> list;

  CloneScenario povm;
  povm.kind = Kind::qubit_povm;
  povm.name = "qubit-povm";
  povm.description = "eight-outcome joint spin measurement induced through the 1->3 cloner";
  list.push_back(povm);

  CloneScenario spin;
  spin.kind = Kind::spin_uncertainty;
  spin.name = "spin-uncertainty";
  spin.description = "clone-based spin estimate against the optimal coherent-state value";
  list.push_back(spin);

  CloneScenario bench;
  bench.kind = Kind::spin_coherent_benchmark;
  bench.name = "spin-coherent-benchmark";
  bench.description = "closed-form estimated uncertainty against the sphere rule across j";
  bench.j_values = {0.5, 1.0, 1.5, 2.0};
  bench.theta = 0.7;
  bench.phi = 0.3;
  list.push_back(bench);

  CloneScenario joint;
  joint.kind = Kind::cv_joint;
  joint.name = "cv-joint";
  joint.description = "joint x-y outcome statistics of the mode cloner";
  joint.nmax = 40;
  joint.sigma = 1.0;
  joint.grid = {9.5, 0.05};
  joint.input = {"coherent", Cx(0.4, -0.3), 0};
  list.push_back(joint);

  CloneScenario sweep;
  sweep.kind = Kind::cv_sigma_scan;
  sweep.name = "cv-sigma-scan";
  sweep.description = "added-noise tradeoff of the asymmetric mode cloner across sigma";
  sweep.nmax = 40;
  sweep.sigma_values = {0.8, 1.0, 1.25};
  sweep.grid = {9.5, 0.05};
  sweep.input = {"coherent", Cx(0.4, -0.3), 0};
  list.push_back(sweep);

  CloneScenario wscan;
  wscan.kind = Kind::werner_scan;
  wscan.name = "werner-scan";
  wscan.description = "thermal-regulator divergence of the joint-outcome second moment";
  wscan.nmax = 40;
  wscan.lambda_values = {0.8, 0.9, 0.95};
  wscan.grid = {14.0, 0.05};
  list.push_back(wscan);

  CloneScenario routes;
  routes.kind = Kind::route_crosscheck;
  routes.name = "route-crosscheck";
  routes.description = "independent construction routes for the same operators";
  routes.nmax = 40;
  list.push_back(routes);

  return list;
}

std::string catalog_text() {
  static const std::pair<Kind, const char*> formulas[] = {
      {Kind::qubit_povm, "(1/8)(1 + (5/9) m.sigma)"},
      {Kind::spin_uncertainty, "109/50 against 2j+1 = 2"},
      {Kind::spin_coherent_benchmark, "j(j+1)^2/(j+3/2) + 3(j+1)^2/(2j+3) - sum_a <J_a>^2"},
      {Kind::cv_joint, "added noise sigma^2/4 and 1/(4 sigma^2)"},
      {Kind::cv_sigma_scan, "x-noise * y-noise = 1/16"},
      {Kind::werner_scan, "(1/8)(1 + 2 lambda/(1-lambda))"},
      {Kind::route_crosscheck, "two constructions of each operator agree"},
  };
  std::string out;
  for (const CloneScenario& s : bundled_scenarios()) {
    char line[256];
    const char* formula = "";
    for (const auto& [k, f] : formulas)
      if (k == s.kind) formula = f;
    std::snprintf(line, sizeof line, "%-26s %s [targets: %s]\n", s.name.c_str(),
                  s.description.c_str(), formula);
    out += line;
  }
  return out;
}

std::string schema_text() {
  return R"schema({
  "document": {
    "scenarios": "array of scenario objects, at least one"
  },
  "common_keys": {
    "kind": "one of the kinds below (required)",
    "name": "unique file-safe label, default: kind"
  },
  "kinds": {
    "qubit-povm": {},
    "spin-uncertainty": {"theta": "input polar angle, default 0", "phi": "input azimuth, default 0"},
    "spin-coherent-benchmark": {"j_values": "half-integers in [0.5, 6] (required)", "theta": "default 0", "phi": "default 0", "n_theta": "sphere rule nodes, default 64", "n_phi": "default 128"},
    "cv-joint": {"nmax": "mode cutoff in [8, 80], default 40", "sigma": "cloner asymmetry in [0.3, 3.5], default 1", "grid": "outcome grid", "input": "mode input state"},
    "cv-sigma-scan": {"nmax": "default 40", "sigma_values": "list in [0.3, 3.5] (required)", "grid": "outcome grid", "input": "mode input state"},
    "werner-scan": {"nmax": "default 40", "lambda_values": "list in [0.8, 0.995] (required)", "grid": "outcome grid, default half_width 14 h 0.05", "input": "mode input state, default vacuum"},
    "route-crosscheck": {"nmax": "default 40"}
  },
  "grid": {"half_width": "in [1, 50]", "h": "in (0, 0.5]"},
  "input": {"type": "vacuum | coherent | fock", "alpha_re": "coherent only", "alpha_im": "coherent only", "n": "fock only, in [0, nmax/2]"},
  "exit_codes": {"0": "success", "2": "config parse error", "3": "validation error", "4": "tolerance failure under --strict"},
  "environment": {"CLONOMETRY_TOLERANCE_SCALE": "positive multiplier applied to every tolerance, default 1"}
}
)schema";
}

std::vector<CloneScenario> parse_config(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("config parse: ") + e.what());
  }
  check(doc.is_object(), "config: top level must be an object");
  expect_keys(doc, {"scenarios"}, "config");
  check(doc.contains("scenarios") && doc["scenarios"].is_array(),
        "config: 'scenarios' must be an array");
  check(!doc["scenarios"].empty(), "config: 'scenarios' must not be empty");

  std::vector<CloneScenario> list;
  std::set<std::string> names;
  int index = 0;
  for (const auto& obj : doc["scenarios"]) {
    CloneScenario s = scenario_from_json(obj, index++);
    check(names.insert(s.name).second, "config: duplicate scenario name '" + s.name + "'");
    list.push_back(std::move(s));
  }
  return list;
}

std::string to_csv(const ScenarioResult& result) {
  std::string out = "kind,name,row,param,quantity,value,target,deviation,tolerance,pass,formula\n";
  const std::string prefix = kind_name(result.scenario.kind) + "," + result.scenario.name + ",";
  for (size_t i = 0; i < result.rows.size(); ++i) {
    const ResultRow& r = result.rows[i];
    out += prefix + std::to_string(i) + "," + r.param + "," + r.quantity + "," +
           num(r.value) + "," + num(r.target) + "," + num(r.deviation()) + "," +
           num(r.tolerance) + "," + (r.pass() ? "true" : "false") + "," + r.formula + "\n";
  }
  return out;
}

std::string to_json_sidecar(const ScenarioResult& result) {
  ojson j;
  j["name"] = result.scenario.name;
  j["kind"] = kind_name(result.scenario.kind);
  j["version"] = version_string;
  j["tolerance_scale"] = tolerance_scale();
  j["rows"] = result.rows.size();
  j["failures"] = result.failures();
  j["warnings"] = result.warnings;
  j["parameters"] = parameters_to_json(result.scenario);
  if (uses_mode_truncation(result.scenario.kind)) {
    ojson t;
    t["nmax"] = result.scenario.nmax;
    t["grid_half_width"] = result.scenario.grid.half_width;
    t["grid_h"] = result.scenario.grid.h;
    j["truncation"] = t;
  }
  return j.dump(2) + "\n";
}

}  // namespace clonometry::scenarios
