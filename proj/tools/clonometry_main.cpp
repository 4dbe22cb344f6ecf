#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "clonometry/scenarios.hpp"

namespace {

namespace sc = clonometry::scenarios;

// exit codes: 0 success, 2 config parse error, 3 validation error,
// 4 tolerance failure under --strict
constexpr int exit_parse = 2;
constexpr int exit_validation = 3;
constexpr int exit_tolerance = 4;

std::vector<sc::CloneScenario> resolve_target(const std::string& target) {
  if (target.rfind("builtin:", 0) == 0) {
    const std::string pick = target.substr(8);
    std::vector<sc::CloneScenario> all = sc::bundled_scenarios();
    if (pick == "all") return all;
    for (const sc::CloneScenario& s : all)
      if (s.name == pick) return {s};
    throw sc::ValidationError("unknown builtin scenario '" + pick + "'");
  }
  std::ifstream in(target);
  if (!in) throw sc::ParseError("cannot read config file: " + target);
  std::ostringstream text;
  text << in.rdbuf();
  return sc::parse_config(text.str());
}

void write_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
  if (!out) throw sc::ValidationError("cannot write output file: " + path.string());
}

int run_command(const std::string& target, bool strict, bool parallel,
                const std::string& out_dir) {
  std::vector<sc::CloneScenario> list;
  try {
    list = resolve_target(target);
    (void)sc::tolerance_scale();  // reject a bad override before any work
  } catch (const sc::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_parse;
  } catch (const sc::ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_validation;
  }

  std::vector<sc::ScenarioResult> results(list.size());
  std::vector<std::string> errors(list.size());
  auto work = [&](size_t i) {
    try {
      results[i] = sc::run_scenario(list[i]);
    } catch (const std::exception& e) {
      errors[i] = e.what();
    }
  };
  if (parallel) {
    std::vector<std::thread> pool;
    pool.reserve(list.size());
    for (size_t i = 0; i < list.size(); ++i) pool.emplace_back(work, i);
    for (std::thread& t : pool) t.join();
  } else {
    for (size_t i = 0; i < list.size(); ++i) work(i);
  }

  for (size_t i = 0; i < list.size(); ++i) {
    if (errors[i].empty()) continue;
    std::cerr << "error: scenario '" << list[i].name << "': " << errors[i] << "\n";
    return exit_validation;
  }

  int total_rows = 0;
  int total_failures = 0;
  try {
    std::filesystem::create_directories(out_dir);
    for (const sc::ScenarioResult& result : results) {
      const std::filesystem::path base = std::filesystem::path(out_dir) / result.scenario.name;
      write_file(base.string() + ".csv", sc::to_csv(result));
      write_file(base.string() + ".json", sc::to_json_sidecar(result));
      std::cout << result.scenario.name << ": rows=" << result.rows.size()
                << " failures=" << result.failures() << "\n";
      for (const std::string& warning : result.warnings)
        std::cout << "  warning: " << warning << "\n";
      total_rows += static_cast<int>(result.rows.size());
      total_failures += result.failures();
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return exit_validation;
  }
  std::cout << "total: scenarios=" << results.size() << " rows=" << total_rows
            << " failures=" << total_failures << "\n";
  if (strict && total_failures > 0) return exit_tolerance;
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"clone-based joint measurement scenario runner"};
  app.set_version_flag("--version", std::string("clonometry ") + sc::version_string);
  app.require_subcommand(1);

  std::string target;
  std::string out_dir = ".";
  bool strict = false;
  bool parallel = false;
  CLI::App* run = app.add_subcommand("run", "execute scenarios from a config file or builtin:<name>");
  run->add_option("config", target, "config path, builtin:<name>, or builtin:all")->required();
  run->add_flag("--strict", strict, "exit 4 when any row misses its tolerance");
  run->add_flag("--parallel", parallel, "run independent scenarios on separate threads");
  run->add_option("--out", out_dir, "directory for result files (default .)");
  CLI::App* list_cmd = app.add_subcommand("list", "print the bundled scenario catalog");
  CLI::App* schema_cmd = app.add_subcommand("schema", "print the config document schema");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : exit_parse;
  }

  if (list_cmd->parsed()) {
    std::cout << sc::catalog_text();
    return 0;
  }
  if (schema_cmd->parsed()) {
    std::cout << sc::schema_text();
    return 0;
  }
  return run_command(target, strict, parallel, out_dir);
}
