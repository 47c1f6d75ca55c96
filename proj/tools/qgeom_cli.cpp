// Batch harness: runs one named suite and writes a JSON report.
//
//   qgeom run --suite NAME [--config FILE] [--seed N] [--out FILE]
//   qgeom template KIND [--out FILE]
//
// Exit codes: 0 all checks pass, 1 a check failed, 2 usage or IO error.

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

#include "qgeom/suites.hpp"

namespace fs = std::filesystem;
using namespace qgeom;

namespace {

constexpr int kExitPass = 0;
constexpr int kExitFail = 1;
constexpr int kExitUsage = 2;

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw UsageError("cannot write '" + path + "'");
  out << text;
  if (!out) throw UsageError("write failed for '" + path + "'");
}

struct RunConfig {
  std::string suite;
  std::uint64_t seed = 1;
  json params = json::object();
  std::optional<Scene> scene;
  std::string out;
};

RunConfig load_config(const std::string& config_path) {
  RunConfig c;
  if (config_path.empty()) return c;
  json j;
  try {
    j = read_json_file(config_path);
  } catch (const std::exception& e) {
    throw UsageError(e.what());
  }
  if (!j.is_object()) throw UsageError("config must be a JSON object");
  try {
    if (j.value("schema", kSchema) != kSchema) throw UsageError("unsupported config schema");
    c.suite = j.value("suite", std::string());
    c.seed = j.value("seed", c.seed);
    c.params = j.value("params", json::object());
    c.out = j.value("out", std::string());
    if (j.contains("scene")) {
      fs::path sp = j.at("scene").get<std::string>();
      if (sp.is_relative()) sp = fs::path(config_path).parent_path() / sp;
      if (!fs::exists(sp)) throw UsageError("scene not found: " + sp.string());
      c.scene = scene_from_json(read_json_file(sp.string()));
    }
  } catch (const UsageError&) {
    throw;
  } catch (const std::exception& e) {
    throw UsageError("invalid config '" + config_path + "': " + e.what());
  }
  return c;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Verification suites for holonomy-flux geometry"};
  app.require_subcommand(1);

  std::string config_path, suite, out;
  std::optional<std::uint64_t> seed;
  auto* run = app.add_subcommand("run", "run one verification suite");
  run->add_option("--config", config_path, "JSON config: suite, seed, scene, params, out");
  run->add_option("--suite", suite, "suite name")->check(CLI::IsMember(suite_names()));
  run->add_option("--seed", seed, "random seed");
  run->add_option("--out", out, "report path (stdout if omitted)");

  std::string kind, template_out;
  auto* tmpl = app.add_subcommand("template", "print a minimal scene");
  tmpl->add_option("kind", kind, "crossing, nice-surface, winding or diffeo")->required();
  tmpl->add_option("--out", template_out, "output path (stdout if omitted)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitPass : kExitUsage;
  }

  try {
    if (*tmpl) {
      write_text(template_out, scene_template(kind).dump(2) + "\n");
      return kExitPass;
    }
    RunConfig c = load_config(config_path);
    if (!suite.empty()) c.suite = suite;
    if (seed) c.seed = *seed;
    if (!out.empty()) c.out = out;
    if (c.suite.empty()) throw UsageError("no suite given (use --suite or the config's \"suite\")");
    if (std::find(suite_names().begin(), suite_names().end(), c.suite) == suite_names().end()) {
      throw UsageError("unknown suite '" + c.suite + "'");
    }
    SuiteReport r;
    try {
      r = run_suite(c.suite, c.params, c.seed, c.scene ? &*c.scene : nullptr);
    } catch (const json::exception& e) {
      throw UsageError(std::string("bad parameter: ") + e.what());
    }
    write_text(c.out, r.to_json().dump(2) + "\n");
    for (const auto& k : r.checks) {
      if (!k.pass) std::cerr << "FAIL " << k.name << ": " << k.measured << (k.at_least ? " < " : " > ") << k.bound << "\n";
    }
    return r.pass() ? kExitPass : kExitFail;
  } catch (const UsageError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
}
