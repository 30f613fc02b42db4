// qsim: run, validate and list dualsim scenarios.
//
// Exit codes: 0 success, 2 validation failure, 3 runtime failure.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>

#include <CLI11.hpp>

#include "dualsim/bundle.hpp"
#include "dualsim/catalog.hpp"
#include "dualsim/error.hpp"
#include "dualsim/scenario.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kInvalid = 2;
constexpr int kRuntime = 3;

struct InputError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string load(const std::string& source) {
  constexpr std::string_view prefix = "builtin:";
  if (source.starts_with(prefix)) {
    const auto entry = dualsim::find_builtin(source.substr(prefix.size()));
    if (!entry) throw InputError("no built-in scenario named '" + source.substr(prefix.size()) + "'");
    return std::string(entry->text);
  }
  std::ifstream in(source, std::ios::binary);
  if (!in) throw InputError("cannot read '" + source + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return buf.str();
}

int cmd_list() {
  for (const auto& e : dualsim::builtin_catalog()) {
    const auto name = "builtin:" + std::string(e.file.substr(0, e.file.size() - 5));
    std::cout << std::left << std::setw(26) << name << e.description << "\n";
  }
  return kOk;
}

int cmd_validate(const std::string& source) {
  const auto s = dualsim::parse_scenario(load(source));
  std::cout << "ok: " << s.name << " (" << dualsim::to_string(s.experiment) << ")\n";
  return kOk;
}

int cmd_run(const std::string& source, std::optional<std::uint64_t> seed, std::optional<std::uint64_t> events,
            const std::string& out_dir, const std::string& format_name) {
  auto s = dualsim::parse_scenario(load(source));
  s.seed = dualsim::resolve_seed(s, seed, std::getenv("QSIM_SEED"));
  if (events) s.n_events = *events;
  const auto format = format_name == "csv" ? dualsim::Format::csv : dualsim::Format::json;
  const auto files = dualsim::serialize(dualsim::run_scenario(s), format);

  if (out_dir.empty()) {
    for (const auto& f : files) {
      if (files.size() > 1) std::cout << "# " << f.name << "\n";
      std::cout << f.contents;
    }
    return kOk;
  }
  std::filesystem::create_directories(out_dir);
  for (const auto& f : files) {
    const auto path = std::filesystem::path(out_dir) / f.name;
    std::ofstream out(path, std::ios::binary);
    out << f.contents;
    if (!out) throw std::runtime_error("failed to write " + path.string());
    std::cerr << "wrote " << path.string() << "\n";
  }
  return kOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"qsim: quantum measurement and duality experiments"};
  app.set_version_flag("--version", std::string(dualsim::tool_version()));
  app.require_subcommand(1);

  std::string source;
  std::optional<std::uint64_t> seed;
  std::optional<std::uint64_t> events;
  std::string out_dir;
  std::string format = "json";

  auto* run = app.add_subcommand("run", "Run a scenario file or builtin:NAME");
  run->add_option("scenario", source, "Scenario file, or builtin:NAME")->required();
  run->add_option("--seed", seed, "Seed (overrides the file and QSIM_SEED)");
  run->add_option("--events", events, "Number of events (overrides the file)")->check(CLI::PositiveNumber);
  run->add_option("--out", out_dir, "Directory for output files (default: stdout)");
  run->add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));

  auto* validate = app.add_subcommand("validate", "Check a scenario file without running it");
  validate->add_option("scenario", source, "Scenario file, or builtin:NAME")->required();

  app.add_subcommand("list", "Print the built-in scenario catalog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInvalid;
  }

  try {
    if (*run) return cmd_run(source, seed, events, out_dir, format);
    if (*validate) return cmd_validate(source);
    return cmd_list();
  } catch (const dualsim::ScenarioError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const InputError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalid;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kRuntime;
  }
}
