#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "dualsim/events.hpp"
#include "dualsim/montecarlo.hpp"
#include "dualsim/scenario.hpp"
#include "dualsim/screen.hpp"

namespace dualsim {

std::string_view tool_version();

/// Everything one scenario run produced.
struct ResultBundle {
  Scenario scenario;
  std::map<std::string, ScreenPattern> patterns;
  std::map<std::string, Histogram> histograms;
  std::optional<RunSummary> summary;
  std::string tool_version;

  bool operator==(const ResultBundle&) const = default;
};

/// Evolve, then detect. Deterministic for a fixed scenario; an absent seed
/// runs with seed 0. Module errors are rethrown as dualsim::Error with the
/// scenario name prefixed.
ResultBundle run_scenario(const Scenario& s, Execution exec = Execution::parallel);

enum class Format { json, csv };

/// One output file: deterministic name `<scenario>.<output>.<ext>` and bytes.
struct OutputFile {
  std::string name;
  std::string contents;
};

/// json: a single `<name>.bundle.json`. csv: one table per pattern and
/// histogram plus `<name>.summary.csv` when a summary exists.
std::vector<OutputFile> serialize(const ResultBundle& bundle, Format format);

std::string bundle_to_json_text(const ResultBundle& bundle);
ResultBundle parse_bundle(std::string_view text);

std::string pattern_csv(const ScreenPattern& p);
std::string histogram_csv(const Histogram& h);

}  // namespace dualsim
