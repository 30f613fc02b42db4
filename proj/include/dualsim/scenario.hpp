#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <json.hpp>

#include "dualsim/experiments.hpp"
#include "dualsim/optics.hpp"

namespace dualsim {

enum class Experiment {
  double_slit,
  which_path,
  neutron_absorber,
  mach_zehnder,
  delayed_choice,
  quantum_eraser,
  photoelectric,
};

std::string_view to_string(Experiment e);
std::optional<Experiment> experiment_from_string(std::string_view name);

enum class OutputKind { analytic_pattern, histogram, summary };

std::string_view to_string(OutputKind k);

struct ScreenParams {
  std::size_t bins = 256;
  double periods = 4.0;  // half-width of the screen in fringe periods

  bool operator==(const ScreenParams&) const = default;
};

enum class OpenSlits { both, s1, s2 };

struct DoubleSlitParams {
  SlitGeometry geometry;
  bool marked = false;
  std::optional<double> marker_overlap;
  OpenSlits open_slits = OpenSlits::both;
  ScreenParams screen;

  /// Overlap actually used: explicit value, else 0 when marked, else 1.
  double overlap() const { return marker_overlap.value_or(marked ? 0.0 : 1.0); }
  bool operator==(const DoubleSlitParams&) const = default;
};

struct WhichPathParams {
  SlitGeometry geometry;
  ScreenParams screen;

  bool operator==(const WhichPathParams&) const = default;
};

struct NeutronParams {
  AbsorberSpec absorber;
  double psi_l = 1.0 / 1.4142135623730951;
  double psi_r = 1.0 / 1.4142135623730951;
  std::size_t chi_bins = 8;

  bool operator==(const NeutronParams&) const = default;
};

struct MachZehnderParams {
  bool bs2_present = true;
  double arm_phase = 0.0;

  bool operator==(const MachZehnderParams&) const = default;
};

struct DelayedChoiceParams {
  double choice_probability = 0.5;
  double arm_phase = 0.0;
  ChoiceTiming choice_timing = ChoiceTiming::after_propagation;
  std::optional<std::uint64_t> choice_seed;

  bool operator==(const DelayedChoiceParams&) const = default;
};

struct EraserParams {
  SlitGeometry geometry;
  bool tag_slits = true;
  std::optional<PolarizerSpec> eraser;
  bool post_select = false;
  ScreenParams screen;

  bool operator==(const EraserParams&) const = default;
};

struct PhotoelectricParams {
  PhotoDetectorSpec detector;
  ScreenGrid omega{0.0, 4.0, 80};

  bool operator==(const PhotoelectricParams&) const = default;
};

using ScenarioParams = std::variant<DoubleSlitParams, WhichPathParams, NeutronParams, MachZehnderParams,
                                    DelayedChoiceParams, EraserParams, PhotoelectricParams>;

/// Declarative description of one experiment run.
struct Scenario {
  std::string name;
  Experiment experiment = Experiment::double_slit;
  ScenarioParams params;
  std::uint64_t n_events = 1;
  std::optional<std::uint64_t> seed;
  std::vector<OutputKind> outputs = {OutputKind::analytic_pattern, OutputKind::histogram, OutputKind::summary};

  bool wants(OutputKind k) const;
  bool operator==(const Scenario&) const = default;
};

enum class DiagCode { syntax, unknown_experiment, missing, range, duplicate, unknown_key, type };

std::string_view to_string(DiagCode c);

struct Diagnostic {
  DiagCode code;
  std::string path;  // dotted field path, "$" for the document itself
  std::size_t line;  // 1-based
  std::string message;

  std::string format() const;
};

class ScenarioError : public std::runtime_error {
 public:
  explicit ScenarioError(Diagnostic d) : std::runtime_error(d.format()), diag_(std::move(d)) {}
  const Diagnostic& diagnostic() const { return diag_; }

 private:
  Diagnostic diag_;
};

/// Strict parse: duplicate and unknown keys are errors, every value is
/// range-checked. Throws ScenarioError; never anything else.
Scenario parse_scenario(std::string_view text);

/// Canonical document form of a scenario (all defaults made explicit).
nlohmann::json scenario_to_json(const Scenario& s);
/// Canonical text: sorted keys, 17 significant digits.
std::string serialize_scenario(const Scenario& s);

/// Seed precedence: explicit flag, then the file, then QSIM_SEED, then 0.
std::uint64_t resolve_seed(const Scenario& s, std::optional<std::uint64_t> flag, const char* env_value);

}  // namespace dualsim
