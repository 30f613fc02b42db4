#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <vector>

#include "dualsim/density.hpp"
#include "dualsim/events.hpp"
#include "dualsim/kernels.hpp"
#include "dualsim/optics.hpp"
#include "dualsim/random.hpp"
#include "dualsim/screen.hpp"

namespace dualsim {

// ---------------------------------------------------------------------------
// Double slit

/// Relative screen intensity 1 + overlap cos(theta) for a real overlap of the
/// two slit states.
double double_slit_intensity(double overlap, double theta);

/// Default binning: `bins` bins over +/- `periods` fringe periods.
ScreenGrid default_screen(const SlitGeometry& g, std::size_t bins = 256, double periods = 4.0);

/// Fringe model of a two-slit geometry on a grid: period lambda L / d,
/// centred on the axis, with the sinc^2 envelope sampled at bin centres.
FringeModel slit_fringe_model(const SlitGeometry& g, const ScreenGrid& grid);

/// Path density of (|S1,M1> + |S2,M2>)/sqrt 2 after tracing out the marker,
/// with real marker overlap <M1|M2> = overlap in [0, 1].
DensityMatrix marked_path_density(double overlap);

/// I(x) = sum_jk rho_jk A_j(x) conj(A_k(x)) at every bin centre, normalized
/// per event.
ScreenPattern screen_pattern(const DensityMatrix& path_rho, const SlitGeometry& g, const ScreenGrid& grid,
                             Execution exec = Execution::parallel);

/// Unmarked: |A1 + A2|^2. Marked: |A1|^2 + |A2|^2.
ScreenPattern double_slit_pattern(const SlitGeometry& g, bool marked, const ScreenGrid& grid);
/// Partial distinguishability: marker overlap in [0, 1] interpolates
/// between the two cases above.
ScreenPattern double_slit_pattern(const SlitGeometry& g, double marker_overlap, const ScreenGrid& grid);
/// Only `open` transmits.
ScreenPattern single_slit_pattern(const SlitGeometry& g, Slit open, const ScreenGrid& grid);

/// Double slit with a which-path detector behind each slit. Holds the
/// entangled slit/detector state and the per-slit screen samplers.
class WhichPathExperiment {
 public:
  WhichPathExperiment(const SlitGeometry& g, const ScreenGrid& grid);

  const StateVector& entangled_state() const { return state_; }
  const ScreenPattern& slit_pattern(Slit s) const { return patterns_[static_cast<std::size_t>(s)]; }
  const ScreenGrid& grid() const { return grid_; }

  /// Projective read-out of D1 then D2 on the collapsed state, then one
  /// screen draw from the single-slit pattern of the slit that was marked.
  EventRecord trial(std::uint64_t index, const RandomStream& rng) const;

 private:
  ScreenGrid grid_;
  StateVector state_;
  Operator d1_;
  Operator d2_;
  std::array<ScreenPattern, 2> patterns_;
  std::array<ScreenSampler, 2> samplers_;
};

EventRecord which_path_trial(const WhichPathExperiment& exp, std::uint64_t trial, const RandomStream& rng);

// ---------------------------------------------------------------------------
// Neutron interferometer with an absorber in the left arm

/// a psi_L^2 + psi_R^2 + 2 c psi_L psi_R cos(chi) with c = sqrt(a) for the
/// stochastic absorber and c = a for the chopper.
double neutron_intensity(const AbsorberSpec& spec, double psi_l, double psi_r, double chi);

/// Raw contrast of I(chi), and the same contrast divided by the largest one
/// allowed by the transmitted arm intensities.
struct AbsorberVisibility {
  double raw;
  double normalized;
};
AbsorberVisibility absorber_visibility(const AbsorberSpec& spec, double psi_l, double psi_r);

/// Interferometer at one phase chi. Detector 1 is the output port whose
/// intensity is neutron_intensity()/2; detector 0 the complementary port.
class NeutronInterferometer {
 public:
  /// psi_L^2 + psi_R^2 must be 1.
  NeutronInterferometer(const AbsorberSpec& spec, double psi_l, double psi_r, double chi);

  /// Probability the particle is removed by the absorber or chopper.
  double absorbed_probability() const;
  /// Unconditional probability of a count at `detector`.
  double detector_probability(int detector) const;

  EventRecord trial(std::uint64_t index, const RandomStream& rng) const;

 private:
  AbsorberSpec spec_;
  double psi_l_;
  // stochastic: [0] only; chopper: [0] open, [1] closed
  std::array<double, 2> absorbed_{};
  std::array<std::array<double, 2>, 2> ports_{};  // conditional on not absorbed
};

EventRecord neutron_mc_trial(const AbsorberSpec& spec, double psi_l, double psi_r, double chi, std::uint64_t trial,
                             const RandomStream& rng);

// ---------------------------------------------------------------------------
// Duality parameters

struct DualityParams {
  double W;
  double P;
  double beta;
  double R;
};

DualityParams duality_params(double a, double b);

/// a^2 + b^2 + 2ab cos(2 pi x / period + phi).
double two_beam_intensity(double a, double b, double x, double period, double phi = 0.0);

/// Two-beam pattern on `grid` (per event) with a flat fringe model.
ScreenPattern two_beam_pattern(double a, double b, double period, const ScreenGrid& grid);

struct VisibilityCheck {
  double V;
  double W;
};

/// Scans one period of the two-beam pattern for its extrema and compares the
/// resulting contrast with W.
VisibilityCheck fringe_visibility_equals_W(double a, double b);

// ---------------------------------------------------------------------------
// Mach-Zehnder

struct MZConfig {
  bool bs2_present = true;
  double arm_phase = 0.0;
  /// Per-trial choice of inserting BS2; overrides everything else.
  std::vector<bool> schedule;
  /// Probability of inserting BS2, drawn per trial when no schedule is set.
  std::optional<double> choice_probability;
  std::uint64_t choice_seed = 0;

  void validate() const;
};

/// Detector 1 is D_b (bright in the balanced setup), detector 0 is D_d.
inline constexpr int kDarkDetector = 0;
inline constexpr int kBrightDetector = 1;

struct MZProbabilities {
  double bright;
  double dark;
};

/// Uses the fixed `bs2_present` setting.
MZProbabilities mz_probabilities(const MZConfig& cfg);
MZProbabilities mz_probabilities(bool bs2_present, double arm_phase);

enum class ChoiceTiming { before_entry, after_propagation };

/// One record per trial: detector hit, choice bit, logical timeline.
std::vector<EventRecord> delayed_choice_run(const MZConfig& cfg, std::uint64_t n_trials, const RandomStream& rng,
                                            ChoiceTiming timing = ChoiceTiming::after_propagation,
                                            Execution exec = Execution::parallel);

// ---------------------------------------------------------------------------
// Quantum eraser

struct EraserConfig {
  bool tag_slits = true;
  std::optional<PolarizerSpec> eraser;
  bool post_select = false;

  void validate() const;
};

struct EraserPatterns {
  /// All detections, eraser outcome ignored (per event).
  ScreenPattern all;
  /// Joint probability of (bin, eraser passes); sums to selected_fraction.
  std::optional<ScreenPattern> selected;
  double selected_fraction = 1.0;
};

/// Tagging labels S1 with left and S2 with right circular polarization;
/// untagged light is horizontally polarized.
EraserPatterns eraser_patterns(const EraserConfig& cfg, const SlitGeometry& g, const ScreenGrid& grid);

/// Screen draw from `all`, then the eraser pass/fail draw conditioned on the
/// bin. Records Tag::polarizer_pass when an eraser is present.
class EraserExperiment {
 public:
  EraserExperiment(const EraserConfig& cfg, const SlitGeometry& g, const ScreenGrid& grid);

  const EraserPatterns& patterns() const { return patterns_; }
  EventRecord trial(std::uint64_t index, const RandomStream& rng) const;

 private:
  EraserPatterns patterns_;
  ScreenSampler sampler_;
  std::vector<double> pass_given_bin_;
};

// ---------------------------------------------------------------------------
// Photoelectric detector

/// Transition rate on a grid of field frequencies (relative intensities,
/// raw rates).
ScreenPattern photo_rate_spectrum(const PhotoDetectorSpec& spec, const ScreenGrid& omega_grid);

}  // namespace dualsim
