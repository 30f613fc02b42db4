#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <utility>
#include <vector>

#include "dualsim/operator.hpp"
#include "dualsim/random.hpp"
#include "dualsim/state.hpp"

namespace dualsim {

/// Two-slit aperture in units of the wavelength (lambda = 1).
struct SlitGeometry {
  static constexpr double wavelength = 1.0;

  double separation = 10.0;       // d, centre to centre
  double width = 1.0;             // w
  double screen_distance = 1e4;   // L

  /// Throws on w <= 0, d < 0, L <= 0 or non-finite values.
  void validate() const;
  /// L > 100 d; callers warn when false.
  bool far_field() const;
  /// lambda L / d; the single-slit zero spacing lambda L / w when d = 0.
  double fringe_period() const;
  /// First zero of the single-slit envelope, lambda L / w.
  double first_envelope_zero() const;

  bool operator==(const SlitGeometry&) const = default;
};

enum class Slit { s1 = 0, s2 = 1 };

/// Fraunhofer amplitude of one slit at screen position x:
/// sinc(pi w x / (lambda L)) * exp(i k x x_slit / L) with x_slit = -d/2 for
/// S1 and +d/2 for S2.
Amplitude slit_amplitude(double x, Slit which, const SlitGeometry& g);

/// sinc^2 envelope shared by both slits.
double single_slit_intensity(double x, const SlitGeometry& g);

/// [[sqrt t, i sqrt(1-t)], [i sqrt(1-t), sqrt t]] on the path register.
Operator beam_splitter(double transmittance);

/// Diagonal unitary with e^{i chi} on `arm` (0 or 1).
Operator phase_shifter(double chi, std::size_t arm);

enum class AbsorberMode { stochastic, deterministic_chopper };

/// `transmission` is the intensity fraction a that survives the absorber.
struct AbsorberSpec {
  double transmission = 1.0;
  AbsorberMode mode = AbsorberMode::stochastic;

  void validate() const;
  bool operator==(const AbsorberSpec&) const = default;
};

struct AbsorberFactor {
  double amplitude;        // sqrt(a), multiplies the attenuated arm
  double absorbed_weight;  // 1 - a, per unit arm intensity
};

AbsorberFactor stochastic_absorber_amplitude(const AbsorberSpec& spec);

/// Whether the chopper is open for `trial`. Open with probability a; the
/// draw comes from rng.substream(trial, Channel::chopper) so it depends only
/// on (stream key, trial).
bool chopper_state(const AbsorberSpec& spec, std::uint64_t trial, const RandomStream& rng);

struct PolarizerSpec {
  enum class Kind { linear, circular_left, circular_right };

  Kind kind = Kind::linear;
  double angle = 0.0;  // radians in [0, pi), linear only

  static PolarizerSpec linear(double angle);
  static PolarizerSpec circular_left() { return {Kind::circular_left, 0.0}; }
  static PolarizerSpec circular_right() { return {Kind::circular_right, 0.0}; }

  bool operator==(const PolarizerSpec&) const = default;
};

/// Polarization state passed by the polarizer: cos a|H> + sin a|V> for
/// linear, (|H> +/- i|V>)/sqrt 2 for left/right circular.
StateVector polarization_state(const PolarizerSpec& spec);
Operator polarizer_projector(const PolarizerSpec& spec);

/// |S_k> -> |S_k> (x) |M_k>, extended linearly. One marker per path state.
StateVector attach_which_path(const StateVector& path_state, std::span<const StateVector> markers);

/// Atom-in-a-continuum detector driven by a classical field.
struct PhotoDetectorSpec {
  double work_function = 1.0;     // W_T
  double coupling = 1.0;          // |<e|D|g>|^2
  double ground_energy = 0.0;     // E_g
  double field_amplitude = 1.0;   // E_0
  /// (E_e, rho) samples with strictly increasing E_e; linear in between and
  /// zero outside the table.
  std::vector<std::pair<double, double>> density_of_states;

  void validate() const;
  /// rho(E_e), forced to zero below the gap E_e - E_g < W_T.
  double density(double excited_energy) const;

  bool operator==(const PhotoDetectorSpec&) const = default;
};

/// (pi/2) |<e|D|g>|^2 E_0^2 rho(E_g + omega), hbar = 1.
double photo_transition_rate(const PhotoDetectorSpec& spec, double omega);

/// omega - W_T above threshold, nothing below it.
std::optional<double> photo_electron_energy(double omega, double work_function);

}  // namespace dualsim
