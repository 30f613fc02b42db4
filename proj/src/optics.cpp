#include "dualsim/optics.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "dualsim/error.hpp"

namespace dualsim {
namespace {

using std::numbers::pi;

double sinc(double u) { return std::abs(u) < 1e-8 ? 1.0 - u * u / 6.0 : std::sin(u) / u; }

bool finite(double v) { return std::isfinite(v); }

}  // namespace

void SlitGeometry::validate() const {
  if (!finite(separation) || !finite(width) || !finite(screen_distance)) {
    throw Error(ErrorCode::invalid_argument, "slit geometry has non-finite values");
  }
  if (width <= 0.0) throw Error(ErrorCode::invalid_argument, "slit width must be positive");
  if (separation < 0.0) throw Error(ErrorCode::invalid_argument, "slit separation must be non-negative");
  if (screen_distance <= 0.0) throw Error(ErrorCode::invalid_argument, "screen distance must be positive");
}

bool SlitGeometry::far_field() const { return screen_distance > 100.0 * separation; }

double SlitGeometry::fringe_period() const {
  return separation > 0.0 ? wavelength * screen_distance / separation : first_envelope_zero();
}

double SlitGeometry::first_envelope_zero() const { return wavelength * screen_distance / width; }

Amplitude slit_amplitude(double x, Slit which, const SlitGeometry& g) {
  const double k = 2.0 * pi / SlitGeometry::wavelength;
  const double x_slit = (which == Slit::s1 ? -0.5 : 0.5) * g.separation;
  const double envelope = sinc(pi * g.width * x / (SlitGeometry::wavelength * g.screen_distance));
  return std::polar(envelope, k * x * x_slit / g.screen_distance);
}

double single_slit_intensity(double x, const SlitGeometry& g) {
  const double s = sinc(pi * g.width * x / (SlitGeometry::wavelength * g.screen_distance));
  return s * s;
}

Operator beam_splitter(double transmittance) {
  if (!(transmittance >= 0.0 && transmittance <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "beam splitter transmittance must lie in [0, 1]");
  }
  const double t = std::sqrt(transmittance);
  const Amplitude r{0.0, std::sqrt(1.0 - transmittance)};
  ComplexMatrix m(2, 2);
  m << t, r, r, t;
  return Operator(std::move(m), OperatorKind::unitary);
}

Operator phase_shifter(double chi, std::size_t arm) {
  if (arm > 1) throw Error(ErrorCode::out_of_range, "phase shifter arm must be 0 or 1");
  ComplexMatrix m = ComplexMatrix::Identity(2, 2);
  m(static_cast<Eigen::Index>(arm), static_cast<Eigen::Index>(arm)) = std::polar(1.0, chi);
  return Operator(std::move(m), OperatorKind::unitary);
}

void AbsorberSpec::validate() const {
  if (!(transmission >= 0.0 && transmission <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "absorber transmission must lie in [0, 1]");
  }
}

AbsorberFactor stochastic_absorber_amplitude(const AbsorberSpec& spec) {
  spec.validate();
  if (spec.mode != AbsorberMode::stochastic) throw Error(ErrorCode::mode_mismatch, "absorber is not stochastic");
  return {std::sqrt(spec.transmission), 1.0 - spec.transmission};
}

bool chopper_state(const AbsorberSpec& spec, std::uint64_t trial, const RandomStream& rng) {
  spec.validate();
  if (spec.mode != AbsorberMode::deterministic_chopper) {
    throw Error(ErrorCode::mode_mismatch, "absorber is not a chopper");
  }
  auto stream = rng.substream(trial, Channel::chopper);
  return stream.uniform() < spec.transmission;
}

PolarizerSpec PolarizerSpec::linear(double angle) {
  double a = std::fmod(angle, pi);
  if (a < 0.0) a += pi;
  if (a >= pi) a = 0.0;
  return {Kind::linear, a};
}

StateVector polarization_state(const PolarizerSpec& spec) {
  const double h = 1.0 / std::numbers::sqrt2;
  switch (spec.kind) {
    case PolarizerSpec::Kind::linear:
      return StateVector(polarization_register(), {std::cos(spec.angle), std::sin(spec.angle)});
    case PolarizerSpec::Kind::circular_left:
      return StateVector(polarization_register(), {h, Amplitude{0.0, h}});
    case PolarizerSpec::Kind::circular_right:
      return StateVector(polarization_register(), {h, Amplitude{0.0, -h}});
  }
  throw Error(ErrorCode::invalid_argument, "unknown polarizer kind");
}

Operator polarizer_projector(const PolarizerSpec& spec) {
  const auto v = polarization_state(spec).amplitudes();
  return Operator(v * v.adjoint(), OperatorKind::projector);
}

StateVector attach_which_path(const StateVector& path_state, std::span<const StateVector> markers) {
  const auto& regs = path_state.basis().registers();
  if (regs.size() != 1 || regs.front().subsystem != Subsystem::path) {
    throw Error(ErrorCode::invalid_argument, "which-path coupling needs a path-only state");
  }
  if (markers.size() != path_state.size()) {
    throw Error(ErrorCode::dimension_mismatch, "need exactly one marker state per path");
  }
  const Basis& mbasis = markers.front().basis();
  for (const auto& m : markers) {
    if (!(m.basis() == mbasis)) throw Error(ErrorCode::basis_mismatch, "marker states must share one basis");
    if (!m.is_normalized()) throw Error(ErrorCode::not_normalized, "marker state is not normalized");
  }
  if (mbasis.contains(Subsystem::path)) throw Error(ErrorCode::subsystem_collision, "subsystem collision: path");

  const auto dm = static_cast<Eigen::Index>(mbasis.dimension());
  const auto np = static_cast<Eigen::Index>(path_state.size());
  ComplexVector out = ComplexVector::Zero(np * dm);
  for (Eigen::Index k = 0; k < np; ++k)
    out.segment(k * dm, dm) = path_state.amplitudes()(k) * markers[static_cast<std::size_t>(k)].amplitudes();

  std::vector<Register> joint = regs;
  for (const auto& r : mbasis.registers()) joint.push_back(r);
  return StateVector(Basis(std::move(joint)), std::move(out));
}

void PhotoDetectorSpec::validate() const {
  if (!finite(work_function) || work_function < 0.0) throw Error(ErrorCode::invalid_argument, "work function must be >= 0");
  if (!finite(coupling) || coupling < 0.0) throw Error(ErrorCode::invalid_argument, "coupling must be >= 0");
  if (!finite(field_amplitude) || field_amplitude < 0.0) {
    throw Error(ErrorCode::invalid_argument, "field amplitude must be >= 0");
  }
  if (!finite(ground_energy)) throw Error(ErrorCode::invalid_argument, "ground energy must be finite");
  for (std::size_t i = 0; i < density_of_states.size(); ++i) {
    const auto [e, rho] = density_of_states[i];
    if (!finite(e) || !finite(rho) || rho < 0.0) {
      throw Error(ErrorCode::invalid_argument, "density of states must be finite and non-negative");
    }
    if (i > 0 && !(e > density_of_states[i - 1].first)) {
      throw Error(ErrorCode::invalid_argument, "density of states energies must be strictly increasing");
    }
  }
}

double PhotoDetectorSpec::density(double excited_energy) const {
  if (excited_energy - ground_energy < work_function) return 0.0;
  const auto& t = density_of_states;
  if (t.empty() || excited_energy < t.front().first || excited_energy > t.back().first) return 0.0;
  auto hi = std::lower_bound(t.begin(), t.end(), excited_energy,
                             [](const auto& row, double e) { return row.first < e; });
  if (hi->first == excited_energy) return hi->second;
  auto lo = std::prev(hi);
  const double f = (excited_energy - lo->first) / (hi->first - lo->first);
  return lo->second + f * (hi->second - lo->second);
}

double photo_transition_rate(const PhotoDetectorSpec& spec, double omega) {
  const double e0 = spec.field_amplitude;
  return 0.5 * pi * spec.coupling * e0 * e0 * spec.density(spec.ground_energy + omega);
}

std::optional<double> photo_electron_energy(double omega, double work_function) {
  if (work_function < 0.0) throw Error(ErrorCode::invalid_argument, "work function must be >= 0");
  if (omega < work_function) return std::nullopt;
  return omega - work_function;
}

}  // namespace dualsim
