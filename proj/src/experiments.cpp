#include "dualsim/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>

#include "dualsim/error.hpp"
#include "dualsim/measure.hpp"
#include "dualsim/montecarlo.hpp"

namespace dualsim {
namespace {

using std::numbers::pi;

StateVector equal_superposition() {
  const double h = 1.0 / std::numbers::sqrt2;
  return StateVector(path_register(), {h, h});
}

PathCoherence coherence_of(const DensityMatrix& rho) {
  if (rho.dim() != 2 || rho.basis().registers().front().subsystem != Subsystem::path) {
    throw Error(ErrorCode::invalid_argument, "screen pattern needs a two-path density matrix");
  }
  return {rho(0, 0).real(), rho(1, 1).real(), rho(0, 1)};
}

Operator marker_projector(std::size_t index, const Basis& basis) {
  return embed(register_projectors(marker_register())[index], Subsystem::marker, basis);
}

void check_amplitudes(double psi_l, double psi_r) {
  if (!(psi_l >= 0.0 && psi_r >= 0.0) || !std::isfinite(psi_l) || !std::isfinite(psi_r)) {
    throw Error(ErrorCode::invalid_argument, "arm amplitudes must be finite and non-negative");
  }
}

}  // namespace

double double_slit_intensity(double overlap, double theta) { return 1.0 + overlap * std::cos(theta); }

ScreenGrid default_screen(const SlitGeometry& g, std::size_t bins, double periods) {
  g.validate();
  return ScreenGrid::symmetric(periods * g.fringe_period(), bins);
}

FringeModel slit_fringe_model(const SlitGeometry& g, const ScreenGrid& grid) {
  FringeModel m;
  m.period = g.fringe_period();
  m.center = 0.0;
  m.envelope.reserve(grid.bins);
  for (std::size_t i = 0; i < grid.bins; ++i) m.envelope.push_back(single_slit_intensity(grid.center(i), g));
  return m;
}

DensityMatrix marked_path_density(double overlap) {
  if (!(overlap >= 0.0 && overlap <= 1.0)) throw Error(ErrorCode::invalid_argument, "marker overlap must lie in [0, 1]");
  const std::array<StateVector, 2> markers = {
      StateVector(marker_register(), {1.0, 0.0}),
      StateVector(marker_register(), {overlap, std::sqrt(1.0 - overlap * overlap)}),
  };
  const auto joint = attach_which_path(equal_superposition(), markers);
  return partial_trace(density_from_pure(joint), {Subsystem::path});
}

ScreenPattern screen_pattern(const DensityMatrix& path_rho, const SlitGeometry& g, const ScreenGrid& grid,
                             Execution exec) {
  g.validate();
  grid.validate();
  const auto rho = coherence_of(path_rho);
  const auto xs = grid.centers();
  auto values = exec == Execution::serial ? serial::screen_intensities(rho, g, xs) : omp::screen_intensities(rho, g, xs);
  return make_pattern(grid, std::move(values), slit_fringe_model(g, grid));
}

ScreenPattern double_slit_pattern(const SlitGeometry& g, bool marked, const ScreenGrid& grid) {
  return double_slit_pattern(g, marked ? 0.0 : 1.0, grid);
}

ScreenPattern double_slit_pattern(const SlitGeometry& g, double marker_overlap, const ScreenGrid& grid) {
  return screen_pattern(marked_path_density(marker_overlap), g, grid);
}

ScreenPattern single_slit_pattern(const SlitGeometry& g, Slit open, const ScreenGrid& grid) {
  const auto s = StateVector::basis_state(path_register(), static_cast<std::size_t>(open));
  return screen_pattern(density_from_pure(s), g, grid);
}

WhichPathExperiment::WhichPathExperiment(const SlitGeometry& g, const ScreenGrid& grid)
    : grid_(grid),
      state_(attach_which_path(equal_superposition(),
                               std::array{StateVector::basis_state(marker_register(), 0),
                                          StateVector::basis_state(marker_register(), 1)})),
      d1_(marker_projector(0, state_.basis())),
      d2_(marker_projector(1, state_.basis())),
      patterns_{single_slit_pattern(g, Slit::s1, grid), single_slit_pattern(g, Slit::s2, grid)},
      samplers_{make_sampler(patterns_[0]), make_sampler(patterns_[1])} {}

EventRecord WhichPathExperiment::trial(std::uint64_t index, const RandomStream& rng) const {
  auto first_stream = rng.substream(index, Channel::which_path);
  const auto first = project(state_, d1_, first_stream);
  auto second_stream = rng.substream(index, Channel::which_path_check);
  const auto second = project(first.collapsed, d2_, second_stream);

  const auto slit = first.outcome ? Slit::s1 : Slit::s2;
  auto e = sample_screen_event(samplers_[static_cast<std::size_t>(slit)], index,
                               rng.substream(index, Channel::screen));
  e.set(Tag::detector_d1, first.outcome);
  e.set(Tag::detector_d2, second.outcome);
  return e;
}

EventRecord which_path_trial(const WhichPathExperiment& exp, std::uint64_t trial, const RandomStream& rng) {
  return exp.trial(trial, rng);
}

double neutron_intensity(const AbsorberSpec& spec, double psi_l, double psi_r, double chi) {
  spec.validate();
  check_amplitudes(psi_l, psi_r);
  const double a = spec.transmission;
  const double c = spec.mode == AbsorberMode::stochastic ? std::sqrt(a) : a;
  return std::max(0.0, a * psi_l * psi_l + psi_r * psi_r + 2.0 * c * psi_l * psi_r * std::cos(chi));
}

AbsorberVisibility absorber_visibility(const AbsorberSpec& spec, double psi_l, double psi_r) {
  spec.validate();
  check_amplitudes(psi_l, psi_r);
  const double a = spec.transmission;
  const double mean = a * psi_l * psi_l + psi_r * psi_r;
  if (!(mean > 0.0)) return {0.0, 0.0};
  const double c = spec.mode == AbsorberMode::stochastic ? std::sqrt(a) : a;
  const double raw = 2.0 * c * psi_l * psi_r / mean;
  const double best = 2.0 * std::sqrt(a) * psi_l * psi_r / mean;
  return {raw, best > 0.0 ? raw / best : 0.0};
}

NeutronInterferometer::NeutronInterferometer(const AbsorberSpec& spec, double psi_l, double psi_r, double chi)
    : spec_(spec), psi_l_(psi_l) {
  spec.validate();
  check_amplitudes(psi_l, psi_r);
  if (std::abs(psi_l * psi_l + psi_r * psi_r - 1.0) > kChainTol) {
    throw Error(ErrorCode::not_normalized, "arm amplitudes must satisfy psi_L^2 + psi_R^2 = 1");
  }
  const auto bs = beam_splitter(0.5);
  const auto shift = phase_shifter(chi, 0);
  const auto projectors = register_projectors(path_register());
  // Left arm is path index 0; the right arm carries the reflection phase i.
  auto ports = [&](double left) -> std::array<double, 2> {
    const StateVector arms(path_register(), {left, Amplitude{0.0, psi_r}});
    if (arms.norm() == 0.0) return {0.5, 0.5};
    const auto out = apply_unitary(bs, apply_unitary(shift, arms.normalized()));
    const auto p = born_probabilities(out, projectors);
    return {p[0], p[1]};
  };

  if (spec.mode == AbsorberMode::stochastic) {
    const auto f = stochastic_absorber_amplitude(spec);
    absorbed_[0] = f.absorbed_weight * psi_l * psi_l;
    ports_[0] = ports(f.amplitude * psi_l);
  } else {
    absorbed_ = {0.0, psi_l * psi_l};
    ports_[0] = ports(psi_l);
    ports_[1] = ports(0.0);
  }
}

double NeutronInterferometer::absorbed_probability() const {
  if (spec_.mode == AbsorberMode::stochastic) return absorbed_[0];
  const double a = spec_.transmission;
  return a * absorbed_[0] + (1.0 - a) * absorbed_[1];
}

double NeutronInterferometer::detector_probability(int detector) const {
  const auto d = static_cast<std::size_t>(detector);
  if (spec_.mode == AbsorberMode::stochastic) return (1.0 - absorbed_[0]) * ports_[0][d];
  const double a = spec_.transmission;
  return a * (1.0 - absorbed_[0]) * ports_[0][d] + (1.0 - a) * (1.0 - absorbed_[1]) * ports_[1][d];
}

EventRecord NeutronInterferometer::trial(std::uint64_t index, const RandomStream& rng) const {
  std::size_t branch = 0;
  bool open = true;
  if (spec_.mode == AbsorberMode::deterministic_chopper) {
    open = chopper_state(spec_, index, rng);
    branch = open ? 0 : 1;
  }
  EventRecord e;
  auto absorber = rng.substream(index, Channel::absorber);
  if (absorber.uniform() < absorbed_[branch]) {
    e.trial = index;
    e.outcome = Outcome::absorbed;
    e.set(Tag::absorbed, true);
  } else {
    auto detector = rng.substream(index, Channel::detector);
    e = detector_event(index, detector.uniform() < ports_[branch][0] ? 0 : 1);
    e.set(Tag::absorbed, false);
  }
  if (spec_.mode == AbsorberMode::deterministic_chopper) e.set(Tag::chopper_open, open);
  return e;
}

EventRecord neutron_mc_trial(const AbsorberSpec& spec, double psi_l, double psi_r, double chi, std::uint64_t trial,
                             const RandomStream& rng) {
  return NeutronInterferometer(spec, psi_l, psi_r, chi).trial(trial, rng);
}

DualityParams duality_params(double a, double b) {
  if (!std::isfinite(a) || !std::isfinite(b) || a < 0.0 || b < 0.0) {
    throw Error(ErrorCode::invalid_argument, "duality amplitudes must be finite and non-negative");
  }
  const double s = a * a + b * b;
  if (!(s > 0.0)) throw Error(ErrorCode::undefined_duality, "undefined duality");
  return {2.0 * a * b / s, (a * a - b * b) / s, std::atan2(b, a), std::sqrt(s)};
}

double two_beam_intensity(double a, double b, double x, double period, double phi) {
  return a * a + b * b + 2.0 * a * b * std::cos(2.0 * pi * x / period + phi);
}

ScreenPattern two_beam_pattern(double a, double b, double period, const ScreenGrid& grid) {
  duality_params(a, b);
  if (!(period > 0.0)) throw Error(ErrorCode::invalid_argument, "fringe period must be positive");
  grid.validate();
  std::vector<double> values(grid.bins);
  for (std::size_t i = 0; i < grid.bins; ++i) values[i] = std::max(0.0, two_beam_intensity(a, b, grid.center(i), period));
  return make_pattern(grid, std::move(values), FringeModel{period, 0.0, {}});
}

VisibilityCheck fringe_visibility_equals_W(double a, double b) {
  const auto d = duality_params(a, b);
  // Even sample count over one period hits both cos = +1 and cos = -1.
  constexpr int kSamples = 4096;
  double hi = -1.0;
  double lo = std::numeric_limits<double>::infinity();
  for (int j = 0; j < kSamples; ++j) {
    const double v = two_beam_intensity(a, b, static_cast<double>(j) / kSamples, 1.0);
    hi = std::max(hi, v);
    lo = std::min(lo, v);
  }
  return {(hi - lo) / (hi + lo), d.W};
}

void MZConfig::validate() const {
  if (choice_probability && !(*choice_probability >= 0.0 && *choice_probability <= 1.0)) {
    throw Error(ErrorCode::invalid_argument, "choice probability must lie in [0, 1]");
  }
  if (!std::isfinite(arm_phase)) throw Error(ErrorCode::invalid_argument, "arm phase must be finite");
}

MZProbabilities mz_probabilities(bool bs2_present, double arm_phase) {
  const auto bs = beam_splitter(0.5);
  auto s = apply_unitary(bs, StateVector::basis_state(path_register(), 0));
  s = apply_unitary(phase_shifter(arm_phase, 1), s);
  if (bs2_present) s = apply_unitary(bs, s);
  const auto p = born_probabilities(s, register_projectors(path_register()));
  return {p[kBrightDetector], p[kDarkDetector]};
}

MZProbabilities mz_probabilities(const MZConfig& cfg) {
  cfg.validate();
  return mz_probabilities(cfg.bs2_present, cfg.arm_phase);
}

std::vector<EventRecord> delayed_choice_run(const MZConfig& cfg, std::uint64_t n_trials, const RandomStream& rng,
                                            ChoiceTiming timing, Execution exec) {
  cfg.validate();
  if (!cfg.schedule.empty() && cfg.schedule.size() != n_trials) {
    throw Error(ErrorCode::invalid_argument, "choice schedule must hold exactly one entry per trial");
  }
  const auto bs = beam_splitter(0.5);
  const auto shift = phase_shifter(cfg.arm_phase, 1);
  const auto projectors = register_projectors(path_register());
  const auto input = StateVector::basis_state(path_register(), 0);
  const RandomStream choice_stream(cfg.choice_seed);

  auto choose = [&](std::uint64_t i) {
    if (!cfg.schedule.empty()) return static_cast<bool>(cfg.schedule[i]);
    if (cfg.choice_probability) {
      auto s = choice_stream.substream(i, Channel::choice);
      return s.uniform() < *cfg.choice_probability;
    }
    return cfg.bs2_present;
  };

  auto trial = [&](std::uint64_t i) {
    std::uint32_t tick = 0;
    Timeline timeline;
    bool insert_bs2 = false;
    if (timing == ChoiceTiming::before_entry) {
      insert_bs2 = choose(i);
      timeline.choice = tick++;
    }
    timeline.entry = tick++;
    auto state = apply_unitary(shift, apply_unitary(bs, input));
    ++tick;  // both arms traversed
    if (timing == ChoiceTiming::after_propagation) {
      insert_bs2 = choose(i);
      timeline.choice = tick++;
    }
    if (insert_bs2) state = apply_unitary(bs, state);

    const auto p = born_probabilities(state, projectors);
    auto detect = rng.substream(i, Channel::detector);
    auto e = detector_event(i, detect.uniform() < p[kDarkDetector] ? kDarkDetector : kBrightDetector);
    e.set(Tag::choice, insert_bs2);
    e.timeline = timeline;
    return e;
  };
  return run_trials(n_trials, trial, exec);
}

void EraserConfig::validate() const {
  if (post_select && !eraser) throw Error(ErrorCode::invalid_argument, "post-selection requires an eraser polarizer");
}

EraserPatterns eraser_patterns(const EraserConfig& cfg, const SlitGeometry& g, const ScreenGrid& grid) {
  cfg.validate();
  g.validate();
  grid.validate();
  const auto horizontal = StateVector::basis_state(polarization_register(), 0);
  const auto pol1 = cfg.tag_slits ? polarization_state(PolarizerSpec::circular_left()) : horizontal;
  const auto pol2 = cfg.tag_slits ? polarization_state(PolarizerSpec::circular_right()) : horizontal;

  // Slit/polarization state (|S1>|p1> + |S2>|p2>)/sqrt 2.
  const auto joint = attach_which_path(equal_superposition(), std::array{pol1, pol2});
  std::optional<Operator> filter;
  if (cfg.eraser) filter = embed(polarizer_projector(*cfg.eraser), Subsystem::polarization, joint.basis());

  std::vector<double> all(grid.bins), passed(grid.bins);
  for (std::size_t i = 0; i < grid.bins; ++i) {
    const double x = grid.center(i);
    const Amplitude a1 = slit_amplitude(x, Slit::s1, g);
    const Amplitude a2 = slit_amplitude(x, Slit::s2, g);
    // Screen amplitude at x as a polarization vector: sum_k A_k <S_k| joint.
    ComplexVector at_x = a1 * joint.amplitudes().segment(0, 2) + a2 * joint.amplitudes().segment(2, 2);
    all[i] = at_x.squaredNorm();
    if (filter) {
      ComplexVector full(4);
      full << a1 * joint.amplitudes().segment(0, 2), a2 * joint.amplitudes().segment(2, 2);
      const ComplexVector kept = filter->matrix() * full;
      const ComplexVector kept_x = kept.segment(0, 2) + kept.segment(2, 2);
      passed[i] = kept_x.squaredNorm();
    }
  }

  EraserPatterns out;
  const auto model = slit_fringe_model(g, grid);
  const double total = std::accumulate(all.begin(), all.end(), 0.0);
  if (cfg.eraser) {
    double sel = 0.0;
    for (double& v : passed) {
      v /= total;
      sel += v;
    }
    out.selected_fraction = sel;
    if (cfg.post_select) {
      ScreenPattern p;
      p.positions = grid.centers();
      p.intensities = std::move(passed);
      p.normalization = Normalization::relative;
      p.provenance = Provenance::analytic;
      p.fringe = model;
      out.selected = std::move(p);
    }
  }
  out.all = make_pattern(grid, std::move(all), model);
  return out;
}

EraserExperiment::EraserExperiment(const EraserConfig& cfg, const SlitGeometry& g, const ScreenGrid& grid)
    : patterns_(eraser_patterns(cfg.eraser && !cfg.post_select ? EraserConfig{cfg.tag_slits, cfg.eraser, true} : cfg,
                                g, grid)),
      sampler_(make_sampler(patterns_.all)) {
  if (patterns_.selected) {
    pass_given_bin_.resize(patterns_.all.size());
    for (std::size_t i = 0; i < pass_given_bin_.size(); ++i) {
      const double all = patterns_.all.intensities[i];
      pass_given_bin_[i] = all > 0.0 ? std::clamp(patterns_.selected->intensities[i] / all, 0.0, 1.0) : 0.0;
    }
  }
  if (!cfg.post_select) patterns_.selected.reset();
}

EventRecord EraserExperiment::trial(std::uint64_t index, const RandomStream& rng) const {
  auto e = sample_screen_event(sampler_, index, rng.substream(index, Channel::screen));
  if (!pass_given_bin_.empty()) {
    auto pol = rng.substream(index, Channel::polarizer);
    e.set(Tag::polarizer_pass, pol.uniform() < pass_given_bin_[static_cast<std::size_t>(e.index)]);
  }
  return e;
}

ScreenPattern photo_rate_spectrum(const PhotoDetectorSpec& spec, const ScreenGrid& omega_grid) {
  spec.validate();
  omega_grid.validate();
  ScreenPattern p;
  p.positions = omega_grid.centers();
  p.intensities.reserve(omega_grid.bins);
  for (double w : p.positions) p.intensities.push_back(photo_transition_rate(spec, w));
  p.normalization = Normalization::relative;
  p.provenance = Provenance::analytic;
  return p;
}

}  // namespace dualsim
