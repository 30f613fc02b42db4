#include <cmath>
#include <numbers>
#include <type_traits>

#include "dualsim/bundle.hpp"
#include "dualsim/error.hpp"
#include "dualsim/experiments.hpp"
#include "dualsim/montecarlo.hpp"

namespace dualsim {
namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

struct RunContext {
  const Scenario& scenario;
  std::uint64_t seed;
  Execution exec;
  ResultBundle& out;

  bool sampling() const { return scenario.wants(OutputKind::histogram) || scenario.wants(OutputKind::summary); }
  void pattern(const std::string& name, ScreenPattern p) const {
    if (scenario.wants(OutputKind::analytic_pattern)) out.patterns.emplace(name, std::move(p));
  }
  void histogram(const std::string& name, Histogram h) const {
    if (scenario.wants(OutputKind::histogram)) out.histograms.emplace(name, std::move(h));
  }
  void summary(RunSummary s) const {
    if (!scenario.wants(OutputKind::summary)) return;
    s.n_events = scenario.n_events;
    s.seed = seed;
    out.summary = std::move(s);
  }
};

double fraction(std::uint64_t k, std::uint64_t n) { return n == 0 ? 0.0 : static_cast<double>(k) / static_cast<double>(n); }

template <class Pred>
std::vector<EventRecord> select(const std::vector<EventRecord>& events, Pred pred) {
  std::vector<EventRecord> out;
  for (const auto& e : events)
    if (pred(e)) out.push_back(e);
  return out;
}

ScreenPattern detector_pattern(double p_dark, double p_bright) {
  ScreenPattern p;
  p.positions = {static_cast<double>(kDarkDetector), static_cast<double>(kBrightDetector)};
  p.intensities = {p_dark, p_bright};
  p.normalization = Normalization::per_event;
  p.provenance = Provenance::analytic;
  return p;
}

const std::vector<double> kDetectorEdges = {-0.5, 0.5, 1.5};

double detector_contrast(const Histogram& h) {
  const double d = static_cast<double>(h.counts[0]);
  const double b = static_cast<double>(h.counts[1]);
  return d + b > 0.0 ? std::abs(b - d) / (b + d) : 0.0;
}

void run(const RunContext& ctx, const DoubleSlitParams& p) {
  const auto grid = default_screen(p.geometry, p.screen.bins, p.screen.periods);
  const auto pattern = p.open_slits == OpenSlits::both
                           ? double_slit_pattern(p.geometry, p.overlap(), grid)
                           : single_slit_pattern(p.geometry, p.open_slits == OpenSlits::s1 ? Slit::s1 : Slit::s2, grid);
  ctx.pattern("screen", pattern);
  if (!ctx.sampling()) return;

  const auto events = sample_events(pattern, ctx.scenario.n_events, ctx.seed, ctx.exec);
  auto hist = accumulate(events, pattern.edges(), ctx.exec);
  RunSummary s;
  s.empirical_visibility = estimate_visibility(hist, *pattern.fringe);
  const auto chi = chi_square_test(hist, pattern);
  s.chi_square = chi.statistic;
  s.degrees_of_freedom = chi.dof;
  s.metrics["analytic_visibility"] = estimate_visibility(pattern);
  s.metrics["chi_square_pass"] = chi.pass ? 1.0 : 0.0;
  s.metrics["far_field"] = p.geometry.far_field() ? 1.0 : 0.0;
  s.metrics["fringe_period"] = p.geometry.fringe_period();
  s.metrics["marker_overlap"] = p.overlap();
  ctx.histogram("screen", std::move(hist));
  ctx.summary(std::move(s));
}

void run(const RunContext& ctx, const WhichPathParams& p) {
  const auto grid = default_screen(p.geometry, p.screen.bins, p.screen.periods);
  const WhichPathExperiment exp(p.geometry, grid);
  const auto marked = double_slit_pattern(p.geometry, true, grid);
  ctx.pattern("screen", marked);
  ctx.pattern("slit1", exp.slit_pattern(Slit::s1));
  ctx.pattern("slit2", exp.slit_pattern(Slit::s2));
  if (!ctx.sampling()) return;

  const RandomStream rng(ctx.seed);
  const auto events = run_trials(ctx.scenario.n_events, [&](std::uint64_t i) { return exp.trial(i, rng); }, ctx.exec);
  const auto d1 = select(events, [](const EventRecord& e) { return e.has(Tag::detector_d1); });
  const auto d2 = select(events, [](const EventRecord& e) { return e.has(Tag::detector_d2); });
  std::uint64_t coincidences = 0;
  for (const auto& e : events)
    if (e.has(Tag::detector_d1) && e.has(Tag::detector_d2)) ++coincidences;

  const auto edges = marked.edges();
  auto all = accumulate(events, edges, ctx.exec);
  auto h1 = accumulate(d1, edges, ctx.exec);
  auto h2 = accumulate(d2, edges, ctx.exec);

  RunSummary s;
  s.empirical_visibility = estimate_visibility(all, *marked.fringe);
  const auto chi = chi_square_test(all, marked);
  s.chi_square = chi.statistic;
  s.degrees_of_freedom = chi.dof;
  s.metrics["chi_square_pass"] = chi.pass ? 1.0 : 0.0;
  s.metrics["coincidences"] = static_cast<double>(coincidences);
  s.metrics["fraction_D1"] = fraction(d1.size(), events.size());
  s.metrics["fraction_D2"] = fraction(d2.size(), events.size());
  if (h2.total > 0) s.metrics["chi_square_pass_D2"] = chi_square_test(h2, exp.slit_pattern(Slit::s2)).pass ? 1.0 : 0.0;
  ctx.histogram("screen", std::move(all));
  ctx.histogram("D1", std::move(h1));
  ctx.histogram("D2", std::move(h2));
  ctx.summary(std::move(s));
}

void run(const RunContext& ctx, const NeutronParams& p) {
  const ScreenGrid chi_grid{0.0, kTwoPi, p.chi_bins};
  const auto chis = chi_grid.centers();
  std::vector<NeutronInterferometer> models;
  std::vector<double> intensity;
  for (double chi : chis) {
    models.emplace_back(p.absorber, p.psi_l, p.psi_r, chi);
    intensity.push_back(neutron_intensity(p.absorber, p.psi_l, p.psi_r, chi));
  }
  ScreenPattern analytic;
  analytic.positions = chis;
  analytic.intensities = intensity;
  analytic.normalization = Normalization::relative;
  analytic.provenance = Provenance::analytic;
  analytic.fringe = FringeModel{kTwoPi, std::numbers::pi, {}};
  ctx.pattern("intensity", analytic);
  if (!ctx.sampling()) return;

  const RandomStream rng(ctx.seed);
  const std::uint64_t m = p.chi_bins;
  const auto events = run_trials(
      ctx.scenario.n_events, [&](std::uint64_t i) { return models[i % m].trial(i, rng); }, ctx.exec);

  auto detector = Histogram::empty(chi_grid.edges());
  auto absorbed = Histogram::empty(chi_grid.edges());
  std::vector<std::uint64_t> per_bin(m, 0);
  for (const auto& e : events) {
    const auto bin = e.trial % m;
    ++per_bin[bin];
    if (e.outcome == Outcome::absorbed) {
      ++absorbed.counts[bin];
      ++absorbed.total;
    } else if (e.index == 1) {
      ++detector.counts[bin];
      ++detector.total;
    }
  }

  // Mean detector intensity per chi bin: twice the count fraction at port 1.
  std::vector<double> measured(m);
  ScreenPattern expected = analytic;
  for (std::size_t j = 0; j < m; ++j) {
    measured[j] = 2.0 * fraction(detector.counts[j], per_bin[j]);
    expected.intensities[j] = intensity[j] * static_cast<double>(per_bin[j]);
  }
  RunSummary s;
  s.empirical_visibility = estimate_visibility(chis, measured, *analytic.fringe);
  if (detector.total > 0) {
    const auto chi = chi_square_test(detector, expected);
    s.chi_square = chi.statistic;
    s.degrees_of_freedom = chi.dof;
    s.metrics["chi_square_pass"] = chi.pass ? 1.0 : 0.0;
  }
  const auto vis = absorber_visibility(p.absorber, p.psi_l, p.psi_r);
  s.metrics["visibility_raw"] = vis.raw;
  s.metrics["visibility_normalized"] = vis.normalized;
  s.metrics["absorbed_fraction"] = fraction(absorbed.total, events.size());
  s.metrics["absorbed_probability"] = models.front().absorbed_probability();
  const double transmitted_left = std::sqrt(p.absorber.transmission) * p.psi_l;
  if (transmitted_left + p.psi_r > 0.0) {
    const auto d = duality_params(p.psi_r, transmitted_left);
    s.metrics["W"] = d.W;
    s.metrics["P"] = d.P;
  }
  ctx.histogram("detector", std::move(detector));
  ctx.histogram("absorbed", std::move(absorbed));
  ctx.summary(std::move(s));
}

void run_interferometer(const RunContext& ctx, const MZConfig& cfg, ChoiceTiming timing) {
  const RandomStream rng(ctx.seed);
  const auto events = delayed_choice_run(cfg, ctx.scenario.n_events, rng, timing, ctx.exec);
  const auto present = select(events, [](const EventRecord& e) { return e.has(Tag::choice); });
  const auto absent = select(events, [](const EventRecord& e) { return !e.has(Tag::choice); });
  auto hp = accumulate(present, kDetectorEdges, ctx.exec);
  auto ha = accumulate(absent, kDetectorEdges, ctx.exec);

  RunSummary s;
  const auto with = mz_probabilities(true, cfg.arm_phase);
  const auto without = mz_probabilities(false, cfg.arm_phase);
  s.metrics["fraction_present"] = fraction(present.size(), events.size());
  s.metrics["present_p_bright"] = with.bright;
  s.metrics["present_p_dark"] = with.dark;
  s.metrics["absent_p_bright"] = without.bright;
  s.metrics["absent_p_dark"] = without.dark;
  s.metrics["present_fraction_dark"] = fraction(hp.counts[0], hp.total);
  s.metrics["present_fraction_bright"] = fraction(hp.counts[1], hp.total);
  s.metrics["absent_fraction_dark"] = fraction(ha.counts[0], ha.total);
  s.metrics["absent_fraction_bright"] = fraction(ha.counts[1], ha.total);
  // Visibility and goodness of fit describe the dominant branch.
  const bool main_present = hp.total >= ha.total;
  const auto& main = main_present ? hp : ha;
  s.empirical_visibility = detector_contrast(main);
  if (main.total > 0) {
    const auto p = main_present ? with : without;
    const auto chi = chi_square_test(main, detector_pattern(p.dark, p.bright));
    s.chi_square = chi.statistic;
    s.degrees_of_freedom = chi.dof;
  }
  if (hp.total > 0) ctx.histogram("present", std::move(hp));
  if (ha.total > 0) ctx.histogram("absent", std::move(ha));
  ctx.summary(std::move(s));
}

void run(const RunContext& ctx, const MachZehnderParams& p) {
  const auto probs = mz_probabilities(p.bs2_present, p.arm_phase);
  ctx.pattern("detectors", detector_pattern(probs.dark, probs.bright));
  if (!ctx.sampling()) return;
  MZConfig cfg;
  cfg.bs2_present = p.bs2_present;
  cfg.arm_phase = p.arm_phase;
  run_interferometer(ctx, cfg, ChoiceTiming::after_propagation);
  if (ctx.out.summary) {
    ctx.out.summary->metrics["p_bright"] = probs.bright;
    ctx.out.summary->metrics["p_dark"] = probs.dark;
  }
}

void run(const RunContext& ctx, const DelayedChoiceParams& p) {
  const auto with = mz_probabilities(true, p.arm_phase);
  const auto without = mz_probabilities(false, p.arm_phase);
  ctx.pattern("present", detector_pattern(with.dark, with.bright));
  ctx.pattern("absent", detector_pattern(without.dark, without.bright));
  if (!ctx.sampling()) return;
  MZConfig cfg;
  cfg.arm_phase = p.arm_phase;
  cfg.choice_probability = p.choice_probability;
  cfg.choice_seed = p.choice_seed.value_or(ctx.seed ^ 0xc401ce5eedULL);
  run_interferometer(ctx, cfg, p.choice_timing);
}

void run(const RunContext& ctx, const EraserParams& p) {
  const auto grid = default_screen(p.geometry, p.screen.bins, p.screen.periods);
  const EraserConfig cfg{p.tag_slits, p.eraser, p.post_select};
  const EraserExperiment exp(cfg, p.geometry, grid);
  const auto& pats = exp.patterns();
  ctx.pattern("all", pats.all);
  if (pats.selected) ctx.pattern("selected", *pats.selected);
  if (!ctx.sampling()) return;

  const RandomStream rng(ctx.seed);
  const auto events = run_trials(ctx.scenario.n_events, [&](std::uint64_t i) { return exp.trial(i, rng); }, ctx.exec);
  const auto edges = pats.all.edges();
  auto all = accumulate(events, edges, ctx.exec);

  RunSummary s;
  const auto chi = chi_square_test(all, pats.all);
  s.chi_square = chi.statistic;
  s.degrees_of_freedom = chi.dof;
  s.metrics["chi_square_pass"] = chi.pass ? 1.0 : 0.0;
  s.metrics["analytic_visibility_all"] = estimate_visibility(pats.all);
  s.empirical_visibility = estimate_visibility(all, *pats.all.fringe);
  if (p.eraser) s.metrics["selected_fraction"] = pats.selected_fraction;
  if (pats.selected) {
    const auto passed = select(events, [](const EventRecord& e) { return e.has(Tag::polarizer_pass); });
    auto sel = accumulate(passed, edges, ctx.exec);
    s.metrics["analytic_visibility_selected"] = estimate_visibility(*pats.selected);
    s.metrics["empirical_selected_fraction"] = fraction(passed.size(), events.size());
    if (sel.total > 0) s.empirical_visibility = estimate_visibility(sel, *pats.selected->fringe);
    ctx.histogram("selected", std::move(sel));
  }
  ctx.histogram("all", std::move(all));
  ctx.summary(std::move(s));
}

void run(const RunContext& ctx, const PhotoelectricParams& p) {
  const auto spectrum = photo_rate_spectrum(p.detector, p.omega);
  ctx.pattern("rate", spectrum);
  if (!ctx.sampling()) return;

  RunSummary s;
  auto hist = Histogram::empty(p.omega.edges());
  s.metrics["work_function"] = p.detector.work_function;
  s.metrics["total_rate"] = spectrum.total();
  if (spectrum.total() > 0.0) {
    const auto shape = spectrum.normalized();
    const auto events = sample_events(shape, ctx.scenario.n_events, ctx.seed, ctx.exec);
    hist = accumulate(events, p.omega.edges(), ctx.exec);
    double energy = 0.0;
    std::uint64_t emitted = 0;
    for (const auto& e : events) {
      if (auto k = photo_electron_energy(e.position, p.detector.work_function)) {
        energy += *k;
        ++emitted;
      }
    }
    s.metrics["mean_kinetic_energy"] = emitted > 0 ? energy / static_cast<double>(emitted) : 0.0;
    const auto chi = chi_square_test(hist, shape);
    s.chi_square = chi.statistic;
    s.degrees_of_freedom = chi.dof;
  }
  ctx.histogram("omega", std::move(hist));
  ctx.summary(std::move(s));
}

}  // namespace

std::string_view tool_version() { return DUALSIM_VERSION; }

ResultBundle run_scenario(const Scenario& s, Execution exec) {
  ResultBundle out;
  out.scenario = s;
  out.tool_version = std::string(tool_version());
  const RunContext ctx{s, s.seed.value_or(0), exec, out};
  try {
    std::visit([&](const auto& params) { run(ctx, params); }, s.params);
  } catch (const Error& e) {
    throw Error(e.code(), "scenario '" + s.name + "': " + e.what());
  }
  return out;
}

}  // namespace dualsim
