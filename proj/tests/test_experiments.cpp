#include <cmath>
#include <numbers>
#include <random>

#include <gtest/gtest.h>

#include "dualsim/density.hpp"
#include "dualsim/error.hpp"
#include "dualsim/experiments.hpp"
#include "dualsim/montecarlo.hpp"

using namespace dualsim;

namespace {

constexpr double kPi = std::numbers::pi;

double binomial_sigma(double p, std::uint64_t n) { return std::sqrt(p * (1 - p) / static_cast<double>(n)); }

// Closed forms for the two absorber modes, written independently of the library.
double stochastic_oracle(double a, double l, double r, double chi) {
  return a * l * l + r * r + 2 * std::sqrt(a) * l * r * std::cos(chi);
}
double chopper_oracle(double a, double l, double r, double chi) {
  return a * l * l + r * r + 2 * a * l * r * std::cos(chi);
}

}  // namespace

TEST(DoubleSlitIntensity, Examples) {
  EXPECT_DOUBLE_EQ(double_slit_intensity(1.0, 0.0), 2.0);
  EXPECT_NEAR(double_slit_intensity(1.0, kPi), 0.0, 1e-15);
  for (double t : {0.0, 1.0, 2.5, kPi}) EXPECT_DOUBLE_EQ(double_slit_intensity(0.0, t), 1.0);
}

TEST(DoubleSlitPattern, AdjacentMaximaOneFringePeriodApart) {
  const SlitGeometry g;
  const ScreenGrid grid = ScreenGrid::symmetric(2.5 * g.fringe_period(), 2001);
  const auto p = double_slit_pattern(g, false, grid);
  std::vector<double> maxima;
  for (std::size_t i = 1; i + 1 < p.size(); ++i) {
    const auto& v = p.intensities;
    if (v[i] > v[i - 1] && v[i] > v[i + 1]) {
      // parabolic refinement
      const double denom = v[i - 1] - 2 * v[i] + v[i + 1];
      maxima.push_back(p.positions[i] + 0.5 * grid.width() * (v[i - 1] - v[i + 1]) / denom);
    }
  }
  ASSERT_GE(maxima.size(), 3u);
  const auto centre = std::min_element(maxima.begin(), maxima.end(), [](double a, double b) {
    return std::abs(a) < std::abs(b);
  });
  EXPECT_LT(std::abs(*centre), grid.width());
  // Adjacent maxima sit one period apart up to the weak sinc^2 pull.
  EXPECT_NEAR(*(centre + 1) - *centre, g.fringe_period(), 2 * grid.width());
}

TEST(DoubleSlitPattern, MarkedHasNoFringes) {
  const SlitGeometry g;
  const auto grid = default_screen(g);
  EXPECT_LT(estimate_visibility(double_slit_pattern(g, true, grid)), 1e-9);
  EXPECT_NEAR(estimate_visibility(double_slit_pattern(g, false, grid)), 1.0, 1e-9);
}

TEST(DoubleSlitPattern, VisibilityScalesWithMarkerOverlap) {
  const SlitGeometry g;
  const auto grid = default_screen(g);
  const double unmarked = estimate_visibility(double_slit_pattern(g, false, grid));
  for (double m = 0.0; m <= 1.0; m += 0.125) {
    EXPECT_NEAR(estimate_visibility(double_slit_pattern(g, m, grid)), m * unmarked, 1e-10) << m;
    EXPECT_NEAR(path_coherence(marked_path_density(m)), m, 1e-12);
  }
}

TEST(DoubleSlitPattern, OneSlitClosedIsSingleSlitDiffraction) {
  const SlitGeometry g{10.0, 1.0, 1e4};
  const auto grid = ScreenGrid::symmetric(2.0 * g.first_envelope_zero(), 400);
  const auto p = single_slit_pattern(g, Slit::s2, grid);
  auto sinc2 = [&](double x) {
    const double u = kPi * g.width * x / (g.wavelength * g.screen_distance);
    return u == 0.0 ? 1.0 : std::pow(std::sin(u) / u, 2);
  };
  const std::size_t ref = p.size() / 2;
  for (std::size_t i = 0; i < p.size(); ++i) {
    EXPECT_NEAR(p.intensities[i] / p.intensities[ref], sinc2(p.positions[i]) / sinc2(p.positions[ref]), 1e-9);
  }
}

TEST(WhichPath, AntiCoincidenceAndEvenSplit) {
  const SlitGeometry g;
  const WhichPathExperiment exp(g, default_screen(g));
  const RandomStream rng(21);
  const std::uint64_t n = 100000;
  std::uint64_t d1 = 0, d2 = 0, both = 0;
  for (std::uint64_t i = 0; i < n; ++i) {
    const auto e = exp.trial(i, rng);
    d1 += e.has(Tag::detector_d1);
    d2 += e.has(Tag::detector_d2);
    both += e.has(Tag::detector_d1) && e.has(Tag::detector_d2);
    ASSERT_TRUE(e.has(Tag::detector_d1) != e.has(Tag::detector_d2));
  }
  EXPECT_EQ(both, 0u);
  EXPECT_NEAR(static_cast<double>(d1) / n, 0.5, 4 * binomial_sigma(0.5, n));
  EXPECT_EQ(d1 + d2, n);
}

TEST(WhichPath, ConditionalScreenMatchesSingleSlit) {
  const SlitGeometry g;
  const auto grid = default_screen(g);
  const WhichPathExperiment exp(g, grid);
  const RandomStream rng(22);
  std::vector<EventRecord> d2;
  for (std::uint64_t i = 0; i < 100000; ++i) {
    const auto e = exp.trial(i, rng);
    if (e.has(Tag::detector_d2)) d2.push_back(e);
  }
  const auto& slit2 = exp.slit_pattern(Slit::s2);
  EXPECT_TRUE(chi_square_test(accumulate(d2, slit2.edges()), slit2).pass);
}

TEST(WhichPath, EntangledStateReducesToMixture) {
  const SlitGeometry g;
  const WhichPathExperiment exp(g, default_screen(g));
  const auto rho = partial_trace(density_from_pure(exp.entangled_state()), {Subsystem::path});
  EXPECT_LT(std::abs(rho(0, 1)), 1e-12);
}

TEST(NeutronIntensity, Examples) {
  for (double chi : {0.0, 1.0, kPi}) {
    EXPECT_DOUBLE_EQ(neutron_intensity({1.0, AbsorberMode::stochastic}, 0.6, 0.8, chi),
                     neutron_intensity({1.0, AbsorberMode::deterministic_chopper}, 0.6, 0.8, chi));
    EXPECT_NEAR(neutron_intensity({0.0, AbsorberMode::stochastic}, 0.6, 0.8, chi), 0.64, 1e-15);
    EXPECT_NEAR(neutron_intensity({0.0, AbsorberMode::deterministic_chopper}, 0.6, 0.8, chi), 0.64, 1e-15);
  }
  EXPECT_NEAR(neutron_intensity({0.01, AbsorberMode::stochastic}, 1, 1, 0), 1.21, 1e-12);
  EXPECT_NEAR(neutron_intensity({0.01, AbsorberMode::deterministic_chopper}, 1, 1, 0), 1.03, 1e-12);
}

TEST(NeutronIntensity, MatchesClosedFormsAndOrdering) {
  std::mt19937_64 gen(23);
  std::uniform_real_distribution<double> u(0, 1);
  for (int k = 0; k < 200; ++k) {
    const double a = u(gen), l = u(gen), r = u(gen), chi = 2 * kPi * u(gen);
    EXPECT_NEAR(neutron_intensity({a, AbsorberMode::stochastic}, l, r, chi), stochastic_oracle(a, l, r, chi), 1e-12);
    EXPECT_NEAR(neutron_intensity({a, AbsorberMode::deterministic_chopper}, l, r, chi), chopper_oracle(a, l, r, chi),
                1e-12);
    EXPECT_GE(std::sqrt(a), a);
  }
}

TEST(NeutronInterferometer, MonteCarloMatchesClosedForm) {
  const double l = std::sqrt(0.5), r = std::sqrt(0.5);
  const std::size_t bins = 8;
  const std::uint64_t n = 1000000;
  for (auto mode : {AbsorberMode::stochastic, AbsorberMode::deterministic_chopper}) {
    const AbsorberSpec spec{0.25, mode};
    const RandomStream rng(mode == AbsorberMode::stochastic ? 24 : 25);
    std::vector<NeutronInterferometer> models;
    for (std::size_t j = 0; j < bins; ++j) models.emplace_back(spec, l, r, (j + 0.5) * 2 * kPi / bins);
    std::vector<std::uint64_t> port1(bins, 0);
    for (std::uint64_t i = 0; i < n; ++i) {
      const auto e = models[i % bins].trial(i, rng);
      if (e.outcome == Outcome::detector && e.index == 1) ++port1[i % bins];
    }
    for (std::size_t j = 0; j < bins; ++j) {
      const double chi = (j + 0.5) * 2 * kPi / bins;
      const double expected = mode == AbsorberMode::stochastic ? stochastic_oracle(0.25, l, r, chi)
                                                               : chopper_oracle(0.25, l, r, chi);
      const double per_bin = static_cast<double>(n / bins);
      const double p = expected / 2;
      EXPECT_NEAR(2 * port1[j] / per_bin, expected, 3 * 2 * binomial_sigma(p, n / bins)) << j;
    }
  }
}

TEST(NeutronInterferometer, FullTransmissionNeverAbsorbs) {
  const NeutronInterferometer m({1.0, AbsorberMode::stochastic}, 0.6, 0.8, 0.3);
  EXPECT_EQ(m.absorbed_probability(), 0.0);
  const RandomStream rng(26);
  for (std::uint64_t i = 0; i < 10000; ++i) EXPECT_NE(m.trial(i, rng).outcome, Outcome::absorbed);
}

TEST(NeutronInterferometer, AbsorbedProbability) {
  const NeutronInterferometer m({0.3, AbsorberMode::stochastic}, 0.6, 0.8, 0.0);
  EXPECT_NEAR(m.absorbed_probability(), 0.7 * 0.36, 1e-15);
  EXPECT_NEAR(m.detector_probability(0) + m.detector_probability(1) + m.absorbed_probability(), 1.0, 1e-12);
}

TEST(AbsorberVisibility, RawAndNormalized) {
  const auto s = absorber_visibility({0.01, AbsorberMode::stochastic}, std::sqrt(0.5), std::sqrt(0.5));
  const auto c = absorber_visibility({0.01, AbsorberMode::deterministic_chopper}, std::sqrt(0.5), std::sqrt(0.5));
  // raw: 2 c l r / (a l^2 + r^2)
  EXPECT_NEAR(s.raw, 2 * 0.1 * 0.5 / (0.005 + 0.5), 1e-12);
  EXPECT_NEAR(c.raw, 2 * 0.01 * 0.5 / (0.005 + 0.5), 1e-12);
  EXPECT_NEAR(s.normalized, 1.0, 1e-12);
  EXPECT_NEAR(c.normalized, 0.1, 1e-12);
}

TEST(Duality, Examples) {
  const auto eq = duality_params(1.0, 1.0);
  EXPECT_DOUBLE_EQ(eq.W, 1.0);
  EXPECT_DOUBLE_EQ(eq.P, 0.0);
  const auto one = duality_params(1.0, 0.0);
  EXPECT_DOUBLE_EQ(one.P, 1.0);
  EXPECT_DOUBLE_EQ(one.W, 0.0);
  const auto d = duality_params(2.0, 1.0);
  EXPECT_NEAR(d.W, 0.8, 1e-15);
  EXPECT_NEAR(d.P, 0.6, 1e-15);
  EXPECT_NEAR(d.R, std::sqrt(5.0), 1e-15);
  EXPECT_NEAR(d.beta, std::atan2(1.0, 2.0), 1e-15);
  try {
    duality_params(0.0, 0.0);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.code(), ErrorCode::undefined_duality);
  }
}

TEST(Duality, RelationAndAngleForm) {
  std::mt19937_64 gen(27);
  std::uniform_real_distribution<double> u(0, 10);
  for (int k = 0; k < 10000; ++k) {
    const auto d = duality_params(u(gen), u(gen));
    ASSERT_LT(std::abs(d.P * d.P + d.W * d.W - 1.0), 1e-12);
    ASSERT_LT(std::abs(d.W - std::sin(2 * d.beta)), 1e-12);
    ASSERT_LT(std::abs(d.P - std::cos(2 * d.beta)), 1e-12);
  }
}

TEST(FringeVisibility, EqualsW) {
  EXPECT_NEAR(fringe_visibility_equals_W(1, 1).V, 1.0, 1e-12);
  EXPECT_NEAR(fringe_visibility_equals_W(1, 0).V, 0.0, 1e-12);
  const auto c = fringe_visibility_equals_W(2, 1);
  EXPECT_NEAR(c.V, 0.8, 1e-12);
  EXPECT_NEAR(c.W, 0.8, 1e-12);
}

TEST(MachZehnder, Probabilities) {
  const auto balanced = mz_probabilities(true, 0.0);
  EXPECT_DOUBLE_EQ(balanced.bright, 1.0);
  EXPECT_DOUBLE_EQ(balanced.dark, 0.0);
  for (double chi : {0.0, 0.7, kPi}) {
    const auto open = mz_probabilities(false, chi);
    EXPECT_NEAR(open.bright, 0.5, 1e-15);
    EXPECT_NEAR(open.dark, 0.5, 1e-15);
  }
  const auto flipped = mz_probabilities(true, kPi);
  EXPECT_NEAR(flipped.bright, 0.0, 1e-15);
  EXPECT_NEAR(flipped.dark, 1.0, 1e-15);
  for (double chi = -7; chi < 7; chi += 0.1) {
    const auto p = mz_probabilities(true, chi);
    EXPECT_NEAR(p.bright + p.dark, 1.0, 1e-12);
    EXPECT_NEAR(p.bright, std::pow(std::cos(chi / 2), 2), 1e-12);
  }
}

TEST(MachZehnder, ScheduleValidation) {
  MZConfig cfg;
  cfg.schedule = {true, false, true};
  const RandomStream rng(28);
  EXPECT_THROW(delayed_choice_run(cfg, 4, rng), Error);
  EXPECT_NO_THROW(delayed_choice_run(cfg, 3, rng));
}

TEST(DelayedChoice, AllPresentIsExactlyBright) {
  MZConfig cfg;
  cfg.schedule.assign(10000, true);
  const auto events = delayed_choice_run(cfg, 10000, RandomStream(29));
  for (const auto& e : events) EXPECT_EQ(e.index, kBrightDetector);
}

TEST(DelayedChoice, AbsentBranchSplitsEvenly) {
  MZConfig cfg;
  cfg.choice_probability = 0.5;
  cfg.choice_seed = 30;
  const auto events = delayed_choice_run(cfg, 100000, RandomStream(31));
  std::uint64_t absent = 0, absent_bright = 0, present_dark = 0;
  for (const auto& e : events) {
    if (e.has(Tag::choice)) {
      present_dark += e.index == kDarkDetector;
    } else {
      ++absent;
      absent_bright += e.index == kBrightDetector;
    }
  }
  EXPECT_EQ(present_dark, 0u);
  EXPECT_NEAR(static_cast<double>(absent_bright) / absent, 0.5, 4 * binomial_sigma(0.5, absent));
}

TEST(DelayedChoice, OrderingOfChoiceDoesNotChangeOutcomes) {
  MZConfig cfg;
  cfg.choice_probability = 0.3;
  cfg.arm_phase = 0.4;
  cfg.choice_seed = 32;
  const RandomStream rng(33);
  for (auto exec : {Execution::serial, Execution::parallel}) {
    const auto before = delayed_choice_run(cfg, 20000, rng, ChoiceTiming::before_entry, exec);
    const auto after = delayed_choice_run(cfg, 20000, rng, ChoiceTiming::after_propagation, exec);
    ASSERT_EQ(before.size(), after.size());
    for (std::size_t i = 0; i < before.size(); ++i) {
      ASSERT_TRUE(before[i].same_outcome(after[i])) << i;
      ASSERT_TRUE(before[i].timeline && after[i].timeline);
      EXPECT_LT(before[i].timeline->choice, before[i].timeline->entry + 1);
      EXPECT_GT(after[i].timeline->choice, after[i].timeline->entry);
    }
  }
}

TEST(Eraser, TagsDestroyAndEraserRestores) {
  const SlitGeometry g;
  const auto grid = default_screen(g);
  const auto tagged = eraser_patterns({true, std::nullopt, false}, g, grid);
  EXPECT_LT(estimate_visibility(tagged.all), 1e-9);
  EXPECT_FALSE(tagged.selected.has_value());

  const auto erased = eraser_patterns({true, PolarizerSpec::linear(kPi / 4), true}, g, grid);
  ASSERT_TRUE(erased.selected.has_value());
  EXPECT_NEAR(estimate_visibility(*erased.selected), 1.0, 1e-9);
  EXPECT_NEAR(erased.selected_fraction, 0.5, 1e-12);
  EXPECT_NEAR(erased.selected->total(), erased.selected_fraction, 1e-12);

  const auto untagged = eraser_patterns({false, PolarizerSpec::linear(kPi / 4), true}, g, grid);
  EXPECT_NEAR(estimate_visibility(*untagged.selected), 1.0, 1e-9);
  EXPECT_NEAR(untagged.selected_fraction, 0.5, 1e-12);

  const auto plain = eraser_patterns({false, std::nullopt, false}, g, grid);
  EXPECT_NEAR(estimate_visibility(plain.all), 1.0, 1e-9);
}

TEST(Eraser, ComplementaryEraserAnglesSumToTaggedTotal) {
  const SlitGeometry g;
  const auto grid = default_screen(g);
  const auto plus = eraser_patterns({true, PolarizerSpec::linear(kPi / 4), true}, g, grid);
  const auto minus = eraser_patterns({true, PolarizerSpec::linear(-kPi / 4), true}, g, grid);
  const auto total = eraser_patterns({true, std::nullopt, false}, g, grid);
  for (std::size_t i = 0; i < grid.bins; ++i)
    EXPECT_NEAR(plus.selected->intensities[i] + minus.selected->intensities[i], total.all.intensities[i], 1e-10);
  // anti-fringes: the two selected patterns are out of phase at the centre
  const auto c = grid.bins / 2;
  EXPECT_GT(std::abs(plus.selected->intensities[c] - minus.selected->intensities[c]), 0.0);
}

TEST(Eraser, PostSelectNeedsEraser) {
  EXPECT_THROW((EraserConfig{true, std::nullopt, true}.validate()), Error);
}

TEST(Eraser, SampledSelectedFraction) {
  const SlitGeometry g;
  const auto grid = default_screen(g);
  const EraserExperiment exp({true, PolarizerSpec::linear(kPi / 4), true}, g, grid);
  const RandomStream rng(34);
  const std::uint64_t n = 100000;
  std::uint64_t pass = 0;
  for (std::uint64_t i = 0; i < n; ++i) pass += exp.trial(i, rng).has(Tag::polarizer_pass);
  EXPECT_NEAR(static_cast<double>(pass) / n, 0.5, 4 * binomial_sigma(0.5, n));
}

TEST(Photoelectric, SpectrumZeroBelowThreshold) {
  PhotoDetectorSpec spec;
  spec.work_function = 1.5;
  spec.density_of_states = {{0.0, 1.0}, {4.0, 1.0}};
  const auto s = photo_rate_spectrum(spec, ScreenGrid{0, 4, 40});
  EXPECT_EQ(s.normalization, Normalization::relative);
  for (std::size_t i = 0; i < s.size(); ++i)
    if (s.positions[i] < 1.5) EXPECT_EQ(s.intensities[i], 0.0);
}
