// Acceptance gate: one PASS/FAIL line per criterion, non-zero exit on any
// failure. Tolerances are pinned here, not read from configuration.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>
#include <string>

#include "dualsim/bundle.hpp"
#include "dualsim/catalog.hpp"
#include "dualsim/density.hpp"
#include "dualsim/experiments.hpp"
#include "dualsim/montecarlo.hpp"

using namespace dualsim;

namespace {

constexpr double kPi = std::numbers::pi;

struct Verdict {
  bool pass = true;
  std::ostringstream detail;

  void check(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

double sigma(double p, double n) { return std::sqrt(p * (1 - p) / n); }

Scenario builtin(const std::string& name) { return parse_scenario(find_builtin(name)->text); }

// 1. Orthogonal markers remove the interference term; identical markers keep it.
void fringe_destruction(Verdict& v) {
  const SlitGeometry g;
  const auto grid = default_screen(g);
  const double offdiag = std::abs(marked_path_density(0.0)(0, 1));
  const double v_marked = estimate_visibility(double_slit_pattern(g, true, grid));
  const double v_same = estimate_visibility(double_slit_pattern(g, false, grid));
  v.check(offdiag < 1e-12, "reduced off-diagonal < 1e-12");
  v.check(v_marked < 1e-9, "marked visibility < 1e-9");
  v.check(std::abs(v_same - 1.0) < 1e-9, "identical markers visibility 1");
  v.detail << "|rho01|=" << offdiag << " V_orth=" << v_marked << " V_same=" << v_same;
}

// 2. Which-path detector statistics over 1e5 trials.
void which_path_statistics(Verdict& v) {
  auto s = builtin("which_path");
  s.n_events = 100000;
  const auto b = run_scenario(s);
  const auto& m = b.summary->metrics;
  const double tol = 4 * sigma(0.5, 1e5);
  v.check(std::abs(m.at("fraction_D1") - 0.5) <= tol, "D1 fraction within 4 sigma");
  v.check(std::abs(m.at("fraction_D2") - 0.5) <= tol, "D2 fraction within 4 sigma");
  v.check(m.at("coincidences") == 0.0, "joint fires exactly 0");
  v.detail << "D1=" << m.at("fraction_D1") << " D2=" << m.at("fraction_D2") << " (4 sigma " << tol
           << ") joint=" << m.at("coincidences");
}

// 3. One slit closed: sinc^2 with the first zero at lambda L / w, not flat.
void single_slit(Verdict& v) {
  const SlitGeometry g;
  const double x0 = g.first_envelope_zero();
  const auto grid = ScreenGrid::symmetric(2.0 * x0, 256);
  const auto p = single_slit_pattern(g, Slit::s1, grid);
  std::size_t zero = 0;
  double lowest = 1e300;
  for (std::size_t i = 0; i < p.size(); ++i) {
    if (p.positions[i] < 0.5 * x0 || p.positions[i] > 1.5 * x0) continue;
    if (p.intensities[i] < lowest) {
      lowest = p.intensities[i];
      zero = i;
    }
  }
  const double err = std::abs(p.positions[zero] - x0);
  v.check(err <= grid.width(), "first zero within one bin of lambda L / w");
  const auto sinc2 = [&](double x) {
    const double u = kPi * g.width * x / (g.wavelength * g.screen_distance);
    return std::pow(std::sin(u) / u, 2);
  };
  const std::size_t ref = p.size() / 2;
  double worst = 0.0;
  for (std::size_t i = 0; i < p.size(); ++i)
    worst = std::max(worst, std::abs(p.intensities[i] / p.intensities[ref] -
                                     sinc2(p.positions[i]) / sinc2(p.positions[ref])));
  v.check(worst < 1e-9, "shape matches sinc^2");
  const auto h = accumulate(sample_events(p, 100000, 3), p.edges());
  const auto flat = make_pattern(grid, std::vector<double>(grid.bins, 1.0 / static_cast<double>(grid.bins)));
  const auto chi = chi_square_test(h, flat);
  v.check(!chi.pass, "chi-square against flat fails at 99%");
  v.detail << "zero at " << p.positions[zero] << " vs " << x0 << " (bin " << grid.width() << "), sinc^2 dev "
           << worst << ", chi2 vs flat " << chi.statistic << " > " << chi.threshold;
}

// Mean detector intensity per chi bin and the fitted cos(chi) coefficient.
struct AbsorberRun {
  std::vector<double> chi, measured, stderr_;
  double c1 = 0.0, c1_err = 0.0;
};

AbsorberRun absorber_run(double a, AbsorberMode mode) {
  Scenario s = builtin("neutron_absorber");
  auto& p = std::get<NeutronParams>(s.params);
  p.absorber = {a, mode};
  s.n_events = 1000000;
  const auto b = run_scenario(s);
  const auto& h = b.histograms.at("detector");
  const std::size_t m = p.chi_bins;
  const double per_bin = static_cast<double>(s.n_events / m);
  AbsorberRun r;
  r.chi = h.centers();
  double var_c1 = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double frac = static_cast<double>(h.counts[j]) / per_bin;
    r.measured.push_back(2 * frac);
    r.stderr_.push_back(2 * std::sqrt(frac * (1 - frac) / per_bin));
    r.c1 += 2.0 / static_cast<double>(m) * r.measured[j] * std::cos(r.chi[j]);
    var_c1 += std::pow(2.0 / static_cast<double>(m) * std::cos(r.chi[j]) * r.stderr_[j], 2);
  }
  r.c1_err = std::sqrt(var_c1);
  return r;
}

// 4. Stochastic vs chopper absorber against their closed forms.
void absorber_dichotomy(Verdict& v) {
  const double l = std::sqrt(0.5), rr = std::sqrt(0.5);
  double sum_z2 = 0.0;
  int bins = 0;
  for (double a : {0.01, 0.25, 0.5}) {
    const auto st = absorber_run(a, AbsorberMode::stochastic);
    const auto ch = absorber_run(a, AbsorberMode::deterministic_chopper);
    double worst = 0.0;
    for (std::size_t j = 0; j < st.chi.size(); ++j) {
      const double es = a * l * l + rr * rr + 2 * std::sqrt(a) * l * rr * std::cos(st.chi[j]);
      const double ec = a * l * l + rr * rr + 2 * a * l * rr * std::cos(ch.chi[j]);
      // Binomial standard error at the expected rate.
      const double n = 1e6 / static_cast<double>(st.chi.size());
      const double zs = std::abs(st.measured[j] - es) / (2 * sigma(es / 2, n));
      const double zc = std::abs(ch.measured[j] - ec) / (2 * sigma(ec / 2, n));
      worst = std::max({worst, zs, zc});
      sum_z2 += zs * zs + zc * zc;
      bins += 2;
    }
    v.check(worst <= 3.0, "a=" + std::to_string(a) + " per-bin within 3 sigma");
    const double ratio = st.c1 / ch.c1;
    const double ratio_err = std::abs(ratio) * std::hypot(st.c1_err / st.c1, ch.c1_err / ch.c1);
    const double target = 1.0 / std::sqrt(a);
    v.check(std::abs(ratio - target) <= 3 * ratio_err, "a=" + std::to_string(a) + " coefficient ratio 1/sqrt(a)");
    v.detail << "a=" << a << ": max|z|=" << worst << " ratio=" << ratio << "+-" << ratio_err << " (1/sqrt a="
             << target << "); ";
  }
  v.detail << "sum z^2=" << sum_z2 << " over " << bins << " bins";
}

// 5. P^2 + W^2 = 1 and the endpoint cases.
void duality_relation(Verdict& v) {
  std::mt19937_64 gen(5);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 10000; ++k) {
    const auto d = duality_params(u(gen), u(gen));
    worst = std::max(worst, std::abs(d.P * d.P + d.W * d.W - 1.0));
  }
  const auto eq = duality_params(0.7, 0.7);
  const auto one = duality_params(0.7, 0.0);
  v.check(worst < 1e-12, "max deviation < 1e-12");
  v.check(eq.W == 1.0 && eq.P == 0.0, "a=b gives W=1 exactly");
  v.check(one.P == 1.0 && one.W == 0.0, "b=0 gives P=1 exactly");
  v.detail << "max|P^2+W^2-1|=" << worst << " a=b:(W=" << eq.W << ",P=" << eq.P << ") b=0:(P=" << one.P << ")";
}

// 6. Fringe visibility of the two-beam pattern equals W.
void visibility_identity(Verdict& v) {
  std::mt19937_64 gen(6);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 200; ++k) {
    const double a = u(gen), b = u(gen);
    const auto c = fringe_visibility_equals_W(a, b);
    worst = std::max(worst, std::abs(c.V - duality_params(a, b).W));
  }
  v.check(worst < 1e-12, "scanned V equals W within 1e-12");
  const ScreenGrid grid{-2.0, 2.0, 128};
  const auto p = two_beam_pattern(2.0, 1.0, 1.0, grid);
  const auto h = accumulate(sample_events(p, 1000000, 6), p.edges());
  const double sampled = estimate_visibility(h, *p.fringe);
  v.check(std::abs(sampled - 0.8) < 0.02, "sampled V within 0.02 of W");
  v.detail << "max|V-W|=" << worst << " sampled V=" << sampled << " (W=0.8, 1e6 events)";
}

// 7. Balanced Mach-Zehnder and the open interferometer.
void mach_zehnder(Verdict& v) {
  const auto balanced = mz_probabilities(true, 0.0);
  v.check(balanced.dark == 0.0 && balanced.bright == 1.0, "balanced p_dark=0, p_bright=1 exactly");
  auto s = builtin("mach_zehnder");
  std::get<MachZehnderParams>(s.params).bs2_present = false;
  s.n_events = 100000;
  const auto b = run_scenario(s);
  const auto& h = b.histograms.at("absent");
  const double bright = static_cast<double>(h.counts[1]) / static_cast<double>(h.total);
  v.check(std::abs(bright - 0.5) <= 4 * sigma(0.5, 1e5), "BS2 removed split within 4 sigma");
  v.detail << "balanced (" << balanced.bright << ", " << balanced.dark << "), BS2 removed bright fraction " << bright;
}

// 8. Choice bit drawn before or after propagation gives identical records.
void delayed_choice(Verdict& v) {
  MZConfig cfg;
  cfg.choice_probability = 0.5;
  cfg.choice_seed = 8008;
  const RandomStream rng(8);
  const std::uint64_t n = 100000;
  const auto before = delayed_choice_run(cfg, n, rng, ChoiceTiming::before_entry);
  const auto after = delayed_choice_run(cfg, n, rng, ChoiceTiming::after_propagation);
  bool identical = before.size() == after.size();
  for (std::size_t i = 0; identical && i < before.size(); ++i) identical = before[i].same_outcome(after[i]);
  v.check(identical, "records bit-identical across choice timing");
  std::uint64_t present = 0, present_dark = 0, absent = 0, absent_bright = 0;
  for (const auto& e : after) {
    if (e.has(Tag::choice)) {
      ++present;
      present_dark += e.index == kDarkDetector;
    } else {
      ++absent;
      absent_bright += e.index == kBrightDetector;
    }
  }
  const double split = static_cast<double>(absent_bright) / static_cast<double>(absent);
  v.check(present_dark == 0, "present branch never dark");
  v.check(std::abs(split - 0.5) <= 4 * sigma(0.5, static_cast<double>(absent)), "absent branch split within 4 sigma");
  v.detail << "identical=" << identical << " present=" << present << " dark=" << present_dark << " absent=" << absent
           << " bright fraction=" << split;
}

// 9. Tagging removes fringes; the diagonal eraser restores them in the selected half.
void quantum_eraser(Verdict& v) {
  const SlitGeometry g;
  const auto grid = default_screen(g);
  const auto tagged = eraser_patterns({true, std::nullopt, false}, g, grid);
  const auto plus = eraser_patterns({true, PolarizerSpec::linear(kPi / 4), true}, g, grid);
  const auto minus = eraser_patterns({true, PolarizerSpec::linear(-kPi / 4), true}, g, grid);
  const double v_tagged = estimate_visibility(tagged.all);
  const double v_selected = estimate_visibility(*plus.selected);
  double worst = 0.0;
  for (std::size_t i = 0; i < grid.bins; ++i)
    worst = std::max(worst, std::abs(plus.selected->intensities[i] + minus.selected->intensities[i] -
                                     tagged.all.intensities[i]));
  auto s = builtin("quantum_eraser");
  s.n_events = 100000;
  const auto b = run_scenario(s);
  const double frac = b.summary->metrics.at("empirical_selected_fraction");
  v.check(v_tagged < 1e-9, "tags on visibility < 1e-9");
  v.check(std::abs(v_selected - 1.0) < 1e-9, "post-selected visibility 1 within 1e-9");
  v.check(std::abs(frac - 0.5) <= 4 * sigma(0.5, 1e5), "selected fraction 0.5 within 4 sigma");
  v.check(worst < 1e-10, "+pi/4 and -pi/4 selections sum to tags-on total");
  v.detail << "V_tagged=" << v_tagged << " V_selected=" << v_selected << " fraction=" << frac << " max sum dev="
           << worst;
}

// 10. Photo-detector threshold, field scaling and electron energy.
void photoelectric(Verdict& v) {
  PhotoDetectorSpec spec;
  spec.work_function = 1.5;
  spec.coupling = 0.7;
  spec.density_of_states = {{0.0, 0.2}, {1.5, 1.0}, {3.0, 0.6}, {6.0, 0.3}};
  bool below_zero = true;
  for (double omega = 0.0; omega < spec.work_function; omega += 0.01)
    below_zero = below_zero && photo_transition_rate(spec, omega) == 0.0;
  v.check(below_zero, "rate 0 below threshold");

  double worst_ratio = 0.0;
  for (double omega : {1.6, 2.2, 3.7}) {
    std::array<double, 3> rates{};
    for (int k = 0; k < 3; ++k) {
      spec.field_amplitude = 0.4 * (k + 1);
      rates[static_cast<std::size_t>(k)] = photo_transition_rate(spec, omega);
    }
    worst_ratio = std::max({worst_ratio, std::abs(rates[1] / rates[0] - 4.0), std::abs(rates[2] / rates[0] - 9.0)});
  }
  v.check(worst_ratio < 1e-12, "rates scale 1:4:9 with E0");

  std::mt19937_64 gen(10);
  std::uniform_real_distribution<double> u(0.0, 5.0);
  int exact = 0;
  for (int k = 0; k < 10; ++k) {
    const double wt = u(gen);
    const double omega = wt + u(gen);
    const auto e = photo_electron_energy(omega, wt);
    exact += e.has_value() && *e == omega - wt;
  }
  v.check(exact == 10, "kinetic energy omega - W_T exact");
  v.detail << "ratio dev=" << worst_ratio << " exact energies=" << exact << "/10";
}

// 11. Determinism and canonical round-trip over the catalog.
void determinism(Verdict& v) {
  int identical = 0, fixpoints = 0, total = 0;
  for (const auto& e : builtin_catalog()) {
    const auto s = parse_scenario(e.text);
    const auto first = bundle_to_json_text(run_scenario(s));
    const auto second = bundle_to_json_text(run_scenario(s));
    identical += first == second;
    fixpoints += bundle_to_json_text(parse_bundle(first)) == first &&
                 serialize_scenario(parse_scenario(serialize_scenario(s))) == serialize_scenario(s);
    ++total;
  }
  v.check(total == 7, "catalog has 7 scenarios");
  v.check(identical == total, "repeated runs byte-identical");
  v.check(fixpoints == total, "parse then serialize is a fixpoint");
  v.detail << identical << "/" << total << " identical, " << fixpoints << "/" << total << " fixpoints";
}

}  // namespace

int main() {
  const std::pair<const char*, std::function<void(Verdict&)>> criteria[] = {
      {"fringe destruction", fringe_destruction},
      {"which-path statistics", which_path_statistics},
      {"single-slit correction", single_slit},
      {"absorber dichotomy", absorber_dichotomy},
      {"duality relation", duality_relation},
      {"visibility identity", visibility_identity},
      {"Mach-Zehnder", mach_zehnder},
      {"delayed choice", delayed_choice},
      {"quantum eraser", quantum_eraser},
      {"photoelectric model", photoelectric},
      {"determinism and round-trip", determinism},
  };
  int failures = 0;
  int index = 0;
  for (const auto& [name, run] : criteria) {
    ++index;
    Verdict v;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      run(v);
    } catch (const std::exception& e) {
      v.pass = false;
      v.detail << "exception: " << e.what();
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    failures += v.pass ? 0 : 1;
    std::printf("criterion %2d %-28s %s  (%.2fs) %s\n", index, name, v.pass ? "PASS" : "FAIL", secs,
                v.detail.str().c_str());
  }
  std::printf("%d/%d criteria passed\n", index - failures, index);
  return failures == 0 ? 0 : 1;
}
