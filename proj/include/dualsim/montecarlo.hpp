#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <vector>

#include "dualsim/events.hpp"
#include "dualsim/kernels.hpp"
#include "dualsim/screen.hpp"

namespace dualsim {

struct RunSummary {
  std::uint64_t n_events = 0;
  std::uint64_t seed = 0;
  double empirical_visibility = 0.0;
  double chi_square = 0.0;
  std::int64_t degrees_of_freedom = 0;
  /// Experiment-specific figures (detector fractions, analytic values, ...).
  std::map<std::string, double> metrics;

  bool operator==(const RunSummary&) const = default;
};

ScreenSampler make_sampler(const ScreenPattern& pattern);

/// n independent detections drawn by inverse CDF, one uniform per event from
/// substream (seed, trial). Deterministic for fixed (pattern, n, seed).
std::vector<EventRecord> sample_events(const ScreenPattern& pattern, std::uint64_t n, std::uint64_t seed,
                                       Execution exec = Execution::parallel);

/// Bins event positions. Absorbed events and positions outside the edges
/// raise out_of_range naming the trial.
Histogram accumulate(std::span<const EventRecord> events, std::vector<double> edges,
                     Execution exec = Execution::parallel);

/// Fringe contrast (I_max - I_min) / (I_max + I_min) from a least-squares
/// fit of c0 + c1 cos + s1 sin over the central fringe period, after the
/// envelope has been divided out. Result is clamped to [0, 1].
double estimate_visibility(std::span<const double> centers, std::span<const double> values, const FringeModel& model);
/// Uses the pattern's fringe model, or the whole domain as one period.
double estimate_visibility(const ScreenPattern& pattern);
double estimate_visibility(const Histogram& h, const FringeModel& model);

struct ChiSquareResult {
  double statistic = 0.0;
  std::int64_t dof = 0;
  double threshold = 0.0;
  bool pass = true;
};

/// Pearson goodness of fit against `expected` (same binning). Adjacent bins
/// are merged left to right until each group expects at least 5 counts.
ChiSquareResult chi_square_test(const Histogram& h, const ScreenPattern& expected, double confidence = 0.99);

}  // namespace dualsim
