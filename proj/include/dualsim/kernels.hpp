#pragma once

// Data-parallel kernels. Every kernel has a serial reference in
// dualsim::serial and an OpenMP version in dualsim::omp; both produce
// bit-identical results because each trial draws only from its own
// (seed, trial) substream and histogram merges are integer sums.

#include <cstdint>
#include <span>
#include <vector>

#include "dualsim/events.hpp"
#include "dualsim/optics.hpp"
#include "dualsim/random.hpp"

namespace dualsim {

enum class Execution { serial, parallel };

/// Discrete inverse CDF over non-negative weights. One uniform u gives a bin
/// and the fractional position of u inside that bin's probability mass.
class InverseCdf {
 public:
  explicit InverseCdf(std::span<const double> weights);

  struct Draw {
    std::size_t index;
    double fraction;  // in [0, 1)
  };
  Draw operator()(double u) const;

  std::size_t size() const { return cumulative_.size(); }
  double probability(std::size_t i) const;

 private:
  std::vector<double> cumulative_;  // normalized, last entry exactly 1
};

/// Inputs for screen sampling: an inverse CDF over uniform bins.
struct ScreenSampler {
  InverseCdf cdf;
  double lo;
  double width;
};

/// One screen detection for `trial` using a single draw from `stream`.
EventRecord sample_screen_event(const ScreenSampler& sampler, std::uint64_t trial, RandomStream stream);
/// Same, drawing from substream (seed, trial, Channel::screen).
EventRecord sample_screen_event(const ScreenSampler& sampler, std::uint64_t trial, std::uint64_t seed);

/// Two-path density matrix entries needed to light a screen.
struct PathCoherence {
  double p1;       // rho_00
  double p2;       // rho_11
  Amplitude c12;   // rho_01
};

/// Screen intensity p1|A1|^2 + p2|A2|^2 + 2 Re(c12 A1 conj(A2)) at each x.
double screen_intensity(const PathCoherence& rho, const SlitGeometry& g, double x);

namespace serial {
std::vector<double> screen_intensities(const PathCoherence& rho, const SlitGeometry& g, std::span<const double> xs);
std::vector<EventRecord> sample_events(const ScreenSampler& sampler, std::uint64_t n, std::uint64_t seed);
Histogram accumulate(std::span<const EventRecord> events, std::vector<double> edges);
}  // namespace serial

namespace omp {
std::vector<double> screen_intensities(const PathCoherence& rho, const SlitGeometry& g, std::span<const double> xs);
std::vector<EventRecord> sample_events(const ScreenSampler& sampler, std::uint64_t n, std::uint64_t seed);
Histogram accumulate(std::span<const EventRecord> events, std::vector<double> edges);
}  // namespace omp

/// Runs `trial(i)` for i in [0, n). `trial` must not throw and must depend
/// only on i and captured immutable state.
template <class TrialFn>
std::vector<EventRecord> run_trials(std::uint64_t n, TrialFn&& trial, Execution exec = Execution::parallel) {
  std::vector<EventRecord> out(n);
  const auto count = static_cast<std::int64_t>(n);
  if (exec == Execution::serial) {
    for (std::int64_t i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = trial(static_cast<std::uint64_t>(i));
  } else {
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < count; ++i) out[static_cast<std::size_t>(i)] = trial(static_cast<std::uint64_t>(i));
  }
  return out;
}

}  // namespace dualsim
