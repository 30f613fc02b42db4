#include <omp.h>

#include <atomic>
#include <limits>
#include <string>

#include "dualsim/error.hpp"
#include "dualsim/kernels.hpp"

namespace dualsim::omp {

std::vector<double> screen_intensities(const PathCoherence& rho, const SlitGeometry& g, std::span<const double> xs) {
  std::vector<double> out(xs.size());
  const auto count = static_cast<std::int64_t>(xs.size());
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    const auto k = static_cast<std::size_t>(i);
    out[k] = screen_intensity(rho, g, xs[k]);
  }
  return out;
}

std::vector<EventRecord> sample_events(const ScreenSampler& sampler, std::uint64_t n, std::uint64_t seed) {
  std::vector<EventRecord> out(n);
  const auto count = static_cast<std::int64_t>(n);
#pragma omp parallel for schedule(static)
  for (std::int64_t i = 0; i < count; ++i) {
    out[static_cast<std::size_t>(i)] = sample_screen_event(sampler, static_cast<std::uint64_t>(i), seed);
  }
  return out;
}

Histogram accumulate(std::span<const EventRecord> events, std::vector<double> edges) {
  Histogram h = Histogram::empty(std::move(edges));
  const auto count = static_cast<std::int64_t>(events.size());
  const std::size_t bins = h.bins();
  // Lowest offending index, so the reported trial matches the serial kernel.
  std::atomic<std::int64_t> first_bad{std::numeric_limits<std::int64_t>::max()};

#pragma omp parallel
  {
    std::vector<std::uint64_t> local(bins, 0);
#pragma omp for schedule(static) nowait
    for (std::int64_t i = 0; i < count; ++i) {
      const auto& e = events[static_cast<std::size_t>(i)];
      const auto bin = e.outcome == Outcome::absorbed ? std::nullopt : h.find_bin(e.position);
      if (!bin) {
        auto cur = first_bad.load();
        while (i < cur && !first_bad.compare_exchange_weak(cur, i)) {
        }
        continue;
      }
      ++local[*bin];
    }
#pragma omp critical(dualsim_histogram_merge)
    for (std::size_t b = 0; b < bins; ++b) h.counts[b] += local[b];
  }

  if (first_bad.load() != std::numeric_limits<std::int64_t>::max()) {
    const auto& e = events[static_cast<std::size_t>(first_bad.load())];
    throw Error(ErrorCode::out_of_range, "event of trial " + std::to_string(e.trial) + " lies outside the histogram");
  }
  h.total = events.size();
  return h;
}

}  // namespace dualsim::omp
