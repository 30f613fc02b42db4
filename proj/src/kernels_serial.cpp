#include <string>

#include "dualsim/error.hpp"
#include "dualsim/kernels.hpp"

namespace dualsim {

double screen_intensity(const PathCoherence& rho, const SlitGeometry& g, double x) {
  const Amplitude a1 = slit_amplitude(x, Slit::s1, g);
  const Amplitude a2 = slit_amplitude(x, Slit::s2, g);
  const double v = rho.p1 * std::norm(a1) + rho.p2 * std::norm(a2) + 2.0 * (rho.c12 * a1 * std::conj(a2)).real();
  return v > 0.0 ? v : 0.0;
}

}  // namespace dualsim

namespace dualsim::serial {

std::vector<double> screen_intensities(const PathCoherence& rho, const SlitGeometry& g, std::span<const double> xs) {
  std::vector<double> out(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) out[i] = screen_intensity(rho, g, xs[i]);
  return out;
}

std::vector<EventRecord> sample_events(const ScreenSampler& sampler, std::uint64_t n, std::uint64_t seed) {
  std::vector<EventRecord> out;
  out.reserve(n);
  for (std::uint64_t i = 0; i < n; ++i) out.push_back(sample_screen_event(sampler, i, seed));
  return out;
}

Histogram accumulate(std::span<const EventRecord> events, std::vector<double> edges) {
  Histogram h = Histogram::empty(std::move(edges));
  for (const auto& e : events) {
    const auto bin = e.outcome == Outcome::absorbed ? std::nullopt : h.find_bin(e.position);
    if (!bin) {
      throw Error(ErrorCode::out_of_range, "event of trial " + std::to_string(e.trial) + " lies outside the histogram");
    }
    ++h.counts[*bin];
  }
  h.total = events.size();
  return h;
}

}  // namespace dualsim::serial
