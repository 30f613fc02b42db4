#include "dualsim/screen.hpp"

#include <cmath>
#include <numeric>

#include "dualsim/error.hpp"

namespace dualsim {

void ScreenGrid::validate() const {
  if (bins == 0) throw Error(ErrorCode::invalid_argument, "grid needs at least one bin");
  if (!std::isfinite(lo) || !std::isfinite(hi) || !(hi > lo)) {
    throw Error(ErrorCode::invalid_argument, "grid bounds must be finite with hi > lo");
  }
}

std::vector<double> ScreenGrid::centers() const {
  std::vector<double> out(bins);
  for (std::size_t i = 0; i < bins; ++i) out[i] = center(i);
  return out;
}

std::vector<double> ScreenGrid::edges() const {
  std::vector<double> out(bins + 1);
  for (std::size_t i = 0; i <= bins; ++i) out[i] = lo + static_cast<double>(i) * width();
  out.back() = hi;
  return out;
}

void ScreenPattern::validate() const {
  if (positions.empty() || positions.size() != intensities.size()) {
    throw Error(ErrorCode::invalid_argument, "pattern needs matching, non-empty positions and intensities");
  }
  for (double v : intensities) {
    if (!std::isfinite(v) || v < 0.0) throw Error(ErrorCode::invalid_argument, "pattern intensities must be >= 0");
  }
  if (positions.size() > 1) {
    const double w = bin_width();
    if (!(w > 0.0)) throw Error(ErrorCode::invalid_argument, "pattern positions must increase");
    for (std::size_t i = 1; i < positions.size(); ++i) {
      if (std::abs(positions[i] - positions[i - 1] - w) > 1e-9 * std::abs(w) * static_cast<double>(positions.size())) {
        throw Error(ErrorCode::invalid_argument, "pattern positions must be uniformly spaced");
      }
    }
  }
  if (normalization == Normalization::per_event && std::abs(total() - 1.0) > 1e-9) {
    throw Error(ErrorCode::invalid_argument, "per-event pattern must sum to 1");
  }
  if (fringe && !fringe->envelope.empty() && fringe->envelope.size() != positions.size()) {
    throw Error(ErrorCode::invalid_argument, "fringe envelope length differs from pattern length");
  }
}

double ScreenPattern::total() const { return std::accumulate(intensities.begin(), intensities.end(), 0.0); }

double ScreenPattern::bin_width() const {
  if (positions.size() < 2) return 1.0;
  return (positions.back() - positions.front()) / static_cast<double>(positions.size() - 1);
}

std::vector<double> ScreenPattern::edges() const {
  const double w = bin_width();
  std::vector<double> out(positions.size() + 1);
  const double lo = positions.front() - 0.5 * w;
  for (std::size_t i = 0; i <= positions.size(); ++i) out[i] = lo + static_cast<double>(i) * w;
  return out;
}

ScreenPattern ScreenPattern::normalized() const {
  const double t = total();
  if (!(t > 0.0)) throw Error(ErrorCode::empty_distribution, "pattern has zero total intensity");
  ScreenPattern out = *this;
  for (double& v : out.intensities) v /= t;
  out.normalization = Normalization::per_event;
  return out;
}

ScreenPattern make_pattern(const ScreenGrid& grid, std::vector<double> intensities, std::optional<FringeModel> fringe) {
  grid.validate();
  if (intensities.size() != grid.bins) throw Error(ErrorCode::dimension_mismatch, "intensity count differs from grid");
  ScreenPattern p;
  p.positions = grid.centers();
  p.intensities = std::move(intensities);
  p.normalization = Normalization::relative;
  p.provenance = Provenance::analytic;
  p.fringe = std::move(fringe);
  return p.normalized();
}

}  // namespace dualsim
