#pragma once

#include <cstddef>
#include <optional>
#include <vector>

namespace dualsim {

/// Uniform binning of a 1-D detection coordinate.
struct ScreenGrid {
  double lo = -1.0;
  double hi = 1.0;
  std::size_t bins = 1;

  static ScreenGrid symmetric(double half_width, std::size_t bins) { return {-half_width, half_width, bins}; }

  void validate() const;
  double width() const { return (hi - lo) / static_cast<double>(bins); }
  double center(std::size_t i) const { return lo + (static_cast<double>(i) + 0.5) * width(); }
  std::vector<double> centers() const;
  std::vector<double> edges() const;

  bool operator==(const ScreenGrid&) const = default;
};

/// Where the fringes are and what slowly varying envelope multiplies them.
/// Visibility estimators divide the envelope out before fitting.
struct FringeModel {
  double period = 0.0;
  double center = 0.0;
  std::vector<double> envelope;  // per bin; empty means flat

  bool operator==(const FringeModel&) const = default;
};

enum class Normalization { per_event, relative };
enum class Provenance { analytic, monte_carlo };

/// Intensity on uniformly spaced bin centres. In per-event mode the values
/// are probability masses and sum to 1.
struct ScreenPattern {
  std::vector<double> positions;
  std::vector<double> intensities;
  Normalization normalization = Normalization::per_event;
  Provenance provenance = Provenance::analytic;
  std::optional<FringeModel> fringe;

  void validate() const;
  std::size_t size() const { return positions.size(); }
  double total() const;
  double bin_width() const;
  std::vector<double> edges() const;
  /// Per-event copy scaled to unit sum.
  ScreenPattern normalized() const;

  bool operator==(const ScreenPattern&) const = default;
};

/// Builds a pattern on `grid` from raw intensities and scales it per-event.
ScreenPattern make_pattern(const ScreenGrid& grid, std::vector<double> intensities,
                           std::optional<FringeModel> fringe = std::nullopt);

}  // namespace dualsim
