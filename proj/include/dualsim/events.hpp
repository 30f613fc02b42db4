#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <span>
#include <vector>

namespace dualsim {

enum class Outcome : std::uint8_t { screen, detector, absorbed };

/// Named discrete side outcomes recorded with an event.
enum class Tag : std::uint8_t {
  detector_d1,
  detector_d2,
  chopper_open,
  choice,
  polarizer_pass,
  absorbed,
};
inline constexpr std::size_t kTagCount = 6;

/// Logical clock ticks of a delayed-choice trial.
struct Timeline {
  std::uint32_t entry = 0;
  std::uint32_t choice = 0;

  bool operator==(const Timeline&) const = default;
};

/// One detection: exactly one primary outcome per trial.
struct EventRecord {
  std::uint64_t trial = 0;
  Outcome outcome = Outcome::screen;
  std::int32_t index = -1;  // screen bin or detector id; -1 when absorbed
  double position = 0.0;    // screen coordinate; detector id for detector events
  std::array<std::int8_t, kTagCount> ancillary = {-1, -1, -1, -1, -1, -1};
  std::optional<Timeline> timeline;

  void set(Tag t, bool v) { ancillary[static_cast<std::size_t>(t)] = v ? 1 : 0; }
  std::optional<bool> get(Tag t) const {
    const auto v = ancillary[static_cast<std::size_t>(t)];
    if (v < 0) return std::nullopt;
    return v == 1;
  }
  bool has(Tag t) const { return get(t).value_or(false); }

  /// Equality of everything observable, ignoring the logical timeline.
  bool same_outcome(const EventRecord& o) const {
    return trial == o.trial && outcome == o.outcome && index == o.index && position == o.position &&
           ancillary == o.ancillary;
  }
  bool operator==(const EventRecord&) const = default;
};

/// Detector hit at a discrete port id.
inline EventRecord detector_event(std::uint64_t trial, int detector) {
  EventRecord e;
  e.trial = trial;
  e.outcome = Outcome::detector;
  e.index = detector;
  e.position = detector;
  return e;
}

/// Counts over strictly increasing edges.
struct Histogram {
  std::vector<double> edges;
  std::vector<std::uint64_t> counts;
  std::uint64_t total = 0;

  static Histogram empty(std::vector<double> edges);

  void validate() const;
  std::size_t bins() const { return counts.size(); }
  std::vector<double> centers() const;
  /// Bin containing x (half-open [left, right), last bin closed); nullopt
  /// outside the edges.
  std::optional<std::size_t> find_bin(double x) const;

  bool operator==(const Histogram&) const = default;
};

/// Bin-wise sum. Edges must be identical.
Histogram merge(const Histogram& a, const Histogram& b);

}  // namespace dualsim
