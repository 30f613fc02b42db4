#include "dualsim/montecarlo.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include <Eigen/Dense>
#include <boost/math/distributions/chi_squared.hpp>

#include "dualsim/error.hpp"
#include "dualsim/random.hpp"

namespace dualsim {

InverseCdf::InverseCdf(std::span<const double> weights) : cumulative_(weights.size()) {
  double sum = 0.0;
  for (std::size_t i = 0; i < weights.size(); ++i) {
    if (!std::isfinite(weights[i]) || weights[i] < 0.0) {
      throw Error(ErrorCode::invalid_argument, "sampling weights must be finite and non-negative");
    }
    sum += weights[i];
    cumulative_[i] = sum;
  }
  if (!(sum > 0.0)) throw Error(ErrorCode::empty_distribution, "pattern has zero total weight");
  for (double& c : cumulative_) c /= sum;
  // Pin the tail of the last non-empty bin to exactly 1.
  for (std::size_t i = cumulative_.size(); i-- > 0;) {
    const double before = i == 0 ? 0.0 : cumulative_[i - 1];
    cumulative_[i] = 1.0;
    if (before < 1.0 && weights[i] > 0.0) break;
  }
}

InverseCdf::Draw InverseCdf::operator()(double u) const {
  auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), u);
  if (it == cumulative_.end()) --it;
  const auto idx = static_cast<std::size_t>(it - cumulative_.begin());
  const double lo = idx == 0 ? 0.0 : cumulative_[idx - 1];
  const double mass = cumulative_[idx] - lo;
  const double frac = mass > 0.0 ? std::clamp((u - lo) / mass, 0.0, 1.0) : 0.5;
  return {idx, frac};
}

double InverseCdf::probability(std::size_t i) const {
  return cumulative_[i] - (i == 0 ? 0.0 : cumulative_[i - 1]);
}

EventRecord sample_screen_event(const ScreenSampler& sampler, std::uint64_t trial, std::uint64_t seed) {
  return sample_screen_event(sampler, trial, RandomStream(seed).substream(trial, Channel::screen));
}

EventRecord sample_screen_event(const ScreenSampler& sampler, std::uint64_t trial, RandomStream stream) {
  const auto draw = sampler.cdf(stream.uniform());
  const double left = sampler.lo + static_cast<double>(draw.index) * sampler.width;
  const double right = sampler.lo + static_cast<double>(draw.index + 1) * sampler.width;
  EventRecord e;
  e.trial = trial;
  e.outcome = Outcome::screen;
  e.index = static_cast<std::int32_t>(draw.index);
  e.position = std::clamp(left + draw.fraction * sampler.width, left, std::nextafter(right, left));
  return e;
}

ScreenSampler make_sampler(const ScreenPattern& pattern) {
  pattern.validate();
  const double w = pattern.bin_width();
  return {InverseCdf(pattern.intensities), pattern.positions.front() - 0.5 * w, w};
}

std::vector<EventRecord> sample_events(const ScreenPattern& pattern, std::uint64_t n, std::uint64_t seed,
                                       Execution exec) {
  if (pattern.normalization != Normalization::per_event) {
    throw Error(ErrorCode::invalid_argument, "sampling needs a per-event pattern");
  }
  if (n == 0) throw Error(ErrorCode::invalid_argument, "event count must be at least 1");
  const auto sampler = make_sampler(pattern);
  return exec == Execution::serial ? serial::sample_events(sampler, n, seed) : omp::sample_events(sampler, n, seed);
}

Histogram accumulate(std::span<const EventRecord> events, std::vector<double> edges, Execution exec) {
  return exec == Execution::serial ? serial::accumulate(events, std::move(edges))
                                   : omp::accumulate(events, std::move(edges));
}

double estimate_visibility(std::span<const double> centers, std::span<const double> values, const FringeModel& model) {
  if (centers.size() != values.size() || centers.empty()) {
    throw Error(ErrorCode::dimension_mismatch, "visibility needs matching positions and values");
  }
  if (!model.envelope.empty() && model.envelope.size() != values.size()) {
    throw Error(ErrorCode::dimension_mismatch, "envelope length differs from data length");
  }
  if (!(model.period > 0.0)) throw Error(ErrorCode::invalid_argument, "fringe period must be positive");
  if (centers.size() > 1) {
    const double spacing = (centers.back() - centers.front()) / static_cast<double>(centers.size() - 1);
    if (model.period / spacing < 3.0) throw Error(ErrorCode::under_resolved, "under-resolved fringes");
  }

  const double half = 0.5 * model.period;
  const double k = 2.0 * std::numbers::pi / model.period;
  std::vector<std::array<double, 4>> rows;  // cos, sin, y
  for (std::size_t i = 0; i < centers.size(); ++i) {
    const double dx = centers[i] - model.center;
    if (dx < -half || dx >= half) continue;
    double y = values[i];
    if (!model.envelope.empty()) {
      const double env = model.envelope[i];
      if (!(env > 1e-12)) continue;
      y /= env;
    }
    rows.push_back({1.0, std::cos(k * dx), std::sin(k * dx), y});
  }
  if (rows.size() < 3) throw Error(ErrorCode::under_resolved, "under-resolved fringes");

  Eigen::MatrixXd design(static_cast<Eigen::Index>(rows.size()), 3);
  Eigen::VectorXd y(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t r = 0; r < rows.size(); ++r) {
    const auto i = static_cast<Eigen::Index>(r);
    design(i, 0) = rows[r][0];
    design(i, 1) = rows[r][1];
    design(i, 2) = rows[r][2];
    y(i) = rows[r][3];
  }
  const Eigen::Vector3d coef = design.colPivHouseholderQr().solve(y);
  if (!(coef(0) > 0.0)) return 0.0;
  return std::clamp(std::hypot(coef(1), coef(2)) / coef(0), 0.0, 1.0);
}

double estimate_visibility(const ScreenPattern& pattern) {
  pattern.validate();
  if (pattern.fringe) return estimate_visibility(pattern.positions, pattern.intensities, *pattern.fringe);
  FringeModel whole;
  whole.period = pattern.bin_width() * static_cast<double>(pattern.size());
  whole.center = 0.5 * (pattern.positions.front() + pattern.positions.back());
  return estimate_visibility(pattern.positions, pattern.intensities, whole);
}

double estimate_visibility(const Histogram& h, const FringeModel& model) {
  h.validate();
  std::vector<double> values(h.counts.begin(), h.counts.end());
  return estimate_visibility(h.centers(), values, model);
}

ChiSquareResult chi_square_test(const Histogram& h, const ScreenPattern& expected, double confidence) {
  h.validate();
  expected.validate();
  const auto edges = expected.edges();
  if (edges.size() != h.edges.size()) throw Error(ErrorCode::incompatible_binning, "histogram and pattern bin counts differ");
  const double tol = 1e-9 * expected.bin_width();
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (std::abs(edges[i] - h.edges[i]) > tol) {
      throw Error(ErrorCode::incompatible_binning, "histogram and pattern edges differ");
    }
  }

  const double norm = expected.total();
  const double n = static_cast<double>(h.total);
  double statistic = 0.0;
  std::int64_t groups = 0;
  double obs = 0.0;
  double exp = 0.0;
  double pending_obs = 0.0;
  double pending_exp = 0.0;
  for (std::size_t i = 0; i < h.bins(); ++i) {
    obs += static_cast<double>(h.counts[i]);
    exp += n * expected.intensities[i] / norm;
    if (exp >= 5.0) {
      if (groups > 0 || pending_exp > 0.0) {
        // flush previous complete group
        statistic += (pending_obs - pending_exp) * (pending_obs - pending_exp) / pending_exp;
      }
      pending_obs = obs;
      pending_exp = exp;
      ++groups;
      obs = 0.0;
      exp = 0.0;
    }
  }
  // Leftover bins join the last complete group.
  pending_obs += obs;
  pending_exp += exp;
  if (groups == 0 && pending_exp > 0.0) groups = 1;
  if (pending_exp > 0.0) statistic += (pending_obs - pending_exp) * (pending_obs - pending_exp) / pending_exp;

  ChiSquareResult result;
  result.statistic = statistic;
  result.dof = std::max<std::int64_t>(groups - 1, 0);
  if (result.dof == 0) {
    result.threshold = 0.0;
    result.pass = true;
    return result;
  }
  boost::math::chi_squared dist(static_cast<double>(result.dof));
  result.threshold = boost::math::quantile(dist, confidence);
  result.pass = statistic < result.threshold;
  return result;
}

}  // namespace dualsim
