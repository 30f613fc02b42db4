#include "dualsim/measure.hpp"

#include <algorithm>
#include <cmath>

#include "dualsim/error.hpp"

namespace dualsim {
namespace {

void check_projector_set(std::span<const Operator> projectors, std::size_t dim) {
  if (projectors.empty()) throw Error(ErrorCode::incomplete_projectors, "empty projector set");
  const auto n = static_cast<Eigen::Index>(dim);
  ComplexMatrix sum = ComplexMatrix::Zero(n, n);
  for (std::size_t i = 0; i < projectors.size(); ++i) {
    const auto& p = projectors[i];
    if (p.kind() != OperatorKind::projector) throw Error(ErrorCode::not_projector, "measurement element is not a projector");
    if (p.dim() != dim) throw Error(ErrorCode::dimension_mismatch, "projector dimension does not match state");
    for (std::size_t j = i + 1; j < projectors.size(); ++j) {
      if ((p.matrix() * projectors[j].matrix()).cwiseAbs().maxCoeff() > kExactTol) {
        throw Error(ErrorCode::incomplete_projectors, "projectors are not mutually orthogonal");
      }
    }
    sum += p.matrix();
  }
  if ((sum - ComplexMatrix::Identity(n, n)).cwiseAbs().maxCoeff() > kExactTol) {
    throw Error(ErrorCode::incomplete_projectors, "projectors do not sum to the identity");
  }
}

}  // namespace

ProjectionResult project(const StateVector& s, const Operator& p, RandomStream& rng, ProjectionMode mode) {
  if (p.kind() != OperatorKind::projector) throw Error(ErrorCode::not_projector, "project requires a projector");
  const double norm2 = s.amplitudes().squaredNorm();
  const double prob = std::clamp(expectation(p, s) / norm2, 0.0, 1.0);

  bool outcome = false;
  switch (mode) {
    case ProjectionMode::sample: outcome = rng.uniform() < prob; break;
    case ProjectionMode::force_success:
      if (prob == 0.0) throw Error(ErrorCode::impossible_outcome, "impossible outcome");
      outcome = true;
      break;
    case ProjectionMode::force_failure:
      if (prob == 1.0) throw Error(ErrorCode::impossible_outcome, "impossible outcome");
      outcome = false;
      break;
  }
  const auto branch = outcome ? apply(p, s) : apply(p.complement(), s);
  if (branch.norm() == 0.0) throw Error(ErrorCode::impossible_outcome, "impossible outcome");
  return {outcome, branch.normalized(), prob};
}

std::vector<double> born_probabilities(const StateVector& s, std::span<const Operator> projectors) {
  check_projector_set(projectors, s.size());
  const double norm2 = s.amplitudes().squaredNorm();
  std::vector<double> out;
  out.reserve(projectors.size());
  for (const auto& p : projectors) out.push_back(std::max(0.0, expectation(p, s) / norm2));
  return out;
}

std::vector<double> born_probabilities(const DensityMatrix& rho, std::span<const Operator> projectors) {
  check_projector_set(projectors, rho.dim());
  std::vector<double> out;
  out.reserve(projectors.size());
  for (const auto& p : projectors) out.push_back(std::max(0.0, (rho.matrix() * p.matrix()).trace().real()));
  return out;
}

std::vector<Operator> register_projectors(const Register& reg) {
  std::vector<Operator> out;
  const auto n = static_cast<Eigen::Index>(reg.dim());
  for (Eigen::Index i = 0; i < n; ++i) {
    ComplexMatrix m = ComplexMatrix::Zero(n, n);
    m(i, i) = 1.0;
    out.emplace_back(std::move(m), OperatorKind::projector);
  }
  return out;
}

std::size_t select_index(std::span<const double> probabilities, double u) {
  double total = 0.0;
  for (double p : probabilities) total += p;
  if (!(total > 0.0)) throw Error(ErrorCode::empty_distribution, "distribution has zero total weight");
  const double target = u * total;
  double cumulative = 0.0;
  std::size_t last_nonzero = 0;
  for (std::size_t i = 0; i < probabilities.size(); ++i) {
    if (probabilities[i] <= 0.0) continue;
    cumulative += probabilities[i];
    last_nonzero = i;
    if (target < cumulative) return i;
  }
  return last_nonzero;
}

}  // namespace dualsim
