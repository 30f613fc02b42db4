#pragma once

#include <span>
#include <vector>

#include "dualsim/density.hpp"
#include "dualsim/operator.hpp"
#include "dualsim/random.hpp"

namespace dualsim {

/// How project() picks the outcome. `sample` draws one uniform; the forced
/// modes post-select and fail when the requested branch has probability 0.
enum class ProjectionMode { sample, force_success, force_failure };

struct ProjectionResult {
  bool outcome;
  StateVector collapsed;
  /// <s|P|s>, the success probability, regardless of the realized branch.
  double probability;
};

/// Process 1: projective measurement {P, 1-P} with renormalized collapse.
ProjectionResult project(const StateVector& s, const Operator& p, RandomStream& rng,
                         ProjectionMode mode = ProjectionMode::sample);

/// Born probabilities for an orthogonal, complete projector set.
std::vector<double> born_probabilities(const StateVector& s, std::span<const Operator> projectors);
std::vector<double> born_probabilities(const DensityMatrix& rho, std::span<const Operator> projectors);

/// Computational-basis projectors |i><i| for every index of a register.
std::vector<Operator> register_projectors(const Register& reg);

/// Inverse-CDF selection of an index with one uniform u in [0, 1).
std::size_t select_index(std::span<const double> probabilities, double u);

}  // namespace dualsim
