#pragma once

#include <set>

#include "dualsim/state.hpp"

namespace dualsim {

/// Hermitian, positive, unit-trace matrix over a labeled basis.
class DensityMatrix {
 public:
  DensityMatrix(Basis basis, ComplexMatrix matrix);

  const Basis& basis() const { return basis_; }
  const ComplexMatrix& matrix() const { return matrix_; }
  Amplitude operator()(std::size_t r, std::size_t c) const {
    return matrix_(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c));
  }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }

  double trace() const { return matrix_.trace().real(); }
  /// Tr(rho^2); 1 for pure states.
  double purity() const;
  bool is_idempotent(double tol = kExactTol) const;

 private:
  Basis basis_;
  ComplexMatrix matrix_;
};

DensityMatrix density_from_pure(const StateVector& s);

/// Trace out every register whose subsystem is not in `keep`. The kept
/// registers retain their original order.
DensityMatrix partial_trace(const DensityMatrix& rho, const std::set<Subsystem>& keep);

/// Two-path coherence visibility 2|rho_01| / (rho_00 + rho_11) of a path
/// density matrix.
double path_coherence(const DensityMatrix& path_rho);

}  // namespace dualsim
