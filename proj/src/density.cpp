#include "dualsim/density.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

#include "dualsim/error.hpp"

namespace dualsim {

DensityMatrix::DensityMatrix(Basis basis, ComplexMatrix matrix) : basis_(std::move(basis)), matrix_(std::move(matrix)) {
  const auto n = static_cast<Eigen::Index>(basis_.dimension());
  if (matrix_.rows() != n || matrix_.cols() != n) {
    throw Error(ErrorCode::dimension_mismatch, "density matrix does not match basis dimension");
  }
  if (!matrix_.allFinite()) throw Error(ErrorCode::invalid_density, "non-finite density matrix entry");
  if ((matrix_.adjoint() - matrix_).cwiseAbs().maxCoeff() > kExactTol) {
    throw Error(ErrorCode::invalid_density, "density matrix is not hermitian");
  }
  if (std::abs(matrix_.trace().real() - 1.0) > kExactTol) {
    throw Error(ErrorCode::invalid_density, "density matrix trace is not 1");
  }
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(matrix_, Eigen::EigenvaluesOnly);
  if (solver.eigenvalues().minCoeff() < -kChainTol) {
    throw Error(ErrorCode::invalid_density, "density matrix has a negative eigenvalue");
  }
}

double DensityMatrix::purity() const { return (matrix_ * matrix_).trace().real(); }

bool DensityMatrix::is_idempotent(double tol) const {
  return (matrix_ * matrix_ - matrix_).cwiseAbs().maxCoeff() <= tol;
}

DensityMatrix density_from_pure(const StateVector& s) {
  if (!s.is_normalized()) throw Error(ErrorCode::not_normalized, "density_from_pure requires a normalized state");
  return DensityMatrix(s.basis(), s.amplitudes() * s.amplitudes().adjoint());
}

DensityMatrix partial_trace(const DensityMatrix& rho, const std::set<Subsystem>& keep) {
  const auto& regs = rho.basis().registers();
  std::vector<Register> kept;
  std::vector<bool> is_kept(regs.size());
  for (std::size_t i = 0; i < regs.size(); ++i) {
    is_kept[i] = keep.contains(regs[i].subsystem);
    if (is_kept[i]) kept.push_back(regs[i]);
  }
  for (auto s : keep) {
    if (!rho.basis().contains(s)) {
      throw Error(ErrorCode::invalid_subsystem_set, "cannot keep absent subsystem " + to_string(s));
    }
  }
  if (kept.empty() || kept.size() == regs.size()) {
    throw Error(ErrorCode::invalid_subsystem_set, "kept set must be a non-empty proper subset of the subsystems");
  }

  // Split each flat index into (kept index, traced index).
  const std::size_t n = rho.dim();
  std::vector<std::size_t> kept_idx(n), traced_idx(n);
  for (std::size_t flat = 0; flat < n; ++flat) {
    std::size_t rem = flat, k = 0, t = 0, kstride = 1, tstride = 1;
    for (std::size_t r = regs.size(); r-- > 0;) {
      const auto d = regs[r].dim();
      const auto digit = rem % d;
      rem /= d;
      if (is_kept[r]) {
        k += digit * kstride;
        kstride *= d;
      } else {
        t += digit * tstride;
        tstride *= d;
      }
    }
    kept_idx[flat] = k;
    traced_idx[flat] = t;
  }

  Basis out_basis(std::move(kept));
  const auto m = static_cast<Eigen::Index>(out_basis.dimension());
  ComplexMatrix out = ComplexMatrix::Zero(m, m);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j < n; ++j)
      if (traced_idx[i] == traced_idx[j]) {
        out(static_cast<Eigen::Index>(kept_idx[i]), static_cast<Eigen::Index>(kept_idx[j])) += rho(i, j);
      }
  return DensityMatrix(std::move(out_basis), std::move(out));
}

double path_coherence(const DensityMatrix& path_rho) {
  if (path_rho.dim() != 2) throw Error(ErrorCode::dimension_mismatch, "path coherence needs a two-path density matrix");
  const double pop = path_rho(0, 0).real() + path_rho(1, 1).real();
  return 2.0 * std::abs(path_rho(0, 1)) / pop;
}

}  // namespace dualsim
