#include "dualsim/operator.hpp"

#include "dualsim/error.hpp"

namespace dualsim {
namespace {

double max_abs(const ComplexMatrix& m) { return m.size() == 0 ? 0.0 : m.cwiseAbs().maxCoeff(); }

ErrorCode failure_code(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::unitary: return ErrorCode::not_unitary;
    case OperatorKind::projector: return ErrorCode::not_projector;
    case OperatorKind::hermitian: return ErrorCode::not_hermitian;
  }
  return ErrorCode::invalid_argument;
}

const char* kind_name(OperatorKind kind) {
  switch (kind) {
    case OperatorKind::unitary: return "unitary";
    case OperatorKind::projector: return "projector";
    case OperatorKind::hermitian: return "hermitian";
  }
  return "?";
}

}  // namespace

double kind_residual(const ComplexMatrix& m, OperatorKind kind) {
  const auto n = m.rows();
  switch (kind) {
    case OperatorKind::unitary:
      return max_abs(m.adjoint() * m - ComplexMatrix::Identity(n, n));
    case OperatorKind::projector:
      return std::max(max_abs(m * m - m), max_abs(m.adjoint() - m));
    case OperatorKind::hermitian:
      return max_abs(m.adjoint() - m);
  }
  return 0.0;
}

Operator::Operator(ComplexMatrix matrix, OperatorKind kind) : matrix_(std::move(matrix)), kind_(kind) {
  if (matrix_.rows() != matrix_.cols() || matrix_.rows() == 0) {
    throw Error(ErrorCode::dimension_mismatch, "operator matrix must be square and non-empty");
  }
  if (!matrix_.allFinite()) throw Error(ErrorCode::invalid_argument, "non-finite operator entry");
  if (kind_residual(matrix_, kind_) > kExactTol) {
    throw Error(failure_code(kind_), std::string("matrix is not ") + kind_name(kind_));
  }
}

Operator Operator::identity(std::size_t dim) {
  const auto n = static_cast<Eigen::Index>(dim);
  return Operator(ComplexMatrix::Identity(n, n), OperatorKind::unitary);
}

Operator Operator::adjoint() const { return Operator(matrix_.adjoint(), kind_); }

Operator Operator::complement() const {
  if (kind_ != OperatorKind::projector) throw Error(ErrorCode::not_projector, "complement of a non-projector");
  const auto n = matrix_.rows();
  return Operator(ComplexMatrix::Identity(n, n) - matrix_, OperatorKind::projector);
}

Operator compose(const Operator& a, const Operator& b) {
  if (a.dim() != b.dim()) throw Error(ErrorCode::dimension_mismatch, "composition of operators of different size");
  const bool unitary = a.kind() == OperatorKind::unitary && b.kind() == OperatorKind::unitary;
  return Operator(a.matrix() * b.matrix(), unitary ? OperatorKind::unitary : a.kind());
}

Operator embed(const Operator& local, Subsystem target, const Basis& full) {
  const auto pos = full.position(target);
  const auto& regs = full.registers();
  if (regs[pos].dim() != local.dim()) {
    throw Error(ErrorCode::dimension_mismatch, "operator does not match the " + to_string(target) + " register");
  }
  std::size_t before = 1;
  std::size_t after = 1;
  for (std::size_t i = 0; i < pos; ++i) before *= regs[i].dim();
  for (std::size_t i = pos + 1; i < regs.size(); ++i) after *= regs[i].dim();

  const auto d = static_cast<Eigen::Index>(local.dim());
  const auto nb = static_cast<Eigen::Index>(before);
  const auto na = static_cast<Eigen::Index>(after);
  const auto n = nb * d * na;
  ComplexMatrix m = ComplexMatrix::Zero(n, n);
  // (1_before x local x 1_after)
  for (Eigen::Index b = 0; b < nb; ++b)
    for (Eigen::Index r = 0; r < d; ++r)
      for (Eigen::Index c = 0; c < d; ++c)
        for (Eigen::Index a = 0; a < na; ++a)
          m((b * d + r) * na + a, (b * d + c) * na + a) = local.matrix()(r, c);
  return Operator(std::move(m), local.kind());
}

StateVector apply(const Operator& op, const StateVector& s) {
  if (op.dim() != s.size()) throw Error(ErrorCode::dimension_mismatch, "operator and state dimensions differ");
  return StateVector(s.basis(), op.matrix() * s.amplitudes());
}

StateVector apply_unitary(const Operator& u, const StateVector& s) {
  if (u.kind() != OperatorKind::unitary) throw Error(ErrorCode::not_unitary, "apply_unitary requires a unitary operator");
  return apply(u, s);
}

double expectation(const Operator& op, const StateVector& s) {
  if (op.kind() == OperatorKind::unitary) throw Error(ErrorCode::not_hermitian, "expectation of a non-hermitian operator");
  if (op.dim() != s.size()) throw Error(ErrorCode::dimension_mismatch, "operator and state dimensions differ");
  return s.amplitudes().dot(op.matrix() * s.amplitudes()).real();
}

}  // namespace dualsim
