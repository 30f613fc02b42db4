#pragma once

#include <cstddef>

#include "dualsim/state.hpp"

namespace dualsim {

enum class OperatorKind { unitary, projector, hermitian };

/// Square matrix tagged with the algebraic property it was validated for.
/// Construction throws when the matrix does not satisfy its kind.
class Operator {
 public:
  Operator(ComplexMatrix matrix, OperatorKind kind);

  static Operator identity(std::size_t dim);

  const ComplexMatrix& matrix() const { return matrix_; }
  OperatorKind kind() const { return kind_; }
  std::size_t dim() const { return static_cast<std::size_t>(matrix_.rows()); }

  /// U^dagger. Unitaries stay unitary, projectors and hermitian operators
  /// are their own adjoints.
  Operator adjoint() const;
  /// 1 - P for a projector.
  Operator complement() const;

 private:
  ComplexMatrix matrix_;
  OperatorKind kind_;
};

/// Residual of the kind's defining identity: max |U^dagger U - 1| for
/// unitaries, max(|P^2 - P|, |P^dagger - P|) for projectors, |H^dagger - H|
/// for hermitian matrices.
double kind_residual(const ComplexMatrix& m, OperatorKind kind);

/// Composition a*b (b acts first). Result kind is unitary when both are,
/// otherwise the product must validate as `kind`.
Operator compose(const Operator& a, const Operator& b);

/// Lift an operator acting on a single register to the full basis by
/// tensoring identities on every other register.
Operator embed(const Operator& local, Subsystem target, const Basis& full);

/// Process 2: unitary, norm-preserving, reversible via adjoint().
StateVector apply_unitary(const Operator& u, const StateVector& s);

/// Raw linear action of any operator (used for projections).
StateVector apply(const Operator& op, const StateVector& s);

/// <s|A|s> for a hermitian or projector operator.
double expectation(const Operator& op, const StateVector& s);

}  // namespace dualsim
