#pragma once

#include <complex>
#include <cstddef>
#include <initializer_list>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace dualsim {

using Amplitude = std::complex<double>;
using ComplexVector = Eigen::VectorXcd;
using ComplexMatrix = Eigen::MatrixXcd;

/// Identity tolerance for exact-arithmetic checks.
inline constexpr double kExactTol = 1e-12;
/// Tolerance for results of chained operations.
inline constexpr double kChainTol = 1e-10;

enum class Subsystem { path, marker, polarization };

std::string to_string(Subsystem s);

struct BasisLabel {
  Subsystem subsystem;
  int index;
  std::string name;

  bool operator==(const BasisLabel&) const = default;
};

/// One tensor factor: a subsystem and the names of its basis states.
struct Register {
  Subsystem subsystem;
  std::vector<std::string> names;

  std::size_t dim() const { return names.size(); }
  bool operator==(const Register&) const = default;
};

Register path_register();          // S1, S2
Register marker_register();        // D1, D2
Register polarization_register();  // H, V

/// Ordered tensor-product basis. Flat indices are row-major over the
/// registers, so the first register varies slowest.
class Basis {
 public:
  Basis() = default;
  explicit Basis(std::vector<Register> registers);

  const std::vector<Register>& registers() const { return registers_; }
  std::size_t dimension() const;
  bool contains(Subsystem s) const;
  /// Position of the register for `s`; throws if absent.
  std::size_t position(Subsystem s) const;
  std::vector<BasisLabel> labels(std::size_t flat_index) const;

  bool operator==(const Basis&) const = default;

 private:
  std::vector<Register> registers_;
};

class StateVector {
 public:
  StateVector(Basis basis, ComplexVector amplitudes);
  StateVector(Register reg, std::initializer_list<Amplitude> amplitudes);

  static StateVector basis_state(const Register& reg, std::size_t index);

  const Basis& basis() const { return basis_; }
  const ComplexVector& amplitudes() const { return amplitudes_; }
  Amplitude operator[](std::size_t i) const { return amplitudes_(static_cast<Eigen::Index>(i)); }
  std::size_t size() const { return static_cast<std::size_t>(amplitudes_.size()); }

  double norm() const { return amplitudes_.norm(); }
  bool is_normalized(double tol = kChainTol) const;
  StateVector normalized() const;

  /// Copy with the global phase fixed so that the first nonzero amplitude is
  /// real and positive.
  StateVector canonical_phase() const;

 private:
  Basis basis_;
  ComplexVector amplitudes_;
};

StateVector tensor(const StateVector& a, const StateVector& b);
Amplitude inner_product(const StateVector& a, const StateVector& b);

/// True when |<a|b>| = 1 within `tol`, i.e. the states differ by a global phase.
bool equal_up_to_phase(const StateVector& a, const StateVector& b, double tol = kChainTol);

/// Largest component-wise distance after fixing both global phases.
double phase_fixed_distance(const StateVector& a, const StateVector& b);

}  // namespace dualsim
