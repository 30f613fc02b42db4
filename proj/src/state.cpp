#include "dualsim/state.hpp"

#include <cmath>
#include <set>

#include "dualsim/error.hpp"

namespace dualsim {

std::string to_string(Subsystem s) {
  switch (s) {
    case Subsystem::path: return "path";
    case Subsystem::marker: return "marker";
    case Subsystem::polarization: return "polarization";
  }
  return "unknown";
}

Register path_register() { return {Subsystem::path, {"S1", "S2"}}; }
Register marker_register() { return {Subsystem::marker, {"D1", "D2"}}; }
Register polarization_register() { return {Subsystem::polarization, {"H", "V"}}; }

Basis::Basis(std::vector<Register> registers) : registers_(std::move(registers)) {
  std::set<Subsystem> seen;
  for (const auto& r : registers_) {
    if (r.dim() == 0) {
      throw Error(ErrorCode::invalid_argument, "register " + to_string(r.subsystem) + " is empty");
    }
    if (!seen.insert(r.subsystem).second) {
      throw Error(ErrorCode::subsystem_collision, "subsystem collision: " + to_string(r.subsystem));
    }
  }
}

std::size_t Basis::dimension() const {
  std::size_t d = 1;
  for (const auto& r : registers_) d *= r.dim();
  return d;
}

bool Basis::contains(Subsystem s) const {
  for (const auto& r : registers_)
    if (r.subsystem == s) return true;
  return false;
}

std::size_t Basis::position(Subsystem s) const {
  for (std::size_t i = 0; i < registers_.size(); ++i)
    if (registers_[i].subsystem == s) return i;
  throw Error(ErrorCode::invalid_subsystem_set, "basis has no " + to_string(s) + " register");
}

std::vector<BasisLabel> Basis::labels(std::size_t flat_index) const {
  if (flat_index >= dimension()) {
    throw Error(ErrorCode::out_of_range, "basis index out of range");
  }
  std::vector<BasisLabel> out(registers_.size());
  for (std::size_t k = registers_.size(); k-- > 0;) {
    const auto& r = registers_[k];
    const auto idx = flat_index % r.dim();
    flat_index /= r.dim();
    out[k] = {r.subsystem, static_cast<int>(idx), r.names[idx]};
  }
  return out;
}

StateVector::StateVector(Basis basis, ComplexVector amplitudes)
    : basis_(std::move(basis)), amplitudes_(std::move(amplitudes)) {
  if (static_cast<std::size_t>(amplitudes_.size()) != basis_.dimension()) {
    throw Error(ErrorCode::dimension_mismatch, "amplitude count does not match basis dimension");
  }
  if (!amplitudes_.allFinite()) {
    throw Error(ErrorCode::invalid_argument, "non-finite amplitude");
  }
}

StateVector::StateVector(Register reg, std::initializer_list<Amplitude> amplitudes)
    : StateVector(Basis({std::move(reg)}),
                  Eigen::Map<const ComplexVector>(amplitudes.begin(),
                                                  static_cast<Eigen::Index>(amplitudes.size()))) {}

StateVector StateVector::basis_state(const Register& reg, std::size_t index) {
  if (index >= reg.dim()) throw Error(ErrorCode::out_of_range, "basis index out of range");
  ComplexVector v = ComplexVector::Zero(static_cast<Eigen::Index>(reg.dim()));
  v(static_cast<Eigen::Index>(index)) = 1.0;
  return StateVector(Basis({reg}), std::move(v));
}

bool StateVector::is_normalized(double tol) const { return std::abs(amplitudes_.squaredNorm() - 1.0) <= tol; }

StateVector StateVector::normalized() const {
  const double n = norm();
  if (n == 0.0) throw Error(ErrorCode::not_normalized, "cannot normalize the zero vector");
  return StateVector(basis_, amplitudes_ / n);
}

StateVector StateVector::canonical_phase() const {
  for (Eigen::Index i = 0; i < amplitudes_.size(); ++i) {
    const double mag = std::abs(amplitudes_(i));
    if (mag > kExactTol) {
      const Amplitude phase = std::conj(amplitudes_(i)) / mag;
      return StateVector(basis_, amplitudes_ * phase);
    }
  }
  return *this;
}

StateVector tensor(const StateVector& a, const StateVector& b) {
  std::vector<Register> regs = a.basis().registers();
  for (const auto& r : b.basis().registers()) {
    if (a.basis().contains(r.subsystem)) {
      throw Error(ErrorCode::subsystem_collision, "subsystem collision: " + to_string(r.subsystem));
    }
    regs.push_back(r);
  }
  const auto na = a.amplitudes().size();
  const auto nb = b.amplitudes().size();
  ComplexVector out(na * nb);
  for (Eigen::Index i = 0; i < na; ++i)
    for (Eigen::Index j = 0; j < nb; ++j) out(i * nb + j) = a.amplitudes()(i) * b.amplitudes()(j);
  return StateVector(Basis(std::move(regs)), std::move(out));
}

Amplitude inner_product(const StateVector& a, const StateVector& b) {
  if (!(a.basis() == b.basis())) throw Error(ErrorCode::basis_mismatch, "inner product of states on different bases");
  return a.amplitudes().dot(b.amplitudes());  // conjugate-linear in the first argument
}

bool equal_up_to_phase(const StateVector& a, const StateVector& b, double tol) {
  const double na = a.norm();
  const double nb = b.norm();
  if (na == 0.0 || nb == 0.0) return na == nb;
  return std::abs(std::abs(inner_product(a, b)) / (na * nb) - 1.0) <= tol && std::abs(na - nb) <= tol;
}

double phase_fixed_distance(const StateVector& a, const StateVector& b) {
  if (!(a.basis() == b.basis())) throw Error(ErrorCode::basis_mismatch, "states on different bases");
  return (a.canonical_phase().amplitudes() - b.canonical_phase().amplitudes()).cwiseAbs().maxCoeff();
}

}  // namespace dualsim
