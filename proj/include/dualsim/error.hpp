#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace dualsim {

enum class ErrorCode {
  subsystem_collision,
  dimension_mismatch,
  basis_mismatch,
  not_unitary,
  not_projector,
  not_hermitian,
  not_normalized,
  invalid_density,
  invalid_subsystem_set,
  impossible_outcome,
  incomplete_projectors,
  invalid_argument,
  mode_mismatch,
  undefined_duality,
  under_resolved,
  incompatible_binning,
  out_of_range,
  empty_distribution,
};

std::string_view to_string(ErrorCode code);

/// Exception type raised by every dualsim module. The code is stable; the
/// message is for humans.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message)
      : std::runtime_error(message), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace dualsim
