#include "dualsim/error.hpp"

namespace dualsim {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::subsystem_collision: return "subsystem_collision";
    case ErrorCode::dimension_mismatch: return "dimension_mismatch";
    case ErrorCode::basis_mismatch: return "basis_mismatch";
    case ErrorCode::not_unitary: return "not_unitary";
    case ErrorCode::not_projector: return "not_projector";
    case ErrorCode::not_hermitian: return "not_hermitian";
    case ErrorCode::not_normalized: return "not_normalized";
    case ErrorCode::invalid_density: return "invalid_density";
    case ErrorCode::invalid_subsystem_set: return "invalid_subsystem_set";
    case ErrorCode::impossible_outcome: return "impossible_outcome";
    case ErrorCode::incomplete_projectors: return "incomplete_projectors";
    case ErrorCode::invalid_argument: return "invalid_argument";
    case ErrorCode::mode_mismatch: return "mode_mismatch";
    case ErrorCode::undefined_duality: return "undefined_duality";
    case ErrorCode::under_resolved: return "under_resolved";
    case ErrorCode::incompatible_binning: return "incompatible_binning";
    case ErrorCode::out_of_range: return "out_of_range";
    case ErrorCode::empty_distribution: return "empty_distribution";
  }
  return "unknown";
}

}  // namespace dualsim
