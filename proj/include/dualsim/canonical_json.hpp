#pragma once

#include <string>

#include <json.hpp>

namespace dualsim {

/// Deterministic JSON text: object keys sorted, two-space indentation,
/// arrays of scalars on one line, floats with 17 significant digits and
/// integers verbatim. Non-finite numbers are rejected.
std::string canonical_dump(const nlohmann::json& doc);

/// %.17g rendering of a finite double.
std::string format_double(double v);

}  // namespace dualsim
