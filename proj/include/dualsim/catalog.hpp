#pragma once

#include <optional>
#include <span>
#include <string_view>

namespace dualsim {

/// One shipped scenario file.
struct CatalogEntry {
  std::string_view file;         // e.g. "double_slit.json"
  std::string_view description;  // one line
  std::string_view text;         // file contents
};

std::span<const CatalogEntry> builtin_catalog();
std::optional<CatalogEntry> find_builtin(std::string_view name);

}  // namespace dualsim
