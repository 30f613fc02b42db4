#include "dualsim/catalog.hpp"

#include <array>
#include <string>

namespace dualsim {
namespace {

struct RawEntry {
  std::string_view file;
  std::string_view text;
};

constexpr RawEntry kRaw[] = {
#include "catalog_data.inc"
};

std::string_view describe(std::string_view file) {
  if (file == "double_slit.json") return "Two open slits, unmarked paths: full-contrast fringes";
  if (file == "which_path.json") return "Slit detectors D1/D2 entangled with the path: anti-coincident clicks, no fringes";
  if (file == "neutron_absorber.json") return "Neutron interferometer with a partial absorber in one arm";
  if (file == "mach_zehnder.json") return "Balanced Mach-Zehnder with both beam splitters: one dark port";
  if (file == "delayed_choice.json") return "Second beam splitter inserted or removed after the photon is inside";
  if (file == "quantum_eraser.json") return "Polarization-tagged slits with a diagonal eraser and post-selection";
  if (file == "photoelectric.json") return "Photo-detector transition rate against field frequency";
  return "";
}

std::array<CatalogEntry, std::size(kRaw)> build() {
  std::array<CatalogEntry, std::size(kRaw)> out{};
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = {kRaw[i].file, describe(kRaw[i].file), kRaw[i].text};
  return out;
}

const auto kCatalog = build();

}  // namespace

std::span<const CatalogEntry> builtin_catalog() { return kCatalog; }

std::optional<CatalogEntry> find_builtin(std::string_view name) {
  for (const auto& e : kCatalog) {
    if (e.file == name) return e;
    if (e.file.size() == name.size() + 5 && e.file.substr(0, name.size()) == name) return e;
  }
  return std::nullopt;
}

}  // namespace dualsim
