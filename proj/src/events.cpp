#include "dualsim/events.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "dualsim/error.hpp"

namespace dualsim {

Histogram Histogram::empty(std::vector<double> edges) {
  Histogram h;
  h.counts.assign(edges.empty() ? 0 : edges.size() - 1, 0);
  h.edges = std::move(edges);
  h.validate();
  return h;
}

void Histogram::validate() const {
  if (edges.size() < 2 || counts.size() + 1 != edges.size()) {
    throw Error(ErrorCode::incompatible_binning, "histogram needs bins + 1 edges and at least one bin");
  }
  for (std::size_t i = 0; i < edges.size(); ++i) {
    if (!std::isfinite(edges[i]) || (i > 0 && !(edges[i] > edges[i - 1]))) {
      throw Error(ErrorCode::incompatible_binning, "histogram edges must be finite and strictly increasing");
    }
  }
  if (std::accumulate(counts.begin(), counts.end(), std::uint64_t{0}) != total) {
    throw Error(ErrorCode::invalid_argument, "histogram counts do not sum to total");
  }
}

std::vector<double> Histogram::centers() const {
  std::vector<double> out(bins());
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = 0.5 * (edges[i] + edges[i + 1]);
  return out;
}

std::optional<std::size_t> Histogram::find_bin(double x) const {
  if (!(x >= edges.front() && x <= edges.back())) return std::nullopt;
  auto it = std::upper_bound(edges.begin(), edges.end(), x);
  if (it == edges.end()) return bins() - 1;
  return static_cast<std::size_t>(it - edges.begin()) - 1;
}

Histogram merge(const Histogram& a, const Histogram& b) {
  if (a.edges != b.edges) throw Error(ErrorCode::incompatible_binning, "cannot merge histograms with different edges");
  Histogram out = a;
  for (std::size_t i = 0; i < out.counts.size(); ++i) out.counts[i] += b.counts[i];
  out.total += b.total;
  return out;
}

}  // namespace dualsim
