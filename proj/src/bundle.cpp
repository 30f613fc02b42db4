#include "dualsim/bundle.hpp"

#include <sstream>

#include "dualsim/canonical_json.hpp"
#include "dualsim/error.hpp"

namespace dualsim {
namespace {

using nlohmann::json;

constexpr std::string_view kBundleFormat = "dualsim.bundle/1";

std::string_view to_string(Normalization n) { return n == Normalization::per_event ? "per_event" : "relative"; }
std::string_view to_string(Provenance p) { return p == Provenance::analytic ? "analytic" : "monte_carlo"; }

json pattern_json(const ScreenPattern& p) {
  json j;
  j["positions"] = p.positions;
  j["intensities"] = p.intensities;
  j["normalization"] = to_string(p.normalization);
  j["provenance"] = to_string(p.provenance);
  if (p.fringe) {
    json f;
    f["period"] = p.fringe->period;
    f["center"] = p.fringe->center;
    f["envelope"] = p.fringe->envelope;
    j["fringe"] = std::move(f);
  }
  return j;
}

ScreenPattern pattern_from_json(const json& j) {
  ScreenPattern p;
  p.positions = j.at("positions").get<std::vector<double>>();
  p.intensities = j.at("intensities").get<std::vector<double>>();
  const auto norm = j.at("normalization").get<std::string>();
  if (norm != "per_event" && norm != "relative") throw Error(ErrorCode::invalid_argument, "unknown normalization " + norm);
  p.normalization = norm == "per_event" ? Normalization::per_event : Normalization::relative;
  const auto prov = j.at("provenance").get<std::string>();
  if (prov != "analytic" && prov != "monte_carlo") throw Error(ErrorCode::invalid_argument, "unknown provenance " + prov);
  p.provenance = prov == "analytic" ? Provenance::analytic : Provenance::monte_carlo;
  if (j.contains("fringe")) {
    const auto& f = j.at("fringe");
    p.fringe = FringeModel{f.at("period").get<double>(), f.at("center").get<double>(),
                           f.at("envelope").get<std::vector<double>>()};
  }
  p.validate();
  return p;
}

json histogram_json(const Histogram& h) {
  json j;
  j["edges"] = h.edges;
  j["counts"] = h.counts;
  j["total"] = h.total;
  return j;
}

Histogram histogram_from_json(const json& j) {
  Histogram h;
  h.edges = j.at("edges").get<std::vector<double>>();
  h.counts = j.at("counts").get<std::vector<std::uint64_t>>();
  h.total = j.at("total").get<std::uint64_t>();
  h.validate();
  return h;
}

json summary_json(const RunSummary& s) {
  json j;
  j["n_events"] = s.n_events;
  j["seed"] = s.seed;
  j["empirical_visibility"] = s.empirical_visibility;
  j["chi_square"] = s.chi_square;
  j["degrees_of_freedom"] = s.degrees_of_freedom;
  j["metrics"] = json::object();
  for (const auto& [k, v] : s.metrics) j["metrics"][k] = v;
  return j;
}

RunSummary summary_from_json(const json& j) {
  RunSummary s;
  s.n_events = j.at("n_events").get<std::uint64_t>();
  s.seed = j.at("seed").get<std::uint64_t>();
  s.empirical_visibility = j.at("empirical_visibility").get<double>();
  s.chi_square = j.at("chi_square").get<double>();
  s.degrees_of_freedom = j.at("degrees_of_freedom").get<std::int64_t>();
  for (const auto& [k, v] : j.at("metrics").items()) s.metrics[k] = v.get<double>();
  return s;
}

std::string summary_csv(const RunSummary& s) {
  std::string out = "key,value\n";
  auto row = [&](const std::string& k, const std::string& v) { out += k + "," + v + "\n"; };
  row("n_events", std::to_string(s.n_events));
  row("seed", std::to_string(s.seed));
  row("empirical_visibility", format_double(s.empirical_visibility));
  row("chi_square", format_double(s.chi_square));
  row("degrees_of_freedom", std::to_string(s.degrees_of_freedom));
  for (const auto& [k, v] : s.metrics) row(k, format_double(v));
  return out;
}

}  // namespace

std::string pattern_csv(const ScreenPattern& p) {
  std::string out = "position,intensity\n";
  for (std::size_t i = 0; i < p.positions.size(); ++i)
    out += format_double(p.positions[i]) + "," + format_double(p.intensities[i]) + "\n";
  return out;
}

std::string histogram_csv(const Histogram& h) {
  std::string out = "bin_left,bin_right,count\n";
  for (std::size_t i = 0; i < h.counts.size(); ++i)
    out += format_double(h.edges[i]) + "," + format_double(h.edges[i + 1]) + "," + std::to_string(h.counts[i]) + "\n";
  return out;
}

std::string bundle_to_json_text(const ResultBundle& b) {
  json j;
  j["format"] = kBundleFormat;
  j["tool_version"] = b.tool_version;
  j["scenario"] = scenario_to_json(b.scenario);
  j["patterns"] = json::object();
  for (const auto& [name, p] : b.patterns) j["patterns"][name] = pattern_json(p);
  j["histograms"] = json::object();
  for (const auto& [name, h] : b.histograms) j["histograms"][name] = histogram_json(h);
  if (b.summary) j["summary"] = summary_json(*b.summary);
  return canonical_dump(j);
}

ResultBundle parse_bundle(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw Error(ErrorCode::invalid_argument, std::string("malformed bundle: ") + e.what());
  }
  try {
    if (j.at("format").get<std::string>() != kBundleFormat)
      throw Error(ErrorCode::invalid_argument, "unsupported bundle format");
    ResultBundle b;
    b.tool_version = j.at("tool_version").get<std::string>();
    b.scenario = parse_scenario(canonical_dump(j.at("scenario")));
    for (const auto& [name, p] : j.at("patterns").items()) b.patterns.emplace(name, pattern_from_json(p));
    for (const auto& [name, h] : j.at("histograms").items()) b.histograms.emplace(name, histogram_from_json(h));
    if (j.contains("summary")) b.summary = summary_from_json(j.at("summary"));
    return b;
  } catch (const json::exception& e) {
    throw Error(ErrorCode::invalid_argument, std::string("malformed bundle: ") + e.what());
  }
}

std::vector<OutputFile> serialize(const ResultBundle& b, Format format) {
  const auto& name = b.scenario.name;
  std::vector<OutputFile> files;
  if (format == Format::json) {
    files.push_back({name + ".bundle.json", bundle_to_json_text(b)});
    return files;
  }
  for (const auto& [key, p] : b.patterns) files.push_back({name + ".pattern_" + key + ".csv", pattern_csv(p)});
  for (const auto& [key, h] : b.histograms) files.push_back({name + ".histogram_" + key + ".csv", histogram_csv(h)});
  if (b.summary) files.push_back({name + ".summary.csv", summary_csv(*b.summary)});
  return files;
}

}  // namespace dualsim
