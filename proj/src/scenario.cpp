#include "dualsim/scenario.hpp"

#include <algorithm>
#include <cmath>
#include <iterator>
#include <map>
#include <set>

#include "dualsim/canonical_json.hpp"

namespace dualsim {

using nlohmann::json;

std::string_view to_string(Experiment e) {
  switch (e) {
    case Experiment::double_slit: return "double_slit";
    case Experiment::which_path: return "which_path";
    case Experiment::neutron_absorber: return "neutron_absorber";
    case Experiment::mach_zehnder: return "mach_zehnder";
    case Experiment::delayed_choice: return "delayed_choice";
    case Experiment::quantum_eraser: return "quantum_eraser";
    case Experiment::photoelectric: return "photoelectric";
  }
  return "unknown";
}

std::optional<Experiment> experiment_from_string(std::string_view name) {
  for (auto e : {Experiment::double_slit, Experiment::which_path, Experiment::neutron_absorber,
                 Experiment::mach_zehnder, Experiment::delayed_choice, Experiment::quantum_eraser,
                 Experiment::photoelectric}) {
    if (to_string(e) == name) return e;
  }
  return std::nullopt;
}

std::string_view to_string(OutputKind k) {
  switch (k) {
    case OutputKind::analytic_pattern: return "analytic_pattern";
    case OutputKind::histogram: return "histogram";
    case OutputKind::summary: return "summary";
  }
  return "unknown";
}

std::string_view to_string(DiagCode c) {
  switch (c) {
    case DiagCode::syntax: return "SYNTAX";
    case DiagCode::unknown_experiment: return "UNKNOWN_EXPERIMENT";
    case DiagCode::missing: return "MISSING";
    case DiagCode::range: return "RANGE";
    case DiagCode::duplicate: return "DUPLICATE";
    case DiagCode::unknown_key: return "UNKNOWN_KEY";
    case DiagCode::type: return "TYPE";
  }
  return "UNKNOWN";
}

std::string Diagnostic::format() const {
  return "line " + std::to_string(line) + ": " + std::string(to_string(code)) + " at " + path + ": " + message;
}

bool Scenario::wants(OutputKind k) const { return std::find(outputs.begin(), outputs.end(), k) != outputs.end(); }

namespace {

// ---------------------------------------------------------------------------
// Parsing with line tracking. nlohmann's lexer pulls characters through this
// iterator, so `line` always holds the line of the last character consumed.

class LineCountingIterator {
 public:
  using iterator_category = std::input_iterator_tag;
  using value_type = char;
  using difference_type = std::ptrdiff_t;
  using pointer = const char*;
  using reference = const char&;

  LineCountingIterator(const char* p, std::size_t* line) : p_(p), line_(line) {}
  reference operator*() const { return *p_; }
  LineCountingIterator& operator++() {
    if (*p_ == '\n') ++*line_;
    ++p_;
    return *this;
  }
  LineCountingIterator operator++(int) {
    auto tmp = *this;
    ++*this;
    return tmp;
  }
  bool operator==(const LineCountingIterator& o) const { return p_ == o.p_; }
  bool operator!=(const LineCountingIterator& o) const { return p_ != o.p_; }

 private:
  const char* p_;
  std::size_t* line_;
};

std::string join(const std::string& parent, const std::string& key) {
  return parent.empty() ? key : parent + "." + key;
}

/// Builds the document while recording the line of every field path and
/// rejecting duplicate keys.
class LocatingSax {
 public:
  explicit LocatingSax(const std::size_t& line) : line_(line) {}

  json root;
  std::map<std::string, std::size_t> lines;
  std::optional<Diagnostic> error;

  bool null() { return put(nullptr) != nullptr; }
  bool boolean(bool v) { return put(v) != nullptr; }
  bool number_integer(json::number_integer_t v) { return put(v) != nullptr; }
  bool number_unsigned(json::number_unsigned_t v) { return put(v) != nullptr; }
  bool number_float(json::number_float_t v, const std::string&) { return put(v) != nullptr; }
  bool string(std::string& v) { return put(v) != nullptr; }
  bool binary(json::binary_t&) { return fail(DiagCode::type, current_path(), "binary values are not allowed"); }

  bool start_object(std::size_t) {
    auto* v = put(json::object());
    frames_.push_back({v, next_path(), {}});
    return true;
  }
  bool key(std::string& k) {
    auto& f = frames_.back();
    const auto path = join(f.path, k);
    if (!f.keys.insert(k).second) return fail(DiagCode::duplicate, path, "duplicate key '" + k + "'");
    pending_key_ = k;
    lines[path] = line_;
    return true;
  }
  bool end_object() {
    frames_.pop_back();
    return true;
  }
  bool start_array(std::size_t) {
    auto* v = put(json::array());
    frames_.push_back({v, next_path(), {}});
    return true;
  }
  bool end_array() {
    frames_.pop_back();
    return true;
  }
  bool parse_error(std::size_t, const std::string&, const nlohmann::detail::exception& ex) {
    std::string what = ex.what();
    if (auto pos = what.find("syntax error"); pos != std::string::npos) what = what.substr(pos);
    return fail(DiagCode::syntax, current_path(), what);
  }

 private:
  struct Frame {
    json* value;
    std::string path;
    std::set<std::string> keys;
  };

  std::string current_path() const {
    if (frames_.empty()) return "$";
    const auto& f = frames_.back();
    if (f.value->is_object() && pending_key_) return join(f.path, *pending_key_);
    return f.path.empty() ? "$" : f.path;
  }

  std::string next_path() const {
    if (frames_.empty()) return "";
    const auto& f = frames_.back();
    if (f.value->is_array()) return f.path + "[" + std::to_string(f.value->size() - 1) + "]";
    return join(f.path, pending_key_.value_or(""));
  }

  json* put(json v) {
    if (frames_.empty()) {
      root = std::move(v);
      lines[""] = line_;
      return &root;
    }
    auto& f = frames_.back();
    if (f.value->is_array()) {
      f.value->push_back(std::move(v));
      lines.emplace(f.path + "[" + std::to_string(f.value->size() - 1) + "]", line_);
      return &f.value->back();
    }
    auto& slot = (*f.value)[*pending_key_];
    slot = std::move(v);
    return &slot;
  }

  bool fail(DiagCode code, std::string path, std::string message) {
    if (!error) error = Diagnostic{code, std::move(path), line_, std::move(message)};
    return false;
  }

  const std::size_t& line_;
  std::vector<Frame> frames_;
  std::optional<std::string> pending_key_;
};

// ---------------------------------------------------------------------------
// Typed field access with diagnostics.

class Fields {
 public:
  Fields(const json& obj, std::string path, const std::map<std::string, std::size_t>& lines)
      : obj_(obj), path_(std::move(path)), lines_(lines) {
    if (!obj_.is_object()) raise(DiagCode::type, display(path_), line_of(path_), "expected an object");
  }

  [[noreturn]] void raise(DiagCode code, const std::string& path, std::size_t line, const std::string& msg) const {
    throw ScenarioError(Diagnostic{code, path, line, msg});
  }

  std::string path(const std::string& key) const { return join(path_, key); }
  std::size_t line_of(const std::string& p) const {
    // Nearest recorded ancestor.
    std::string cur = p;
    while (true) {
      if (auto it = lines_.find(cur); it != lines_.end()) return it->second;
      const auto dot = cur.find_last_of(".[");
      if (dot == std::string::npos) break;
      cur = cur.substr(0, dot);
    }
    auto it = lines_.find("");
    return it == lines_.end() ? 1 : it->second;
  }
  static std::string display(const std::string& p) { return p.empty() ? "$" : p; }

  bool has(const std::string& key) const { return obj_.contains(key); }

  const json& need(const std::string& key) const {
    used_.insert(key);
    if (!obj_.contains(key)) {
      raise(DiagCode::missing, path(key), line_of(path_), "missing required field '" + key + "'");
    }
    return obj_.at(key);
  }

  [[noreturn]] void range(const std::string& key, const std::string& msg) const {
    raise(DiagCode::range, path(key), line_of(path(key)), msg);
  }
  [[noreturn]] void type(const std::string& key, const std::string& msg) const {
    raise(DiagCode::type, path(key), line_of(path(key)), msg);
  }

  double number(const std::string& key) const {
    const auto& v = need(key);
    if (!v.is_number()) type(key, "expected a number");
    const double d = v.get<double>();
    if (!std::isfinite(d)) range(key, "value must be finite");
    return d;
  }
  double number(const std::string& key, double fallback) const { return has(key) ? number(key) : fallback; }

  double number_in(const std::string& key, double lo, double hi) const {
    const double d = number(key);
    if (!(d >= lo && d <= hi)) {
      range(key, "value " + format_double(d) + " outside [" + format_double(lo) + ", " + format_double(hi) + "]");
    }
    return d;
  }

  double positive(const std::string& key) const {
    const double d = number(key);
    if (!(d > 0.0)) range(key, "value must be positive");
    return d;
  }
  double non_negative(const std::string& key) const {
    const double d = number(key);
    if (!(d >= 0.0)) range(key, "value must be non-negative");
    return d;
  }

  std::uint64_t count(const std::string& key, std::uint64_t min) const {
    const auto& v = need(key);
    std::uint64_t out = 0;
    if (v.is_number_unsigned()) {
      out = v.get<std::uint64_t>();
    } else if (v.is_number_integer()) {
      range(key, "value must be a non-negative integer");
    } else if (v.is_number_float()) {
      const double d = v.get<double>();
      if (!(d >= 0.0) || std::floor(d) != d || d >= 18446744073709551616.0) type(key, "expected an integer");
      out = static_cast<std::uint64_t>(d);
    } else {
      type(key, "expected an integer");
    }
    if (out < min) range(key, "value must be at least " + std::to_string(min));
    return out;
  }

  bool boolean(const std::string& key, bool fallback) const {
    if (!has(key)) return fallback;
    const auto& v = need(key);
    if (!v.is_boolean()) type(key, "expected true or false");
    return v.get<bool>();
  }

  std::string text(const std::string& key) const {
    const auto& v = need(key);
    if (!v.is_string()) type(key, "expected a string");
    return v.get<std::string>();
  }

  std::string choice(const std::string& key, std::initializer_list<std::string_view> allowed) const {
    auto s = text(key);
    for (auto a : allowed)
      if (a == s) return s;
    std::string list;
    for (auto a : allowed) list += (list.empty() ? "" : ", ") + std::string(a);
    range(key, "'" + s + "' is not one of: " + list);
  }

  Fields child(const std::string& key) const {
    const auto& v = need(key);
    if (!v.is_object()) type(key, "expected an object");
    return Fields(v, path(key), lines_);
  }

  /// Rejects keys that no accessor has looked at. Call after reading.
  void finish() const {
    for (const auto& [key, value] : obj_.items()) {
      if (!used_.contains(key)) {
        raise(DiagCode::unknown_key, path(key), line_of(path(key)), "unknown key '" + key + "'");
      }
    }
  }

  void mark(const std::string& key) const { used_.insert(key); }

 private:
  const json& obj_;
  std::string path_;
  const std::map<std::string, std::size_t>& lines_;
  mutable std::set<std::string> used_;
};

SlitGeometry read_geometry(const Fields& f) {
  auto g = f.child("geometry");
  SlitGeometry out;
  out.separation = g.non_negative("d");
  out.width = g.positive("w");
  out.screen_distance = g.positive("L");
  g.finish();
  return out;
}

ScreenParams read_screen(const Fields& f) {
  ScreenParams out;
  if (!f.has("screen")) {
    f.mark("screen");
    return out;
  }
  auto s = f.child("screen");
  if (s.has("bins")) out.bins = s.count("bins", 8);
  if (s.has("periods")) out.periods = s.positive("periods");
  s.finish();
  return out;
}

PolarizerSpec read_polarizer(const Fields& f) {
  const auto kind = f.choice("kind", {"linear", "circular_left", "circular_right"});
  if (kind == "circular_left") return PolarizerSpec::circular_left();
  if (kind == "circular_right") return PolarizerSpec::circular_right();
  return PolarizerSpec::linear(f.number("angle"));
}

ScenarioParams read_params(Experiment e, const Fields& p) {
  switch (e) {
    case Experiment::double_slit: {
      DoubleSlitParams out;
      out.geometry = read_geometry(p);
      out.marked = p.boolean("marked", false);
      if (p.has("marker_overlap")) {
        out.marker_overlap = p.number_in("marker_overlap", 0.0, 1.0);
        if (p.has("marked")) p.range("marker_overlap", "marker_overlap and marked are mutually exclusive");
      }
      if (p.has("open_slits")) {
        const auto o = p.choice("open_slits", {"both", "S1", "S2"});
        out.open_slits = o == "S1" ? OpenSlits::s1 : o == "S2" ? OpenSlits::s2 : OpenSlits::both;
      }
      out.screen = read_screen(p);
      return out;
    }
    case Experiment::which_path: {
      WhichPathParams out;
      out.geometry = read_geometry(p);
      out.screen = read_screen(p);
      return out;
    }
    case Experiment::neutron_absorber: {
      NeutronParams out;
      auto a = p.child("absorber");
      out.absorber.transmission = a.number_in("a", 0.0, 1.0);
      out.absorber.mode = a.choice("mode", {"stochastic", "deterministic_chopper"}) == "stochastic"
                              ? AbsorberMode::stochastic
                              : AbsorberMode::deterministic_chopper;
      a.finish();
      out.psi_l = p.number_in("psi_L", 0.0, 1.0);
      out.psi_r = p.number_in("psi_R", 0.0, 1.0);
      if (std::abs(out.psi_l * out.psi_l + out.psi_r * out.psi_r - 1.0) > 1e-9) {
        p.range("psi_R", "arm amplitudes must satisfy psi_L^2 + psi_R^2 = 1");
      }
      if (p.has("chi_bins")) out.chi_bins = p.count("chi_bins", 2);
      return out;
    }
    case Experiment::mach_zehnder: {
      MachZehnderParams out;
      out.bs2_present = p.boolean("bs2_present", true);
      out.arm_phase = p.number("arm_phase", 0.0);
      return out;
    }
    case Experiment::delayed_choice: {
      DelayedChoiceParams out;
      if (p.has("choice_probability")) out.choice_probability = p.number_in("choice_probability", 0.0, 1.0);
      out.arm_phase = p.number("arm_phase", 0.0);
      if (p.has("choice_timing")) {
        out.choice_timing = p.choice("choice_timing", {"before_entry", "after_propagation"}) == "before_entry"
                                ? ChoiceTiming::before_entry
                                : ChoiceTiming::after_propagation;
      }
      if (p.has("choice_seed")) out.choice_seed = p.count("choice_seed", 0);
      return out;
    }
    case Experiment::quantum_eraser: {
      EraserParams out;
      out.geometry = read_geometry(p);
      out.tag_slits = p.boolean("tag_slits", true);
      if (p.has("eraser")) {
        auto er = p.child("eraser");
        out.eraser = read_polarizer(er);
        er.finish();
      }
      out.post_select = p.boolean("post_select", false);
      if (out.post_select && !out.eraser) p.range("post_select", "post_select requires an eraser");
      out.screen = read_screen(p);
      return out;
    }
    case Experiment::photoelectric: {
      PhotoelectricParams out;
      auto d = p.child("detector");
      out.detector.work_function = d.non_negative("work_function");
      out.detector.coupling = d.non_negative("coupling");
      out.detector.ground_energy = d.number("ground_energy", 0.0);
      out.detector.field_amplitude = d.non_negative("field_amplitude");
      const auto& table = d.need("density_of_states");
      if (!table.is_array() || table.empty()) d.type("density_of_states", "expected a non-empty array of [energy, rho]");
      for (std::size_t i = 0; i < table.size(); ++i) {
        const auto& row = table[i];
        const auto key = "density_of_states[" + std::to_string(i) + "]";
        if (!row.is_array() || row.size() != 2 || !row[0].is_number() || !row[1].is_number()) {
          d.type(key, "expected [energy, rho]");
        }
        const double e = row[0].get<double>();
        const double rho = row[1].get<double>();
        if (!std::isfinite(e) || !std::isfinite(rho) || rho < 0.0) d.range(key, "rho must be finite and >= 0");
        if (i > 0 && !(e > out.detector.density_of_states.back().first)) d.range(key, "energies must increase");
        out.detector.density_of_states.emplace_back(e, rho);
      }
      d.finish();
      auto w = p.child("omega");
      out.omega.lo = w.non_negative("min");
      out.omega.hi = w.number("max");
      if (!(out.omega.hi > out.omega.lo)) w.range("max", "omega.max must exceed omega.min");
      out.omega.bins = w.count("points", 2);
      w.finish();
      return out;
    }
  }
  return DoubleSlitParams{};
}

Scenario read_scenario(const Fields& top) {
  Scenario s;
  s.name = top.text("name");
  if (s.name.empty() || !std::all_of(s.name.begin(), s.name.end(), [](unsigned char c) {
        return std::isalnum(c) || c == '-' || c == '_';
      })) {
    top.range("name", "name must be non-empty and use only letters, digits, '-' and '_'");
  }
  const auto exp_name = top.text("experiment");
  const auto exp = experiment_from_string(exp_name);
  if (!exp) {
    top.raise(DiagCode::unknown_experiment, top.path("experiment"), top.line_of(top.path("experiment")),
              "unknown experiment '" + exp_name + "'");
  }
  s.experiment = *exp;
  {
    auto p = top.child("params");
    s.params = read_params(s.experiment, p);
    p.finish();
  }
  s.n_events = top.count("n_events", 1);
  if (top.has("seed")) s.seed = top.count("seed", 0);
  if (top.has("outputs")) {
    const auto& arr = top.need("outputs");
    if (!arr.is_array() || arr.empty()) top.type("outputs", "expected a non-empty array of output names");
    s.outputs.clear();
    for (std::size_t i = 0; i < arr.size(); ++i) {
      const auto key = "outputs[" + std::to_string(i) + "]";
      if (!arr[i].is_string()) top.type(key, "expected an output name");
      const auto name = arr[i].get<std::string>();
      std::optional<OutputKind> kind;
      for (auto k : {OutputKind::analytic_pattern, OutputKind::histogram, OutputKind::summary})
        if (to_string(k) == name) kind = k;
      if (!kind) top.range(key, "unknown output '" + name + "'");
      if (s.wants(*kind)) top.raise(DiagCode::duplicate, top.path(key), top.line_of(top.path(key)), "output listed twice");
      s.outputs.push_back(*kind);
    }
    std::sort(s.outputs.begin(), s.outputs.end());
  }
  top.finish();
  return s;
}

json geometry_json(const SlitGeometry& g) {
  return {{"d", g.separation}, {"w", g.width}, {"L", g.screen_distance}};
}

json screen_json(const ScreenParams& s) { return {{"bins", s.bins}, {"periods", s.periods}}; }

json polarizer_json(const PolarizerSpec& p) {
  switch (p.kind) {
    case PolarizerSpec::Kind::linear: return {{"kind", "linear"}, {"angle", p.angle}};
    case PolarizerSpec::Kind::circular_left: return {{"kind", "circular_left"}};
    case PolarizerSpec::Kind::circular_right: return {{"kind", "circular_right"}};
  }
  return {};
}

struct ParamsToJson {
  json operator()(const DoubleSlitParams& p) const {
    json j = {{"geometry", geometry_json(p.geometry)}, {"screen", screen_json(p.screen)}};
    if (p.marker_overlap) {
      j["marker_overlap"] = *p.marker_overlap;
    } else {
      j["marked"] = p.marked;
    }
    j["open_slits"] = p.open_slits == OpenSlits::both ? "both" : p.open_slits == OpenSlits::s1 ? "S1" : "S2";
    return j;
  }
  json operator()(const WhichPathParams& p) const {
    return {{"geometry", geometry_json(p.geometry)}, {"screen", screen_json(p.screen)}};
  }
  json operator()(const NeutronParams& p) const {
    return {{"absorber",
             {{"a", p.absorber.transmission},
              {"mode", p.absorber.mode == AbsorberMode::stochastic ? "stochastic" : "deterministic_chopper"}}},
            {"psi_L", p.psi_l},
            {"psi_R", p.psi_r},
            {"chi_bins", p.chi_bins}};
  }
  json operator()(const MachZehnderParams& p) const {
    return {{"bs2_present", p.bs2_present}, {"arm_phase", p.arm_phase}};
  }
  json operator()(const DelayedChoiceParams& p) const {
    json j = {{"choice_probability", p.choice_probability},
              {"arm_phase", p.arm_phase},
              {"choice_timing", p.choice_timing == ChoiceTiming::before_entry ? "before_entry" : "after_propagation"}};
    if (p.choice_seed) j["choice_seed"] = *p.choice_seed;
    return j;
  }
  json operator()(const EraserParams& p) const {
    json j = {{"geometry", geometry_json(p.geometry)},
              {"tag_slits", p.tag_slits},
              {"post_select", p.post_select},
              {"screen", screen_json(p.screen)}};
    if (p.eraser) j["eraser"] = polarizer_json(*p.eraser);
    return j;
  }
  json operator()(const PhotoelectricParams& p) const {
    json table = json::array();
    for (const auto& [e, rho] : p.detector.density_of_states) table.push_back({e, rho});
    return {{"detector",
             {{"work_function", p.detector.work_function},
              {"coupling", p.detector.coupling},
              {"ground_energy", p.detector.ground_energy},
              {"field_amplitude", p.detector.field_amplitude},
              {"density_of_states", table}}},
            {"omega", {{"min", p.omega.lo}, {"max", p.omega.hi}, {"points", p.omega.bins}}}};
  }
};

}  // namespace

Scenario parse_scenario(std::string_view text) {
  std::size_t line = 1;
  LocatingSax sax(line);
  LineCountingIterator first(text.data(), &line);
  LineCountingIterator last(text.data() + text.size(), &line);
  bool ok = false;
  try {
    ok = json::sax_parse(first, last, &sax, json::input_format_t::json, true);
  } catch (const std::exception& ex) {
    throw ScenarioError(Diagnostic{DiagCode::syntax, "$", line, ex.what()});
  }
  if (!ok || sax.error) {
    throw ScenarioError(sax.error.value_or(Diagnostic{DiagCode::syntax, "$", line, "malformed document"}));
  }
  try {
    return read_scenario(Fields(sax.root, "", sax.lines));
  } catch (const ScenarioError&) {
    throw;
  } catch (const std::exception& ex) {
    throw ScenarioError(Diagnostic{DiagCode::type, "$", 1, ex.what()});
  }
}

json scenario_to_json(const Scenario& s) {
  json outputs = json::array();
  for (auto k : s.outputs) outputs.push_back(std::string(to_string(k)));
  json j = {{"name", s.name},
            {"experiment", std::string(to_string(s.experiment))},
            {"params", std::visit(ParamsToJson{}, s.params)},
            {"n_events", s.n_events},
            {"outputs", outputs}};
  if (s.seed) j["seed"] = *s.seed;
  return j;
}

std::string serialize_scenario(const Scenario& s) { return canonical_dump(scenario_to_json(s)); }

std::uint64_t resolve_seed(const Scenario& s, std::optional<std::uint64_t> flag, const char* env_value) {
  if (flag) return *flag;
  if (s.seed) return *s.seed;
  if (env_value != nullptr && *env_value != '\0') {
    try {
      std::size_t used = 0;
      const auto v = std::stoull(env_value, &used);
      if (used == std::char_traits<char>::length(env_value)) return v;
    } catch (const std::exception&) {
    }
  }
  return 0;
}

}  // namespace dualsim
