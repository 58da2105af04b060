#include "qbm/app/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <cstdint>
#include <fstream>
#include <sstream>

#include <toml.hpp>

#include "qbm/errors.hpp"

namespace qbm::app {

namespace {

std::string field(std::string_view sec, std::string_view key) {
  if (sec.empty()) return std::string(key);
  return std::string(sec) + "." + std::string(key);
}

const toml::table* section(const toml::table& root, std::string_view name,
                           bool required) {
  const toml::node* n = root.get(name);
  if (!n) {
    if (required) throw ConfigError("missing required section [" + std::string(name) + "]");
    return nullptr;
  }
  const toml::table* t = n->as_table();
  if (!t) throw ConfigError("[" + std::string(name) + "] must be a table");
  return t;
}

void reject_unknown(const toml::table& t, std::string_view sec,
                    std::initializer_list<std::string_view> allowed) {
  for (const auto& [k, v] : t) {
    if (std::find(allowed.begin(), allowed.end(), k.str()) == allowed.end()) {
      std::ostringstream msg;
      msg << "unknown field " << field(sec, k.str()) << " (line "
          << v.source().begin.line << ")";
      throw ConfigError(msg.str());
    }
  }
}

std::optional<double> opt_number(const toml::table& t, std::string_view sec,
                                 std::string_view key) {
  const toml::node* n = t.get(key);
  if (!n) return std::nullopt;
  if (!n->is_number()) {
    throw ConfigError("field " + field(sec, key) + " must be a number (line " +
                      std::to_string(n->source().begin.line) + ")");
  }
  return n->value<double>();
}

double number(const toml::table& t, std::string_view sec, std::string_view key) {
  auto v = opt_number(t, sec, key);
  if (!v) throw ConfigError("missing required field " + field(sec, key));
  return *v;
}

std::optional<std::int64_t> opt_integer(const toml::table& t, std::string_view sec,
                                        std::string_view key) {
  const toml::node* n = t.get(key);
  if (!n) return std::nullopt;
  if (!n->is_integer()) {
    throw ConfigError("field " + field(sec, key) + " must be an integer (line " +
                      std::to_string(n->source().begin.line) + ")");
  }
  return n->value<std::int64_t>();
}

std::optional<std::string> opt_string(const toml::table& t, std::string_view sec,
                                      std::string_view key) {
  const toml::node* n = t.get(key);
  if (!n) return std::nullopt;
  if (!n->is_string()) {
    throw ConfigError("field " + field(sec, key) + " must be a string (line " +
                      std::to_string(n->source().begin.line) + ")");
  }
  return n->value<std::string>();
}

std::optional<std::vector<double>> opt_numbers(const toml::table& t,
                                               std::string_view sec,
                                               std::string_view key) {
  const toml::node* n = t.get(key);
  if (!n) return std::nullopt;
  const toml::array* a = n->as_array();
  if (!a) throw ConfigError("field " + field(sec, key) + " must be an array of numbers");
  std::vector<double> out;
  for (const auto& e : *a) {
    if (!e.is_number()) {
      throw ConfigError("field " + field(sec, key) + " must contain only numbers");
    }
    out.push_back(*e.value<double>());
  }
  return out;
}

void require(bool ok, const std::string& what) {
  if (!ok) throw ConfigError(what);
}

void check_times(const std::vector<double>& v, const std::string& name) {
  require(!v.empty(), "field " + name + " must not be empty");
  require(std::is_sorted(v.begin(), v.end()) && v.front() >= 0.0,
          "field " + name + " must be ascending and non-negative");
}

std::vector<double> to_physical(const std::vector<double>& v, TimeUnit unit,
                                double omega0, double omega_c) {
  const double scale = unit == TimeUnit::Omega0 ? 1.0 / omega0 : 1.0 / omega_c;
  std::vector<double> out;
  out.reserve(v.size());
  for (double x : v) out.push_back(x * scale);
  return out;
}

std::string toml_double(double x) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, x);
  std::string s(buf, res.ptr);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

std::string toml_array(const std::vector<double>& v) {
  std::string s = "[";
  for (std::size_t i = 0; i < v.size(); ++i) {
    if (i) s += ", ";
    s += toml_double(v[i]);
  }
  return s + "]";
}

std::string quoted(std::string_view s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  return out + "\"";
}

}  // namespace

std::string_view to_string(StateKind k) {
  switch (k) {
    case StateKind::Cat: return "cat";
    case StateKind::Vacuum: return "vacuum";
    case StateKind::Fock: return "fock";
  }
  return "?";
}

std::string_view to_string(TimeUnit u) {
  return u == TimeUnit::Omega0 ? "omega0" : "omegac";
}

std::string_view to_string(RegimeChoice c) {
  switch (c) {
    case RegimeChoice::Auto: return "auto";
    case RegimeChoice::OffResonant: return "offres";
    case RegimeChoice::Resonant: return "res";
  }
  return "?";
}

std::string_view to_string(WignerSource s) {
  switch (s) {
    case WignerSource::Auto: return "auto";
    case WignerSource::Analytic: return "analytic";
    case WignerSource::Oracle: return "oracle";
  }
  return "?";
}

BathSpec Scenario::bath() const {
  return BathSpec::from_ratio(r, g, kT, oscillator());
}

std::vector<double> Scenario::times() const {
  std::vector<double> v = grid.values;
  if (grid.t_end) {
    v.resize(grid.t_points);
    for (int i = 0; i < grid.t_points; ++i) {
      v[i] = *grid.t_end * i / (grid.t_points - 1);
    }
  }
  return to_physical(v, grid.unit, omega0, r * omega0);
}

std::vector<double> Scenario::wigner_times() const {
  return to_physical(wigner.times, grid.unit, omega0, r * omega0);
}

Regime Scenario::resolved_regime() const {
  switch (regime) {
    case RegimeChoice::OffResonant: return Regime::OffResonant;
    case RegimeChoice::Resonant: return Regime::Resonant;
    case RegimeChoice::Auto: break;
  }
  return regime_for_ratio(r);
}

bool Scenario::regime_valid() const {
  return qbm::regime_valid(resolved_regime(), r);
}

MasterEquationKind Scenario::resolved_equation() const {
  if (equation) return *equation;
  return resolved_regime() == Regime::Resonant ? MasterEquationKind::Repaired
                                               : MasterEquationKind::Secular;
}

Scenario parse_scenario(std::string_view text, std::string_view origin) {
  toml::table root;
  try {
    root = toml::parse(text, origin);
  } catch (const toml::parse_error& e) {
    std::ostringstream msg;
    msg << origin << ":" << e.source().begin.line << ":" << e.source().begin.column
        << ": " << e.description();
    throw ConfigError(msg.str());
  }
  reject_unknown(root, "", {"oscillator", "bath", "state", "run", "wigner"});

  Scenario s;
  if (const auto* osc = section(root, "oscillator", false)) {
    reject_unknown(*osc, "oscillator", {"omega0"});
    s.omega0 = opt_number(*osc, "oscillator", "omega0").value_or(1.0);
    require(s.omega0 > 0.0, "field oscillator.omega0 must be > 0");
  }

  const auto& bath = *section(root, "bath", true);
  reject_unknown(bath, "bath", {"g", "r", "omega_c", "kT"});
  s.g = number(bath, "bath", "g");
  s.kT = number(bath, "bath", "kT");
  const auto r = opt_number(bath, "bath", "r");
  const auto wc = opt_number(bath, "bath", "omega_c");
  require(r.has_value() != wc.has_value(),
          "exactly one of bath.r and bath.omega_c must be given");
  s.r = r ? *r : *wc / s.omega0;
  require(s.g >= 0.0, "field bath.g must be >= 0");
  require(s.r > 0.0, "field bath.r must be > 0");
  require(s.kT > 0.0, "field bath.kT must be > 0");

  const auto& state = *section(root, "state", true);
  reject_unknown(state, "state", {"kind", "alpha", "n"});
  const std::string kind = opt_string(state, "state", "kind").value_or("cat");
  if (kind == "cat") {
    s.state.kind = StateKind::Cat;
    s.state.alpha = number(state, "state", "alpha");
    require(s.state.alpha >= 0.0, "field state.alpha must be >= 0");
    require(!state.contains("n"), "field state.n is only valid for kind = \"fock\"");
  } else if (kind == "vacuum") {
    s.state.kind = StateKind::Vacuum;
    require(!state.contains("alpha") && !state.contains("n"),
            "kind = \"vacuum\" takes no state.alpha or state.n");
  } else if (kind == "fock") {
    s.state.kind = StateKind::Fock;
    const auto n = opt_integer(state, "state", "n");
    require(n.has_value(), "missing required field state.n");
    require(*n >= 0, "field state.n must be >= 0");
    require(!state.contains("alpha"), "field state.alpha is only valid for kind = \"cat\"");
    s.state.n = int(*n);
  } else {
    throw ConfigError("field state.kind must be \"cat\", \"vacuum\" or \"fock\"");
  }

  const auto& run = *section(root, "run", true);
  reject_unknown(run, "run", {"equation", "regime", "t_end", "t_points", "times",
                              "time_unit", "dim", "tol", "oracle", "output"});
  const std::string eq = opt_string(run, "run", "equation").value_or("auto");
  if (eq != "auto") {
    try {
      s.equation = parse_master_equation_kind(eq);
    } catch (const std::exception&) {
      throw ConfigError("field run.equation: unknown equation \"" + eq + "\"");
    }
  }
  const std::string reg = opt_string(run, "run", "regime").value_or("auto");
  if (reg == "auto") s.regime = RegimeChoice::Auto;
  else if (reg == "offres") s.regime = RegimeChoice::OffResonant;
  else if (reg == "res") s.regime = RegimeChoice::Resonant;
  else throw ConfigError("field run.regime must be \"auto\", \"offres\" or \"res\"");

  const std::string unit = opt_string(run, "run", "time_unit").value_or("omega0");
  if (unit == "omega0") s.grid.unit = TimeUnit::Omega0;
  else if (unit == "omegac") s.grid.unit = TimeUnit::OmegaC;
  else throw ConfigError("field run.time_unit must be \"omega0\" or \"omegac\"");

  s.grid.t_end = opt_number(run, "run", "t_end");
  auto times = opt_numbers(run, "run", "times");
  require(s.grid.t_end.has_value() != times.has_value(),
          "exactly one of run.t_end and run.times must be given");
  if (s.grid.t_end) {
    require(*s.grid.t_end > 0.0, "field run.t_end must be > 0");
    s.grid.t_points = int(opt_integer(run, "run", "t_points").value_or(101));
    require(s.grid.t_points >= 2, "field run.t_points must be >= 2");
  } else {
    require(!run.contains("t_points"), "run.t_points requires run.t_end");
    check_times(*times, "run.times");
    s.grid.values = std::move(*times);
  }

  if (const toml::node* d = run.get("dim")) {
    if (d->is_string()) {
      require(d->value<std::string>() == "auto",
              "field run.dim must be \"auto\" or a positive integer");
    } else {
      const auto n = opt_integer(run, "run", "dim");
      require(*n >= 2, "field run.dim must be >= 2");
      s.dim = int(*n);
    }
  }
  s.tol = opt_number(run, "run", "tol").value_or(1e-10);
  require(s.tol > 0.0, "field run.tol must be > 0");
  if (const toml::node* o = run.get("oracle")) {
    require(o->is_boolean(), "field run.oracle must be a boolean");
    s.oracle = *o->value<bool>();
  }
  s.output = opt_string(run, "run", "output").value_or("out");

  if (const auto* w = section(root, "wigner", false)) {
    reject_unknown(*w, "wigner", {"times", "source", "step", "half_width_r",
                                  "half_width_i"});
    auto wt = opt_numbers(*w, "wigner", "times");
    require(wt.has_value(), "missing required field wigner.times");
    check_times(*wt, "wigner.times");
    s.wigner.times = std::move(*wt);
    const std::string src = opt_string(*w, "wigner", "source").value_or("auto");
    if (src == "auto") s.wigner.source = WignerSource::Auto;
    else if (src == "analytic") s.wigner.source = WignerSource::Analytic;
    else if (src == "oracle") s.wigner.source = WignerSource::Oracle;
    else throw ConfigError("field wigner.source must be \"auto\", \"analytic\" or \"oracle\"");
    s.wigner.step = opt_number(*w, "wigner", "step");
    s.wigner.half_width_r = opt_number(*w, "wigner", "half_width_r");
    s.wigner.half_width_i = opt_number(*w, "wigner", "half_width_i");
    for (const auto& v : {s.wigner.step, s.wigner.half_width_r, s.wigner.half_width_i}) {
      require(!v || *v > 0.0, "wigner grid step and half widths must be > 0");
    }
  }
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open config file " + path.string());
  std::ostringstream text;
  text << in.rdbuf();
  return parse_scenario(text.str(), path.string());
}

std::string normalized_toml(const Scenario& s) {
  std::ostringstream out;
  out << "[oscillator]\nomega0 = " << toml_double(s.omega0) << "\n\n";
  out << "[bath]\ng = " << toml_double(s.g) << "\nr = " << toml_double(s.r)
      << "\nkT = " << toml_double(s.kT) << "\n\n";
  out << "[state]\nkind = " << quoted(to_string(s.state.kind)) << '\n';
  if (s.state.kind == StateKind::Cat) out << "alpha = " << toml_double(s.state.alpha) << '\n';
  if (s.state.kind == StateKind::Fock) out << "n = " << s.state.n << '\n';
  out << "\n[run]\nequation = "
      << quoted(s.equation ? to_string(*s.equation) : std::string_view("auto"))
      << "\nregime = " << quoted(to_string(s.regime))
      << "\ntime_unit = " << quoted(to_string(s.grid.unit)) << '\n';
  if (s.grid.t_end) {
    out << "t_end = " << toml_double(*s.grid.t_end) << "\nt_points = "
        << s.grid.t_points << '\n';
  } else {
    out << "times = " << toml_array(s.grid.values) << '\n';
  }
  out << "dim = ";
  if (s.dim > 0) out << s.dim;
  else out << "\"auto\"";
  out << "\ntol = " << toml_double(s.tol) << "\noracle = "
      << (s.oracle ? "true" : "false") << "\noutput = " << quoted(s.output) << '\n';
  if (!s.wigner.times.empty()) {
    out << "\n[wigner]\ntimes = " << toml_array(s.wigner.times)
        << "\nsource = " << quoted(to_string(s.wigner.source)) << '\n';
    if (s.wigner.step) out << "step = " << toml_double(*s.wigner.step) << '\n';
    if (s.wigner.half_width_r) {
      out << "half_width_r = " << toml_double(*s.wigner.half_width_r) << '\n';
    }
    if (s.wigner.half_width_i) {
      out << "half_width_i = " << toml_double(*s.wigner.half_width_i) << '\n';
    }
  }
  return out.str();
}

std::string scenario_hash(const Scenario& s) {
  // Where the artifacts go is not part of the run's identity.
  Scenario canonical = s;
  canonical.output.clear();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : normalized_toml(canonical)) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

}  // namespace qbm::app
