#include "qbm/app/commands.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <ostream>

#include <json.hpp>

#include "qbm/analysis.hpp"
#include "qbm/errors.hpp"
#include "qbm/evolve.hpp"
#include "qbm/fock.hpp"
#include "qbm/gaussian_wigner.hpp"
#include "qbm/io.hpp"

namespace qbm::app {

namespace fs = std::filesystem;

namespace {

std::ofstream open_output(const Scenario& s, const std::string& name) {
  const fs::path path = fs::path(s.output) / name;
  std::ofstream out(path);
  if (!out) throw Error("cannot write " + path.string());
  return out;
}

void prepare_output(const Scenario& s) {
  std::error_code ec;
  fs::create_directories(s.output, ec);
  if (ec) throw Error("cannot create output directory " + s.output + ": " + ec.message());
  open_output(s, "scenario.toml") << normalized_toml(s);
}

double max_bigN(const Scenario& s, const std::vector<double>& times) {
  double n = 0.0;
  for (double t : times) n = std::max(n, integrated_closed(t, s.oscillator(), s.bath()).bigN);
  return n;
}

void describe_regime(const Scenario& s, std::ostream& log) {
  log << "regime: " << to_string(s.resolved_regime())
      << (s.regime == RegimeChoice::Auto ? " (auto)" : "") << ", r = "
      << format_double(s.r) << '\n';
  if (!s.regime_valid()) {
    log << "warning: r = " << format_double(s.r)
        << " lies outside the validity window of the closed forms "
           "(r <= 0.2 or r >= 5)\n";
  }
}

DensityMatrix initial_state(const Scenario& s, int dim) {
  switch (s.state.kind) {
    case StateKind::Cat: return cat_state_density(s.state.alpha, dim);
    case StateKind::Vacuum: return fock_state_density(0, dim);
    case StateKind::Fock:
      if (s.state.n + 1 >= dim) {
        throw TruncationError("Fock state n = " + std::to_string(s.state.n) +
                                  " needs dim > " + std::to_string(s.state.n + 1),
                              s.state.n + 8);
      }
      return fock_state_density(s.state.n, dim);
  }
  throw ConfigError("unknown initial state");
}

CompareScenario compare_setup(const Scenario& s) {
  CompareScenario c;
  c.osc = s.oscillator();
  c.bath = s.bath();
  c.alpha = s.state.alpha;
  c.kind = s.resolved_equation();
  c.regime = s.resolved_regime();
  c.times = s.times();
  c.dim = s.dim;
  c.tol = s.tol;
  return c;
}

std::string wrap(const Scenario& s, const std::string& what) {
  return "scenario " + scenario_hash(s) + ": " + what;
}

EvolutionResult run_oracle(const Scenario& s, const std::vector<double>& times,
                           std::ostream& log) {
  const int dim = scenario_dimension(s);
  log << "equation: " << to_string(s.resolved_equation()) << ", dim = " << dim << '\n';
  EvolveOptions options;
  options.tol = s.tol;
  options.output_times = times;
  try {
    return evolve(s.resolved_equation(), initial_state(s, dim), times.back(),
                  s.oscillator(), s.bath(), options);
  } catch (const TruncationError& e) {
    throw TruncationError(wrap(s, e.what()) + "; rerun with --dim " +
                              std::to_string(e.suggested_dim()),
                          e.suggested_dim());
  } catch (const IntegrationError& e) {
    throw IntegrationError(wrap(s, e.what()), e.time());
  }
}

GridSpec wigner_grid_for(const Scenario& s, const GaussianCatWigner* shape) {
  double step = 0.05, hr = 0.0, hi = 0.0;
  if (shape) {
    const GridSpec auto_grid = analytic_grid(*shape);
    step = auto_grid.dr();
    hr = auto_grid.r_max;
    hi = auto_grid.i_max;
  } else {
    const double n = s.state.kind == StateKind::Fock ? s.state.n : 0.0;
    hr = hi = std::sqrt(n + 0.5) + 4.0;
  }
  return GridSpec::centered(s.wigner.half_width_r.value_or(hr),
                            s.wigner.half_width_i.value_or(hi),
                            s.wigner.step.value_or(step));
}

}  // namespace

Scenario apply_overrides(Scenario s, const CommandOptions& opts) {
  if (opts.out) s.output = opts.out->string();
  if (opts.dim) {
    if (*opts.dim < 2) throw ConfigError("--dim must be >= 2");
    s.dim = *opts.dim;
  }
  if (opts.tol) {
    if (!(*opts.tol > 0.0)) throw ConfigError("--tol must be > 0");
    s.tol = *opts.tol;
  }
  if (opts.regime) {
    if (*opts.regime == "auto") s.regime = RegimeChoice::Auto;
    else if (*opts.regime == "offres") s.regime = RegimeChoice::OffResonant;
    else if (*opts.regime == "res") s.regime = RegimeChoice::Resonant;
    else throw ConfigError("--regime must be auto, offres or res");
  }
  return s;
}

int scenario_dimension(const Scenario& s) {
  if (s.dim > 0) return s.dim;
  std::vector<double> times = s.times();
  const auto wt = s.wigner_times();
  times.insert(times.end(), wt.begin(), wt.end());
  const double n = max_bigN(s, times);
  switch (s.state.kind) {
    case StateKind::Cat: return auto_dimension(s.state.alpha, n);
    case StateKind::Vacuum: return 10 + int(std::ceil(8.0 * n));
    case StateKind::Fock: return s.state.n + 10 + int(std::ceil(8.0 * n));
  }
  return 0;
}

int cmd_coefficients(const Scenario& s, std::ostream& log) {
  prepare_output(s);
  const auto osc = s.oscillator();
  const auto bath = s.bath();
  std::vector<double> times = s.times();
  if (times.front() != 0.0) times.insert(times.begin(), 0.0);
  const CoefficientTrajectory tr = integrate_coefficients(times, osc, bath);
  {
    auto out = open_output(s, "coefficients.csv");
    write_trajectory_csv(out, tr, osc);
  }

  const MarkovianLimits m = markovian_limits(osc, bath);
  // First grid time after which delta + gamma stays within 1% of gamma1.
  std::optional<double> converged;
  if (m.gamma1 > 0.0) {
    for (std::size_t i = tr.samples.size(); i-- > 0;) {
      const auto& c = tr.samples[i];
      if (std::abs(c.delta + c.gamma - m.gamma1) > 0.01 * m.gamma1) break;
      converged = c.t;
    }
  }
  nlohmann::ordered_json j = {
      {"scenario_hash", scenario_hash(s)},
      {"decay_rate", m.decay_rate},
      {"gamma1", m.gamma1},
      {"gamma_minus1", m.gamma_minus1},
      {"occupation", m.occupation},
      {"convergence_omega0_t", converged ? nlohmann::ordered_json(osc.omega0() * *converged)
                                         : nlohmann::ordered_json(nullptr)},
  };
  open_output(s, "coefficients.json") << j.dump(2) << '\n';

  log << "Gamma = " << format_double(m.decay_rate) << '\n'
      << "gamma1 = " << format_double(m.gamma1) << '\n'
      << "gamma_minus1 = " << format_double(m.gamma_minus1) << '\n'
      << "N(omega0) = " << format_double(m.occupation) << '\n';
  if (converged) {
    log << "delta + gamma within 1% of gamma1 from omega0 t = "
        << format_double(osc.omega0() * *converged) << '\n';
  } else {
    log << "delta + gamma not within 1% of gamma1 on this grid\n";
  }
  return kOk;
}

int cmd_evolve(const Scenario& s, std::ostream& log) {
  prepare_output(s);
  const auto times = s.times();
  const EvolutionResult run = run_oracle(s, times, log);
  {
    auto out = open_output(s, "diagnostics.csv");
    write_diagnostics_csv(out, run, s.oscillator());
  }
  {
    auto out = open_output(s, "snapshots.json");
    write_snapshots_json(out, run, s.oscillator());
  }
  double worst_trace = 0.0, worst_herm = 0.0;
  double min_eig = std::numeric_limits<double>::infinity();
  for (const auto& d : run.diagnostics) {
    worst_trace = std::max(worst_trace, d.trace_error);
    worst_herm = std::max(worst_herm, d.hermiticity_error);
    min_eig = std::min(min_eig, d.min_eigenvalue);
  }
  log << "snapshots: " << run.times.size() << ", steps: " << run.steps << '\n'
      << "max trace error: " << format_double(worst_trace) << '\n'
      << "max hermiticity error: " << format_double(worst_herm) << '\n'
      << "min eigenvalue: " << format_double(min_eig) << '\n';
  return kOk;
}

int cmd_visibility(const Scenario& s, std::ostream& log) {
  if (s.state.kind != StateKind::Cat) {
    throw ConfigError("visibility needs [state] kind = \"cat\"");
  }
  prepare_output(s);
  describe_regime(s, log);
  const CompareScenario c = compare_setup(s);
  VisibilityReport r;
  if (s.oracle && s.state.alpha > 0.0) {
    log << "equation: " << to_string(c.kind) << '\n';
    r = compare_scenario(c);
  } else {
    r = analytic_visibility(c);
  }
  r.scenario_hash = scenario_hash(s);
  {
    auto out = open_output(s, "visibility.csv");
    write_visibility_csv(out, r);
  }
  {
    auto out = open_output(s, "visibility.json");
    write_visibility_json(out, r);
  }
  log << "F(t_end) = " << format_double(r.f_analytic.back()) << '\n';
  if (!r.f_oracle.empty()) {
    log << "max relative deviation (oracle vs closed form): "
        << format_double(r.max_rel_dev) << '\n';
  }
  return kOk;
}

int cmd_wigner(const Scenario& s, std::ostream& log) {
  prepare_output(s);
  std::vector<double> times = s.wigner_times();
  if (times.empty()) times.push_back(0.0);

  WignerSource source = s.wigner.source;
  if (source == WignerSource::Auto) {
    source = s.state.kind == StateKind::Fock ? WignerSource::Oracle
                                             : WignerSource::Analytic;
  }
  if (source == WignerSource::Analytic && s.state.kind == StateKind::Fock) {
    throw ConfigError("wigner.source = \"analytic\" is only available for cat "
                      "and vacuum states");
  }
  const double alpha = s.state.kind == StateKind::Cat ? s.state.alpha : 0.0;
  const CatParams cat = CatParams::make(alpha);
  const Regime regime = s.resolved_regime();
  const auto osc = s.oscillator();
  const auto bath = s.bath();
  describe_regime(s, log);

  const int dim = scenario_dimension(s);
  {
    auto out = open_output(s, "pn.csv");
    out << "n,P_n\n";
    const auto p = initial_state(s, dim).populations();
    for (std::size_t n = 0; n < p.size(); ++n) {
      out << n << ',' << format_double(p[n]) << '\n';
    }
  }

  std::optional<EvolutionResult> run;
  if (source == WignerSource::Oracle) run = run_oracle(s, times, log);

  for (std::size_t i = 0; i < times.size(); ++i) {
    const auto coeffs = integrated_closed(times[i], osc, bath);
    const bool cat_like = s.state.kind != StateKind::Fock;
    std::optional<GaussianCatWigner> shape;
    if (cat_like) shape.emplace(cat, coeffs, regime);
    const GridSpec grid = wigner_grid_for(s, shape ? &*shape : nullptr);

    WignerGrid w = source == WignerSource::Analytic
                       ? wigner_cat_analytic(cat, coeffs, regime, grid)
                       : wigner_from_density(run->states[i], grid);
    w.meta.t = times[i];
    w.meta.alpha = alpha;
    w.meta.bigN = coeffs.bigN;
    w.meta.bigGamma = coeffs.bigGamma;
    if (source == WignerSource::Analytic && !s.regime_valid()) {
      w.meta.outside_validity = true;
      w.meta.warnings.push_back("r outside the validity window of the closed forms");
    }

    char stem[32];
    std::snprintf(stem, sizeof stem, "wigner_t%03zu", i);
    {
      auto out = open_output(s, std::string(stem) + ".csv");
      write_wigner_csv(out, w);
    }
    {
      auto out = open_output(s, std::string(stem) + ".json");
      write_wigner_sidecar(out, w, osc.omega0());
    }
    log << stem << ": omega0 t = " << format_double(osc.omega0() * times[i])
        << ", " << w.spec.nr << "x" << w.spec.ni << ", min W = "
        << format_double(w.min_value()) << '\n';
  }
  return kOk;
}

int cmd_compare(const Scenario& s, std::ostream& log) {
  if (s.state.kind != StateKind::Cat || !(s.state.alpha > 0.0)) {
    throw ConfigError("compare needs [state] kind = \"cat\" with alpha > 0");
  }
  prepare_output(s);
  describe_regime(s, log);
  const CompareScenario c = compare_setup(s);
  log << "equation: " << to_string(c.kind) << '\n';
  VisibilityReport r = compare_scenario(c);
  r.scenario_hash = scenario_hash(s);
  {
    auto out = open_output(s, "visibility.csv");
    write_visibility_csv(out, r);
  }
  {
    auto out = open_output(s, "visibility.json");
    write_visibility_json(out, r);
  }
  log << "max relative deviation: " << format_double(r.max_rel_dev) << '\n'
      << (r.within_tolerance ? "PASS" : "FAIL") << '\n';
  return r.within_tolerance ? kOk : kToleranceFail;
}

int run_command(std::string_view name, const CommandOptions& opts,
                std::ostream& log, std::ostream& err) {
  try {
    const Scenario s = apply_overrides(load_scenario(opts.config), opts);
    if (name == "coefficients") return cmd_coefficients(s, log);
    if (name == "evolve") return cmd_evolve(s, log);
    if (name == "visibility") return cmd_visibility(s, log);
    if (name == "wigner") return cmd_wigner(s, log);
    if (name == "compare") return cmd_compare(s, log);
    err << "error: unknown command " << name << '\n';
    return kError;
  } catch (const TruncationError& e) {
    err << "error: " << e.what() << " (suggested dim " << e.suggested_dim() << ")\n";
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
  }
  return kError;
}

}  // namespace qbm::app
