#pragma once

#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "qbm/coefficients.hpp"
#include "qbm/gaussian_wigner.hpp"
#include "qbm/master_equation.hpp"

namespace qbm::app {

enum class StateKind { Cat, Vacuum, Fock };
enum class TimeUnit { Omega0, OmegaC };  // times given as omega0 t or omega_c t
enum class RegimeChoice { Auto, OffResonant, Resonant };
enum class WignerSource { Auto, Analytic, Oracle };

struct InitialState {
  StateKind kind = StateKind::Cat;
  double alpha = 0.0;  // cat only
  int n = 0;           // fock only
};

struct TimeGrid {
  TimeUnit unit = TimeUnit::Omega0;
  // Either a uniform grid from 0 to t_end ...
  std::optional<double> t_end;
  int t_points = 101;
  // ... or an explicit list.
  std::vector<double> values;
};

struct WignerOptions {
  WignerSource source = WignerSource::Auto;
  std::vector<double> times;  // same unit as the run grid
  std::optional<double> step;
  std::optional<double> half_width_r;
  std::optional<double> half_width_i;
};

/// A declarative run description. Everything is a dimensionless ratio:
/// r = omega_c/omega0, kT = k_B T/omega0, times in units of 1/omega0 or
/// 1/omega_c.
struct Scenario {
  double omega0 = 1.0;
  double g = 0.0;
  double r = 1.0;
  double kT = 0.0;
  InitialState state;
  std::optional<MasterEquationKind> equation;  // empty: auto
  RegimeChoice regime = RegimeChoice::Auto;
  TimeGrid grid;
  int dim = 0;  // 0: auto
  double tol = 1e-10;
  bool oracle = false;
  std::string output = "out";
  WignerOptions wigner;

  OscillatorSpec oscillator() const { return OscillatorSpec(omega0); }
  BathSpec bath() const;
  /// Physical times of the run grid.
  std::vector<double> times() const;
  std::vector<double> wigner_times() const;
  Regime resolved_regime() const;
  /// False when r sits between the two validity windows.
  bool regime_valid() const;
  MasterEquationKind resolved_equation() const;
};

/// Parses TOML text; `origin` names the source in error messages.
/// Throws ConfigError naming the offending section or field.
Scenario parse_scenario(std::string_view text, std::string_view origin = "<string>");
Scenario load_scenario(const std::filesystem::path& path);

/// Canonical TOML rendering with every field explicit; parsing it back gives
/// an identical scenario.
std::string normalized_toml(const Scenario& s);

/// FNV-1a 64 of the normalized TOML with run.output blanked, as 16 hex
/// digits.
std::string scenario_hash(const Scenario& s);

std::string_view to_string(StateKind k);
std::string_view to_string(TimeUnit u);
std::string_view to_string(RegimeChoice c);
std::string_view to_string(WignerSource s);

}  // namespace qbm::app
