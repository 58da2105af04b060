#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <string_view>

#include "qbm/app/scenario.hpp"

namespace qbm::app {

enum ExitCode : int { kOk = 0, kError = 1, kToleranceFail = 2 };

/// Command-line overrides applied on top of the scenario file.
struct CommandOptions {
  std::filesystem::path config;
  std::optional<std::filesystem::path> out;
  std::optional<int> dim;
  std::optional<double> tol;
  std::optional<std::string> regime;  // auto | offres | res
};

Scenario apply_overrides(Scenario s, const CommandOptions& opts);

/// Fock truncation used when the scenario asks for "auto".
int scenario_dimension(const Scenario& s);

// Each command writes its artifacts plus a normalized scenario.toml into
// s.output and returns an exit code. Library errors propagate.
int cmd_coefficients(const Scenario& s, std::ostream& log);
int cmd_evolve(const Scenario& s, std::ostream& log);
int cmd_visibility(const Scenario& s, std::ostream& log);
int cmd_wigner(const Scenario& s, std::ostream& log);
int cmd_compare(const Scenario& s, std::ostream& log);

/// Loads the config, applies overrides and dispatches. Errors are reported
/// on err and mapped to kError.
int run_command(std::string_view name, const CommandOptions& opts,
                std::ostream& log, std::ostream& err);

}  // namespace qbm::app
