#include <iostream>

#include <CLI11.hpp>

#include "qbm/app/commands.hpp"

int main(int argc, char** argv) {
  CLI::App app{"Non-Markovian quantum Brownian motion: coefficients, master "
               "equations, Wigner functions and fringe visibility"};
  app.require_subcommand(1);

  qbm::app::CommandOptions opts;
  std::string selected;
  const std::pair<const char*, const char*> commands[] = {
      {"coefficients", "Delta(t), gamma(t), N(t), Gamma(t) and Markovian limits"},
      {"evolve", "Integrate the master equation in a truncated Fock basis"},
      {"visibility", "Closed-form fringe visibility (plus oracle with run.oracle)"},
      {"wigner", "Wigner grids at [wigner] times and P_n at t = 0"},
      {"compare", "Closed form vs Fock oracle visibility; exit 2 on tolerance failure"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", opts.config, "Scenario TOML file")->required();
    sub->add_option("--out", opts.out, "Output directory (overrides run.output)");
    sub->add_option("--dim", opts.dim, "Fock truncation (overrides run.dim)");
    sub->add_option("--tol", opts.tol, "Integrator tolerance (overrides run.tol)");
    sub->add_option("--regime", opts.regime, "Closed-form regime")
        ->check(CLI::IsMember({"auto", "offres", "res"}));
    sub->callback([&selected, name = std::string(name)] { selected = name; });
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return qbm::app::kError;
  }
  return qbm::app::run_command(selected, opts, std::cout, std::cerr);
}
