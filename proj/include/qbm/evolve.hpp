#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <vector>

#include "qbm/coefficients.hpp"
#include "qbm/fock.hpp"
#include "qbm/master_equation.hpp"

namespace qbm {

using CoefficientFn = std::function<CoefficientSample(double)>;

/// Closed-form transient delta(t), gamma(t).
CoefficientFn transient_coefficients(const OscillatorSpec& osc,
                                     const BathSpec& bath);
/// Constant rates with delta + gamma = gamma1 and delta - gamma = gamma_minus1.
CoefficientFn markovian_coefficients(const OscillatorSpec& osc,
                                     const BathSpec& bath);

struct EvolveOptions {
  double tol = 1e-10;
  /// Snapshot times; empty means 101 uniform samples of [0, t_final].
  std::vector<double> output_times;
  /// Abort when the last Fock population exceeds this.
  double tail_threshold = 1e-9;
  std::size_t max_steps = 2'000'000;
  /// Defaults to the closed-form transient coefficients.
  CoefficientFn coefficients;
};

struct SnapshotDiagnostics {
  double trace_error = 0.0;
  double hermiticity_error = 0.0;
  double min_eigenvalue = 0.0;
  double mean_n = 0.0;
  double tail_mass = 0.0;
};

struct EvolutionResult {
  MasterEquationKind kind{};
  std::vector<double> times;
  std::vector<DensityMatrix> states;
  std::vector<SnapshotDiagnostics> diagnostics;
  std::size_t steps = 0;
};

SnapshotDiagnostics diagnose(const DensityMatrix& rho);

/// Adaptive Dormand-Prince 5(4) integration with dense output at the
/// snapshot times. The trace is never renormalized.
///
/// Throws IntegrationError on step-size underflow or step cap, and
/// TruncationError when the tail population breaches the threshold.
EvolutionResult evolve(MasterEquationKind kind, const DensityMatrix& rho0,
                       double t_final, const OscillatorSpec& osc,
                       const BathSpec& bath, const EvolveOptions& options);

EvolutionResult evolve(MasterEquationKind kind, const DensityMatrix& rho0,
                       double t_final, const OscillatorSpec& osc,
                       const BathSpec& bath, double tol = 1e-10);

/// <n>(t) = Tr(a^dag a rho(t)) per snapshot.
std::vector<double> heating_function(const EvolutionResult& result);

/// Truncation for a cat of amplitude alpha whose accumulated diffusion
/// reaches bigN by the end of the run.
int auto_dimension(double alpha, double bigN_final);

/// omega0_t, trace_error, hermiticity_error, min_eigenvalue, mean_n, tail_mass
void write_diagnostics_csv(std::ostream& out, const EvolutionResult& result,
                           const OscillatorSpec& osc);

/// JSON array of snapshots: time stamp, dim, row-major [re, im] pairs and
/// diagnostics.
void write_snapshots_json(std::ostream& out, const EvolutionResult& result,
                          const OscillatorSpec& osc);

}  // namespace qbm
