#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "qbm/coefficients.hpp"
#include "qbm/evolve.hpp"
#include "qbm/fock.hpp"
#include "qbm/gaussian_wigner.hpp"
#include "qbm/master_equation.hpp"
#include "qbm/wigner_grid.hpp"

namespace qbm {

/// Largest |beta| at which a dim-level truncation still carries the state
/// faithfully; grids reaching further are flagged, not rejected.
double reliable_radius(int dim);

/// W(beta) = (2/pi) Tr[rho D(beta) Parity D(beta)^dag], with the displaced
/// parity matrix elements generated by a normalized Laguerre recurrence.
WignerGrid wigner_from_density(const DensityMatrix& rho, const GridSpec& grid);
double wigner_at(const DensityMatrix& rho, double beta_r, double beta_i);

/// Term-wise decomposition of a cat-like grid.
struct VisibilityFit {
  double visibility = 0.0;
  double amplitude_plus = 0.0;
  double amplitude_minus = 0.0;
  double amplitude_interference = 0.0;
  double center_plus = 0.0;
  double center_minus = 0.0;
  double variance_r = 0.0;
  double variance_i = 0.0;
  int iterations = 0;
};

/// F = (1/2) W_I(0) / sqrt(W+(peak) W-(peak)).
///
/// The side lobes are located as the grid maxima near +-center_hint and fitted
/// by three-point log-quadratic interpolation along each axis; the interference
/// amplitude is what remains at the origin after the lobe tails are removed.
/// Lobe fits and interference model are refined against each other until
/// they stop changing.
///
/// Throws GridError if a lobe is not found near its hint or the fringe period
/// along beta_i is sampled by fewer than 8 points.
VisibilityFit fit_visibility(const WignerGrid& w, double center_hint);
double fringe_visibility_from_grid(const WignerGrid& w, double center_hint);

/// Relative tolerance while F_analytic > floor, absolute below it.
struct VisibilityTolerance {
  double relative = 0.05;
  double floor = 0.01;
  double absolute = 0.005;
};

bool visibility_agrees(double f_analytic, double f_oracle,
                       const VisibilityTolerance& tol = {});

struct CompareScenario {
  OscillatorSpec osc;
  BathSpec bath{1.0, 0.0, 1.0};
  double alpha = 2.0;
  MasterEquationKind kind = MasterEquationKind::Repaired;
  Regime regime = Regime::Resonant;
  /// Physical comparison times; 0 may be included.
  std::vector<double> times;
  int dim = 0;  // 0: auto_dimension
  double tol = 1e-10;
  int samples_per_fringe = 10;
  VisibilityTolerance tolerance;
};

struct VisibilityReport {
  std::vector<double> times;  // physical
  std::vector<double> f_analytic;
  std::vector<double> f_oracle;
  std::vector<double> rel_dev;
  double max_rel_dev = 0.0;
  bool within_tolerance = true;
  Regime regime = Regime::Resonant;
  MasterEquationKind kind = MasterEquationKind::Repaired;
  double omega0 = 1.0;
  double ratio = 0.0;
  double g = 0.0;
  double kT = 0.0;
  double alpha = 0.0;
  int dim = 0;
  bool outside_validity = false;
  std::string scenario_hash;
};

/// Closed-form visibility only, for the scenario's times.
VisibilityReport analytic_visibility(const CompareScenario& s);

/// Runs the closed form and the Fock-space oracle on the same times.
/// Requires alpha > 0 so that the lobes are separable.
VisibilityReport compare_scenario(const CompareScenario& s);

/// Oracle visibility for an already evolved run; the grid for each snapshot
/// is sized from the closed-form geometry at that time.
std::vector<double> oracle_visibility(const EvolutionResult& run,
                                      const CompareScenario& s);

/// omega0_t, F_analytic, F_oracle, rel_dev. F_oracle and rel_dev are left
/// empty when the report has no oracle column.
void write_visibility_csv(std::ostream& out, const VisibilityReport& r);
void write_visibility_json(std::ostream& out, const VisibilityReport& r);

}  // namespace qbm
