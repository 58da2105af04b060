#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Dense>

namespace qbm {

/// Uniform rectangular sampling of the (beta_r, beta_i) plane.
struct GridSpec {
  double r_min = -1.0, r_max = 1.0;
  int nr = 3;
  double i_min = -1.0, i_max = 1.0;
  int ni = 3;

  /// Odd point counts centred on the origin, so that beta = 0 is sampled.
  static GridSpec centered(double r_half_width, double i_half_width,
                           double step);

  double dr() const { return nr > 1 ? (r_max - r_min) / (nr - 1) : 0.0; }
  double di() const { return ni > 1 ? (i_max - i_min) / (ni - 1) : 0.0; }
  double beta_r(int col) const { return r_min + col * dr(); }
  double beta_i(int row) const { return i_min + row * di(); }
  void validate() const;
};

struct GridMetadata {
  std::string source;  // "analytic/offresonant", "analytic/resonant", "fock"
  double t = 0.0;
  double alpha = 0.0;
  double bigN = 0.0;
  double bigGamma = 0.0;
  int dim = 0;  // Fock truncation, 0 for analytic grids
  bool outside_validity = false;
  std::vector<std::string> warnings;
};

/// Sampled W(beta); values(row, col) with row indexing beta_i.
struct WignerGrid {
  GridSpec spec;
  Eigen::MatrixXd values;
  GridMetadata meta;

  double cell_area() const { return spec.dr() * spec.di(); }
  double integral() const { return values.sum() * cell_area(); }
  double min_value() const { return values.minCoeff(); }
};

/// CSV matrix: header row "beta_i\beta_r" followed by the beta_r axis, then
/// one row per beta_i value.
void write_wigner_csv(std::ostream& out, const WignerGrid& grid);
/// JSON sidecar with regime/source, t, alpha, N(t), Gamma(t).
void write_wigner_sidecar(std::ostream& out, const WignerGrid& grid,
                          double omega0 = 1.0);

}  // namespace qbm
