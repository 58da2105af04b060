#pragma once

#include <vector>

#include <Eigen/Dense>

namespace qbm {

using ComplexMatrix = Eigen::MatrixXcd;

/// Reduced density matrix in a truncated number basis |0>..|dim-1>.
class DensityMatrix {
 public:
  /// Validates Hermiticity (1e-12), unit trace (1e-10) and that the last
  /// Fock population stays below tail_threshold.
  explicit DensityMatrix(ComplexMatrix m, double tail_threshold = 1e-9);

  /// Wraps a matrix without validation; used for integrator snapshots whose
  /// drift is reported, not corrected.
  static DensityMatrix unchecked(ComplexMatrix m);

  int dim() const { return static_cast<int>(m_.rows()); }
  const ComplexMatrix& matrix() const { return m_; }
  std::complex<double> operator()(int i, int j) const { return m_(i, j); }

  double trace_error() const;
  double hermiticity_error() const;
  /// Population of the highest retained Fock level.
  double tail_mass() const;
  double min_eigenvalue() const;
  double mean_n() const;
  std::vector<double> populations() const;

 private:
  struct NoCheck {};
  DensityMatrix(ComplexMatrix m, NoCheck) : m_(std::move(m)) {}

  ComplexMatrix m_;
};

/// Smallest dimension for which the even-cat population on the last retained
/// level and beyond is below tail.
int required_cat_dim(double alpha, double tail = 1e-10);

/// rho = |psi><psi| for psi proportional to |alpha> + |-alpha>, alpha real.
/// Throws TruncationError (with the required dimension) if dim is too small.
DensityMatrix cat_state_density(double alpha, int dim);

DensityMatrix fock_state_density(int n, int dim);
DensityMatrix thermal_state_density(double mean_n, int dim);

}  // namespace qbm
