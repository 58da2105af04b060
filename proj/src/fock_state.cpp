#include "qbm/fock.hpp"

#include <cmath>
#include <stdexcept>
#include <string>
#include <vector>

#include "qbm/errors.hpp"

namespace qbm {

DensityMatrix::DensityMatrix(ComplexMatrix m, double tail_threshold)
    : m_(std::move(m)) {
  if (m_.rows() == 0 || m_.rows() != m_.cols()) {
    throw std::invalid_argument("density matrix must be square and non-empty");
  }
  if (hermiticity_error() > 1e-12) {
    throw std::invalid_argument("density matrix is not Hermitian");
  }
  if (trace_error() > 1e-10) {
    throw std::invalid_argument("density matrix trace differs from 1");
  }
  if (tail_mass() > tail_threshold) {
    throw TruncationError("population of the last Fock level exceeds " +
                              std::to_string(tail_threshold),
                          2 * dim());
  }
}

DensityMatrix DensityMatrix::unchecked(ComplexMatrix m) {
  return DensityMatrix(std::move(m), NoCheck{});
}

double DensityMatrix::trace_error() const {
  return std::abs(m_.trace() - 1.0);
}

double DensityMatrix::hermiticity_error() const {
  return (m_ - m_.adjoint()).cwiseAbs().maxCoeff();
}

double DensityMatrix::tail_mass() const {
  return std::abs(m_(dim() - 1, dim() - 1));
}

double DensityMatrix::min_eigenvalue() const {
  const ComplexMatrix h = 0.5 * (m_ + m_.adjoint());
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> solver(h, Eigen::EigenvaluesOnly);
  return solver.eigenvalues().minCoeff();
}

double DensityMatrix::mean_n() const {
  std::complex<double> acc = 0.0;
  for (int n = 0; n < dim(); ++n) acc += double(n) * m_(n, n);
  return acc.real();
}

std::vector<double> DensityMatrix::populations() const {
  std::vector<double> p(dim());
  for (int n = 0; n < dim(); ++n) p[n] = m_(n, n).real();
  return p;
}

namespace {

// Unnormalized even-cat amplitude e^{-a^2/2} a^n/sqrt(n!) (1 + (-1)^n).
double cat_amplitude(double alpha, int n) {
  if (n % 2 == 1) return 0.0;
  if (alpha == 0.0) return n == 0 ? 2.0 : 0.0;
  const double log_mag = -0.5 * alpha * alpha + n * std::log(std::abs(alpha)) -
                         0.5 * std::lgamma(n + 1.0);
  return 2.0 * std::exp(log_mag);
}

}  // namespace

int required_cat_dim(double alpha, double tail) {
  if (!(tail > 0.0)) throw std::invalid_argument("tail must be positive");
  // Norm^2 of |alpha> + |-alpha> is 2(1 + e^{-2 alpha^2}). The tail is summed
  // from the far end, since 1 - (captured mass) bottoms out at roundoff.
  const double norm2 = 2.0 * (1.0 + std::exp(-2.0 * alpha * alpha));
  const double a2 = alpha * alpha;
  const int n_max = int(a2 + 40.0 * std::abs(alpha) + 60.0);
  if (n_max > 100000) {
    throw std::invalid_argument("cat amplitude too large for Fock truncation");
  }
  std::vector<double> remaining(n_max + 2, 0.0);
  for (int n = n_max; n >= 0; --n) {
    const double c = cat_amplitude(alpha, n);
    remaining[n] = remaining[n + 1] + c * c / norm2;
  }
  // Truncation dim must also exceed the mean, or the tail estimate is
  // meaningless on the rising side of the distribution. The last retained
  // level is n + 1, so it too carries less than tail.
  for (int n = 0; n <= n_max; ++n) {
    if (remaining[n + 1] < tail && n > a2) return n + 2;
  }
  throw std::invalid_argument("cat amplitude too large for Fock truncation");
}

DensityMatrix cat_state_density(double alpha, int dim) {
  if (dim < 1) throw std::invalid_argument("dim must be positive");
  const int needed = required_cat_dim(alpha);
  if (dim < needed) {
    throw TruncationError("dim " + std::to_string(dim) +
                              " truncates the cat state; need at least " +
                              std::to_string(needed),
                          needed);
  }
  Eigen::VectorXcd psi(dim);
  for (int n = 0; n < dim; ++n) psi(n) = cat_amplitude(alpha, n);
  psi.normalize();
  return DensityMatrix(psi * psi.adjoint());
}

DensityMatrix fock_state_density(int n, int dim) {
  if (n < 0 || n >= dim) throw std::invalid_argument("Fock index out of range");
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  m(n, n) = 1.0;
  return DensityMatrix::unchecked(std::move(m));
}

DensityMatrix thermal_state_density(double mean_n, int dim) {
  if (!(mean_n >= 0.0)) throw std::invalid_argument("mean_n must be >= 0");
  ComplexMatrix m = ComplexMatrix::Zero(dim, dim);
  const double q = mean_n / (mean_n + 1.0);
  double p = 1.0 / (mean_n + 1.0), total = 0.0;
  for (int n = 0; n < dim; ++n, p *= q) {
    m(n, n) = p;
    total += p;
  }
  m /= total;
  return DensityMatrix(std::move(m), 1.0);
}

}  // namespace qbm
