#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include <Eigen/Dense>

namespace qbm::testing {

inline double rel_err(double value, double reference) {
  return std::abs(value - reference) / std::abs(reference);
}

// Fixed-seed generator for the hand-rolled property tests.
class Rng {
 public:
  explicit Rng(std::uint64_t seed = 20240611) : eng_(seed) {}

  double uniform(double lo, double hi) {
    return std::uniform_real_distribution<double>(lo, hi)(eng_);
  }
  double log_uniform(double lo, double hi) {
    return std::exp(uniform(std::log(lo), std::log(hi)));
  }
  int integer(int lo, int hi) {
    return std::uniform_int_distribution<int>(lo, hi)(eng_);
  }
  std::complex<double> normal_complex() {
    std::normal_distribution<double> n;
    return {n(eng_), n(eng_)};
  }

 private:
  std::mt19937_64 eng_;
};

inline Eigen::MatrixXcd random_matrix(int d, Rng& rng) {
  Eigen::MatrixXcd m(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) m(i, j) = rng.normal_complex();
  return m;
}

inline Eigen::MatrixXcd random_hermitian(int d, Rng& rng) {
  const Eigen::MatrixXcd m = random_matrix(d, rng);
  return 0.5 * (m + m.adjoint());
}

// Positive, unit trace, with populations decaying towards the last level.
inline Eigen::MatrixXcd random_density(int d, Rng& rng) {
  Eigen::MatrixXcd m = random_matrix(d, rng);
  for (int i = 0; i < d; ++i) m.row(i) *= std::exp(-0.8 * i);
  Eigen::MatrixXcd rho = m * m.adjoint();
  return rho / rho.trace().real();
}

// Composite Simpson rule on [a, b] with n (even) panels.
template <class F>
double simpson(F f, double a, double b, int n) {
  const double h = (b - a) / n;
  double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += (i % 2 ? 4.0 : 2.0) * f(a + i * h);
  return s * h / 3.0;
}

inline std::vector<double> log_spaced(double lo, double hi, int n) {
  std::vector<double> out(n);
  for (int i = 0; i < n; ++i) {
    out[i] = lo * std::pow(hi / lo, double(i) / (n - 1));
  }
  return out;
}

}  // namespace qbm::testing
