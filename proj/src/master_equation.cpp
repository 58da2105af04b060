#include "qbm/master_equation.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

namespace qbm {

using cplx = std::complex<double>;

std::string_view to_string(MasterEquationKind kind) {
  switch (kind) {
    case MasterEquationKind::ExactReduced: return "exact";
    case MasterEquationKind::NonSecular: return "nonsecular";
    case MasterEquationKind::Repaired: return "repaired";
    case MasterEquationKind::Secular: return "secular";
    case MasterEquationKind::PositionMeasurement: return "position";
  }
  throw std::invalid_argument("unknown master equation kind");
}

MasterEquationKind parse_master_equation_kind(std::string_view name) {
  for (auto k : {MasterEquationKind::ExactReduced, MasterEquationKind::NonSecular,
                 MasterEquationKind::Repaired, MasterEquationKind::Secular,
                 MasterEquationKind::PositionMeasurement}) {
    if (to_string(k) == name) return k;
  }
  throw std::invalid_argument("unknown master equation kind '" +
                              std::string(name) + "'");
}

ComplexMatrix lower_left(const ComplexMatrix& m) {
  const Eigen::Index d = m.rows();
  ComplexMatrix out = ComplexMatrix::Zero(d, m.cols());
  for (Eigen::Index i = 0; i + 1 < d; ++i) {
    out.row(i) = std::sqrt(double(i + 1)) * m.row(i + 1);
  }
  return out;
}

ComplexMatrix raise_left(const ComplexMatrix& m) {
  const Eigen::Index d = m.rows();
  ComplexMatrix out = ComplexMatrix::Zero(d, m.cols());
  for (Eigen::Index i = 1; i < d; ++i) {
    out.row(i) = std::sqrt(double(i)) * m.row(i - 1);
  }
  return out;
}

ComplexMatrix lower_right(const ComplexMatrix& m) {
  const Eigen::Index d = m.cols();
  ComplexMatrix out = ComplexMatrix::Zero(m.rows(), d);
  for (Eigen::Index j = 1; j < d; ++j) {
    out.col(j) = std::sqrt(double(j)) * m.col(j - 1);
  }
  return out;
}

ComplexMatrix raise_right(const ComplexMatrix& m) {
  const Eigen::Index d = m.cols();
  ComplexMatrix out = ComplexMatrix::Zero(m.rows(), d);
  for (Eigen::Index j = 0; j + 1 < d; ++j) {
    out.col(j) = std::sqrt(double(j + 1)) * m.col(j + 1);
  }
  return out;
}

ComplexMatrix apply_L(Ladder jump, const ComplexMatrix& rho) {
  if (jump == Ladder::Annihilation) {
    // 2 a rho a^dag - a^dag a rho - rho a^dag a
    return 2.0 * lower_left(raise_right(rho)) - raise_left(lower_left(rho)) -
           lower_right(raise_right(rho));
  }
  // 2 a^dag rho a - a a^dag rho - rho a a^dag
  return 2.0 * raise_left(lower_right(rho)) - lower_left(raise_left(rho)) -
         raise_right(lower_right(rho));
}

ComplexMatrix apply_D(Ladder op, const ComplexMatrix& rho) {
  if (op == Ladder::Annihilation) {
    return 2.0 * lower_left(lower_right(rho)) - lower_left(lower_left(rho)) -
           lower_right(lower_right(rho));
  }
  return 2.0 * raise_left(raise_right(rho)) - raise_left(raise_left(rho)) -
         raise_right(raise_right(rho));
}

namespace {

// Left/right products with X(t), P(t) built from the ladder primitives.
struct RotatingQuadratures {
  cplx down;  // e^{-i phase}/sqrt 2
  cplx up;    // e^{+i phase}/sqrt 2

  explicit RotatingQuadratures(double phase)
      : down(std::polar(M_SQRT1_2, -phase)), up(std::polar(M_SQRT1_2, phase)) {}

  ComplexMatrix x_left(const ComplexMatrix& m) const {
    return down * lower_left(m) + up * raise_left(m);
  }
  ComplexMatrix x_right(const ComplexMatrix& m) const {
    return down * lower_right(m) + up * raise_right(m);
  }
  ComplexMatrix p_left(const ComplexMatrix& m) const {
    return cplx(0, 1) * (up * raise_left(m) - down * lower_left(m));
  }
  ComplexMatrix p_right(const ComplexMatrix& m) const {
    return cplx(0, 1) * (up * raise_right(m) - down * lower_right(m));
  }
  ComplexMatrix x_commutator(const ComplexMatrix& m) const {
    return x_left(m) - x_right(m);
  }
};

ComplexMatrix secular_part(const ComplexMatrix& rho, double delta,
                           double gamma) {
  return 0.5 * (delta + gamma) * apply_L(Ladder::Annihilation, rho) +
         0.5 * (delta - gamma) * apply_L(Ladder::Creation, rho);
}

ComplexMatrix two_photon_part(const ComplexMatrix& rho, double strength,
                              double phase) {
  const cplx up = std::polar(0.5 * strength, 2.0 * phase);
  return up * apply_D(Ladder::Creation, rho) +
         std::conj(up) * apply_D(Ladder::Annihilation, rho);
}

}  // namespace

ComplexMatrix position_operator(int dim, double phase) {
  return RotatingQuadratures(phase).x_left(ComplexMatrix::Identity(dim, dim));
}

ComplexMatrix momentum_operator(int dim, double phase) {
  return RotatingQuadratures(phase).p_left(ComplexMatrix::Identity(dim, dim));
}

ComplexMatrix rhs(MasterEquationKind kind, double t, const ComplexMatrix& rho,
                  const CoefficientSample& coeffs, const OscillatorSpec& osc) {
  const double delta = coeffs.delta;
  const double gamma = coeffs.gamma;
  const double phase = osc.omega0() * t;
  switch (kind) {
    case MasterEquationKind::Secular:
      return secular_part(rho, delta, gamma);
    case MasterEquationKind::NonSecular:
      return secular_part(rho, delta, gamma) + two_photon_part(rho, delta, phase);
    case MasterEquationKind::Repaired:
      return secular_part(rho, delta, gamma) +
             two_photon_part(rho, delta - gamma, phase);
    case MasterEquationKind::PositionMeasurement: {
      const RotatingQuadratures q(phase);
      return -delta * q.x_commutator(q.x_commutator(rho));
    }
    case MasterEquationKind::ExactReduced: {
      const RotatingQuadratures q(phase);
      const ComplexMatrix anti = q.p_left(rho) + q.p_right(rho);
      return -delta * q.x_commutator(q.x_commutator(rho)) -
             cplx(0, gamma) * q.x_commutator(anti);
    }
  }
  throw std::invalid_argument("unknown master equation kind");
}

}  // namespace qbm
