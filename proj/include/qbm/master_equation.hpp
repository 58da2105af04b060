#pragma once

#include <string_view>

#include "qbm/coefficients.hpp"
#include "qbm/fock.hpp"

namespace qbm {

/// Interaction-picture master equations integrated by the Fock oracle.
enum class MasterEquationKind {
  ExactReduced,         // -D[X,[X,rho]] - i g [X,{P,rho}], no anomalous/shift terms
  NonSecular,           // squeezed-bath form with M from delta (not Lindblad)
  Repaired,             // squeezed-bath form with M from delta - gamma
  Secular,              // counter-rotating terms dropped
  PositionMeasurement,  // -D [X,[X,rho]]
};

std::string_view to_string(MasterEquationKind kind);
MasterEquationKind parse_master_equation_kind(std::string_view name);

enum class Ladder { Annihilation, Creation };

// Ladder-operator products on truncated matrices, O(dim^2) each.
ComplexMatrix lower_left(const ComplexMatrix& m);   // a m
ComplexMatrix raise_left(const ComplexMatrix& m);   // a^dag m
ComplexMatrix lower_right(const ComplexMatrix& m);  // m a
ComplexMatrix raise_right(const ComplexMatrix& m);  // m a^dag

/// Dissipator with jump operator O:  2 O rho O^dag - O^dag O rho - rho O^dag O.
/// Annihilation is decay, Creation is heating.
ComplexMatrix apply_L(Ladder jump, const ComplexMatrix& rho);

/// Two-photon term:  2 O rho O - O^2 rho - rho O^2.
ComplexMatrix apply_D(Ladder op, const ComplexMatrix& rho);

/// Rotating quadratures X(t) = (a e^{-i w0 t} + a^dag e^{i w0 t})/sqrt 2 and
/// P(t) = i (a^dag e^{i w0 t} - a e^{-i w0 t})/sqrt 2 as dense matrices.
ComplexMatrix position_operator(int dim, double phase = 0.0);
ComplexMatrix momentum_operator(int dim, double phase = 0.0);

/// d rho/dt in the interaction picture. The counter-rotating phases
/// e^{+-2i w0 t} are kept exactly.
ComplexMatrix rhs(MasterEquationKind kind, double t, const ComplexMatrix& rho,
                  const CoefficientSample& coeffs, const OscillatorSpec& osc);

}  // namespace qbm
