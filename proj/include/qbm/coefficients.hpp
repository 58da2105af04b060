#pragma once

// Time-dependent bath coefficients of the weak-coupling quantum Brownian
// motion master equation for an Ohmic Lorentz-Drude reservoir.
//
// Units: hbar = 1. Frequencies are angular frequencies; the thermal energy
// is always carried as the ratio k_B T / omega0. Times are physical times, so
// with omega0 = 1 a time t is the dimensionless omega0 * t.

#include <complex>
#include <functional>
#include <iosfwd>
#include <span>
#include <vector>

namespace qbm {

class OscillatorSpec {
 public:
  explicit OscillatorSpec(double omega0 = 1.0);

  double omega0() const { return omega0_; }

 private:
  double omega0_;
};

/// Ohmic reservoir J(w) = (2w/pi) wc^2/(wc^2 + w^2) with coupling g and
/// temperature k_B T / omega0.
class BathSpec {
 public:
  BathSpec(double omega_c, double g, double kT);

  /// Builds the bath from the resonance ratio r = omega_c / omega0.
  static BathSpec from_ratio(double r, double g, double kT,
                             const OscillatorSpec& osc);

  double omega_c() const { return omega_c_; }
  double g() const { return g_; }
  /// k_B T / omega0.
  double kT() const { return kT_; }
  double ratio(const OscillatorSpec& osc) const {
    return omega_c_ / osc.omega0();
  }

 private:
  double omega_c_;
  double g_;
  double kT_;
};

struct CoefficientSample {
  double t = 0.0;
  double delta = 0.0;  // normal diffusion
  double gamma = 0.0;  // damping
};

struct IntegratedCoefficients {
  double t = 0.0;
  double bigN = 0.0;      // int_0^t delta
  double bigGamma = 0.0;  // 2 int_0^t gamma
};

struct CoefficientTrajectory {
  std::vector<CoefficientSample> samples;
  std::vector<IntegratedCoefficients> integrated;
};

struct SqueezedBathParams {
  double n_eff = 0.0;
  std::complex<double> m_eff;
  double rate = 0.0;
};

struct MarkovianLimits {
  double gamma1 = 0.0;        // Gamma (N(w0) + 1), downward rate
  double gamma_minus1 = 0.0;  // Gamma N(w0), upward rate
  double decay_rate = 0.0;    // Gamma = 2 g^2 r^2/(r^2+1) w0
  double occupation = 0.0;    // N(w0)
};

/// Spectral density J(w), evaluated for w >= 0 only.
using SpectralDensity = std::function<double(double)>;

SpectralDensity ohmic_drude(double omega_c);

// High-temperature closed forms.
double delta_closed(double t, const OscillatorSpec& osc, const BathSpec& bath);
double gamma_closed(double t, const OscillatorSpec& osc, const BathSpec& bath);
CoefficientSample sample_closed(double t, const OscillatorSpec& osc,
                                const BathSpec& bath);

// Quadrature of the second-order coefficient integrals with the high-T
// replacement 2N(w)+1 -> 2 k_B T / w. The time integral is done analytically,
// leaving one frequency integral.
//
// Throws QuadratureError if the relative error estimate exceeds tol.
double delta_quadrature(double t, const OscillatorSpec& osc,
                        const BathSpec& bath, double tol = 1e-9);
double gamma_quadrature(double t, const OscillatorSpec& osc,
                        const BathSpec& bath, double tol = 1e-9);

// Same integrals for an arbitrary spectral density. feature_scale is the
// width of the narrowest structure in J (the cutoff for Ohmic baths); 0
// means omega0.
double delta_quadrature(double t, const OscillatorSpec& osc,
                        const SpectralDensity& J, double g, double kT,
                        double tol = 1e-9, double feature_scale = 0.0);
double gamma_quadrature(double t, const OscillatorSpec& osc,
                        const SpectralDensity& J, double g, double tol = 1e-9,
                        double feature_scale = 0.0);

enum class IntegrationMethod { Analytic, Quadrature };

/// N(t) and Gamma(t) from the closed-form antiderivatives.
IntegratedCoefficients integrated_closed(double t, const OscillatorSpec& osc,
                                         const BathSpec& bath);

/// Coefficients and their integrals on an ascending grid starting at 0.
CoefficientTrajectory integrate_coefficients(
    std::span<const double> t_grid, const OscillatorSpec& osc,
    const BathSpec& bath,
    IntegrationMethod method = IntegrationMethod::Analytic);

/// Long-time limits. The occupation is the one implied by the same high-T
/// replacement used in the closed forms, 2N(w0) + 1 = 2 k_B T / w0, so that
/// delta + gamma -> gamma1 and delta - gamma -> gamma_minus1 exactly.
MarkovianLimits markovian_limits(const OscillatorSpec& osc,
                                 const BathSpec& bath);

enum class SqueezedMapping {
  NonSecular,  // M from delta e^{2i w0 t}
  Repaired,    // M from (delta - gamma) e^{2i w0 t}
};

/// Identifies the coefficients at time t with a squeezed thermal bath:
/// rate (N+1) = delta + gamma, rate N = delta - gamma, rate M = -X e^{2i w0 t}.
///
/// Throws MappingError when gamma vanishes or delta <= gamma.
SqueezedBathParams squeezed_map(const CoefficientSample& sample, double t,
                                const OscillatorSpec& osc,
                                SqueezedMapping mapping);

/// N(N+1) - |M|^2; non-negative iff the squeezed-bath Lindblad form is
/// positive.
double positivity_margin(const SqueezedBathParams& p);

/// CSV with header (omega0_t, delta, gamma, bigN, bigGamma) at 17 digits.
void write_trajectory_csv(std::ostream& out, const CoefficientTrajectory& tr,
                          const OscillatorSpec& osc);

}  // namespace qbm
