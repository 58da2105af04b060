#pragma once

// Closed-form Wigner dynamics of the even cat state as a sum of two
// displaced Gaussians and an interference term. The exponents are kept in
// the printed "x^2 / denominator" form, so a Gaussian with denominator s has
// variance s/2.

#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "qbm/coefficients.hpp"
#include "qbm/wigner_grid.hpp"

namespace qbm {

enum class Regime {
  OffResonant,  // r << 1, secular equation
  Resonant,     // r >> 1, squeezed-bath form with e^{2i w0 t} ~ 1
};

std::string_view to_string(Regime regime);
Regime parse_regime(std::string_view name);

/// Resonant for r >= 1, off-resonant below.
Regime regime_for_ratio(double r);
/// The closed forms are only trusted for r <= 0.2 (off-resonant) or
/// r >= 5 (resonant).
bool regime_valid(Regime regime, double r);

struct CatParams {
  double alpha = 0.0;
  double norm = 0.25;  // N with 1/N = 2(1 + exp(-2 alpha^2))

  static CatParams make(double alpha);
};

class GaussianCatWigner {
 public:
  GaussianCatWigner(const CatParams& cat, const IntegratedCoefficients& c,
                    Regime regime);

  Regime regime() const { return regime_; }
  double t() const { return coeffs_.t; }
  double alpha() const { return cat_.alpha; }
  double bigN() const { return coeffs_.bigN; }
  double bigGamma() const { return coeffs_.bigGamma; }

  /// e^{-Gamma/2} alpha; the two lobes sit at (+-center, 0).
  double center() const;
  double denominator_r() const;
  double denominator_i() const;
  double variance_r() const { return 0.5 * denominator_r(); }
  double variance_i() const { return 0.5 * denominator_i(); }
  /// Peak value of each lobe.
  double lobe_amplitude() const;
  /// Value of the interference term at the origin.
  double interference_amplitude() const;
  double fringe_wavevector() const;

  double plus(double br, double bi) const;
  double minus(double br, double bi) const;
  double interference(double br, double bi) const;
  double operator()(double br, double bi) const {
    return plus(br, bi) + minus(br, bi) + interference(br, bi);
  }

 private:
  double lobe(double br, double bi, double sign) const;

  CatParams cat_;
  IntegratedCoefficients coeffs_;
  Regime regime_;
};

/// Samples the closed form. Throws GridError unless the grid covers every
/// term to 5 standard deviations.
WignerGrid wigner_cat_analytic(const CatParams& cat,
                               const IntegratedCoefficients& coeffs,
                               Regime regime, const GridSpec& grid);

/// Smallest centered grid that passes the 5-sigma check and resolves the
/// fringes with at least samples_per_fringe points.
GridSpec analytic_grid(const GaussianCatWigner& w, int samples_per_fringe = 16);

/// exp[-2 alpha^2 (1 - e^{-Gamma}/(2N+1))] off resonance,
/// exp[-2 alpha^2 (1 - e^{-Gamma}/(4N+1))] on resonance.
double fringe_visibility_closed(const CatParams& cat,
                                const IntegratedCoefficients& coeffs,
                                Regime regime);

/// 2 alpha^2 4N/(4N+1), the resonant decoherence exponent with
/// e^{-Gamma} set to 1. Only meaningful far from thermalization: when
/// Gamma >= 0.1 a warning is appended to `warnings` if given.
double a_int(const CatParams& cat, const IntegratedCoefficients& coeffs,
             std::vector<std::string>* warnings = nullptr);

struct RatioCheckReport {
  double max_deviation = 0.0;
  std::size_t samples = 0;
};

/// Max |F_res(N) - F_off(2N)| over a trajectory.
RatioCheckReport visibility_ratio_check(
    const CatParams& cat, std::span<const IntegratedCoefficients> coeffs);

}  // namespace qbm
