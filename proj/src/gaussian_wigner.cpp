#include "qbm/gaussian_wigner.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "qbm/errors.hpp"

namespace qbm {

using std::numbers::pi;

std::string_view to_string(Regime regime) {
  return regime == Regime::Resonant ? "resonant" : "offresonant";
}

Regime parse_regime(std::string_view name) {
  if (name == "res" || name == "resonant") return Regime::Resonant;
  if (name == "offres" || name == "offresonant") return Regime::OffResonant;
  throw std::invalid_argument("unknown regime '" + std::string(name) + "'");
}

Regime regime_for_ratio(double r) {
  return r >= 1.0 ? Regime::Resonant : Regime::OffResonant;
}

bool regime_valid(Regime regime, double r) {
  return regime == Regime::Resonant ? r >= 5.0 : r <= 0.2;
}

CatParams CatParams::make(double alpha) {
  if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be >= 0");
  return {alpha, 1.0 / (2.0 * (1.0 + std::exp(-2.0 * alpha * alpha)))};
}

GaussianCatWigner::GaussianCatWigner(const CatParams& cat,
                                     const IntegratedCoefficients& c,
                                     Regime regime)
    : cat_(cat), coeffs_(c), regime_(regime) {
  if (!(c.bigN >= 0.0) || !(c.bigGamma >= 0.0)) {
    throw std::invalid_argument("N(t) and Gamma(t) must be non-negative");
  }
}

double GaussianCatWigner::center() const {
  return std::exp(-0.5 * coeffs_.bigGamma) * cat_.alpha;
}

double GaussianCatWigner::denominator_r() const {
  return regime_ == Regime::Resonant ? 0.5 : coeffs_.bigN + 0.5;
}

double GaussianCatWigner::denominator_i() const {
  return regime_ == Regime::Resonant ? 2.0 * coeffs_.bigN + 0.5
                                     : coeffs_.bigN + 0.5;
}

double GaussianCatWigner::lobe_amplitude() const {
  const double n = coeffs_.bigN;
  return regime_ == Regime::Resonant ? cat_.norm / (pi * std::sqrt(n + 0.25))
                                     : cat_.norm / (pi * (n + 0.5));
}

double GaussianCatWigner::interference_amplitude() const {
  const double a2 = cat_.alpha * cat_.alpha;
  const double spread = regime_ == Regime::Resonant ? 4.0 * coeffs_.bigN + 1.0
                                                    : 2.0 * coeffs_.bigN + 1.0;
  return 2.0 * lobe_amplitude() *
         std::exp(-2.0 * a2 * (1.0 - std::exp(-coeffs_.bigGamma) / spread));
}

double GaussianCatWigner::fringe_wavevector() const {
  return 2.0 * center() / denominator_i();
}

double GaussianCatWigner::lobe(double br, double bi, double sign) const {
  const double dr = br - sign * center();
  return lobe_amplitude() *
         std::exp(-bi * bi / denominator_i() - dr * dr / denominator_r());
}

double GaussianCatWigner::plus(double br, double bi) const {
  return lobe(br, bi, 1.0);
}

double GaussianCatWigner::minus(double br, double bi) const {
  return lobe(br, bi, -1.0);
}

double GaussianCatWigner::interference(double br, double bi) const {
  return interference_amplitude() *
         std::exp(-bi * bi / denominator_i() - br * br / denominator_r()) *
         std::cos(fringe_wavevector() * bi);
}

WignerGrid wigner_cat_analytic(const CatParams& cat,
                               const IntegratedCoefficients& coeffs,
                               Regime regime, const GridSpec& grid) {
  grid.validate();
  const GaussianCatWigner w(cat, coeffs, regime);
  const double sr = 5.0 * std::sqrt(w.variance_r());
  const double si = 5.0 * std::sqrt(w.variance_i());
  const double c = w.center();
  if (grid.r_min > -c - sr || grid.r_max < c + sr || grid.i_min > -si ||
      grid.i_max < si) {
    throw GridError("grid does not cover 5 sigma of every Wigner term: need "
                    "beta_r in [" + std::to_string(-c - sr) + ", " +
                    std::to_string(c + sr) + "] and beta_i in [" +
                    std::to_string(-si) + ", " + std::to_string(si) + "]");
  }

  WignerGrid out;
  out.spec = grid;
  out.values.resize(grid.ni, grid.nr);
  for (int row = 0; row < grid.ni; ++row) {
    const double bi = grid.beta_i(row);
    for (int col = 0; col < grid.nr; ++col) {
      out.values(row, col) = w(grid.beta_r(col), bi);
    }
  }
  out.meta.source = "analytic/" + std::string(to_string(regime));
  out.meta.t = coeffs.t;
  out.meta.alpha = cat.alpha;
  out.meta.bigN = coeffs.bigN;
  out.meta.bigGamma = coeffs.bigGamma;
  return out;
}

GridSpec analytic_grid(const GaussianCatWigner& w, int samples_per_fringe) {
  const double sr = std::sqrt(w.variance_r());
  const double si = std::sqrt(w.variance_i());
  double step = std::min(sr, si) / 4.0;
  if (w.fringe_wavevector() > 0.0) {
    step = std::min(step, 2.0 * pi / w.fringe_wavevector() / samples_per_fringe);
  }
  return GridSpec::centered(w.center() + 5.5 * sr, 5.5 * si, step);
}

double fringe_visibility_closed(const CatParams& cat,
                                const IntegratedCoefficients& coeffs,
                                Regime regime) {
  const double spread = regime == Regime::Resonant ? 4.0 * coeffs.bigN + 1.0
                                                   : 2.0 * coeffs.bigN + 1.0;
  return std::exp(-2.0 * cat.alpha * cat.alpha *
                  (1.0 - std::exp(-coeffs.bigGamma) / spread));
}

double a_int(const CatParams& cat, const IntegratedCoefficients& coeffs,
             std::vector<std::string>* warnings) {
  if (warnings && coeffs.bigGamma >= 0.1) {
    warnings->push_back("Gamma(t) = " + std::to_string(coeffs.bigGamma) +
                        " is not small; exp(-Gamma) = 1 is a poor approximation");
  }
  const double four_n = 4.0 * coeffs.bigN;
  return 2.0 * cat.alpha * cat.alpha * four_n / (four_n + 1.0);
}

RatioCheckReport visibility_ratio_check(
    const CatParams& cat, std::span<const IntegratedCoefficients> coeffs) {
  RatioCheckReport report;
  for (const auto& c : coeffs) {
    const double f_res = fringe_visibility_closed(cat, c, Regime::Resonant);
    IntegratedCoefficients doubled = c;
    doubled.bigN = 2.0 * c.bigN;
    const double f_off =
        fringe_visibility_closed(cat, doubled, Regime::OffResonant);
    report.max_deviation = std::max(report.max_deviation, std::abs(f_res - f_off));
    ++report.samples;
  }
  return report;
}

}  // namespace qbm
