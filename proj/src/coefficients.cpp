#include "qbm/coefficients.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <memory>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/quadrature/ooura_fourier_integrals.hpp>

#include "qbm/errors.hpp"
#include "qbm/io.hpp"

namespace qbm {

namespace {

using cplx = std::complex<double>;

void require_nonnegative_time(double t) {
  if (!(t >= 0.0)) {
    throw std::invalid_argument("coefficient time must be >= 0, got " +
                                std::to_string(t));
  }
}

double ohmic_prefactor(double r) { return r * r / (1.0 + r * r); }

// (e^x - 1 - x)/x^2, accurate near x = 0.
cplx phi2(cplx x) {
  if (std::abs(x) < 1.0) {
    cplx term = 0.5, sum = 0.5;
    for (int k = 1; k < 30; ++k) {
      term *= x / double(k + 2);
      sum += term;
    }
    return sum;
  }
  return (std::exp(x) - 1.0 - x) / (x * x);
}

// Ooura integrators precompute their node tables, so keep one per tolerance.
template <class Integrator>
Integrator& cached(double tol) {
  thread_local std::map<double, std::unique_ptr<Integrator>> cache;
  auto& slot = cache[tol];
  if (!slot) slot = std::make_unique<Integrator>(tol, 14);
  return *slot;
}

// int_{-inf}^{inf} h(w) sin((w - w0) t)/(w - w0) dw, folded onto u = |w - w0|.
// Ooura alone can report false convergence when h has a feature much
// narrower than w0 and t is large, so once the band holding the features
// (u up to w0 + 40 scale) spans more than half an oscillation it goes to
// adaptive Gauss-Kronrod and only the smooth tail to the Fourier
// integrators. Below that a single sine transform is reliable and avoids
// the head/tail cancellation at small t.
double folded_sine_transform(const std::function<double(double)>& h, double w0,
                             double scale, double t, double tol) {
  if (tol < 4.0 * std::numeric_limits<double>::epsilon()) {
    throw std::invalid_argument("quadrature tolerance below double precision");
  }
  using boost::math::quadrature::gauss_kronrod;
  using boost::math::quadrature::ooura_fourier_cos;
  using boost::math::quadrature::ooura_fourier_sin;
  auto folded = [&](double u) { return (h(w0 + u) + h(w0 - u)) / u; };
  auto fail = [&](double rel_err) {
    return QuadratureError("frequency quadrature did not converge at t = " +
                               std::to_string(t) + " (estimate " +
                               std::to_string(rel_err) + ")",
                           rel_err);
  };

  const double split = w0 + 40.0 * scale;
  if (split * t <= std::numbers::pi) {
    auto [value, rel_err] = cached<ooura_fourier_sin<double>>(tol).integrate(folded, t);
    if (!std::isfinite(value) || rel_err > tol) throw fail(rel_err);
    return value;
  }

  // sin(ut)/u is regular at 0; evaluate it as t there.
  auto near = [&](double u) {
    const double hu = h(w0 + u) + h(w0 - u);
    return u == 0.0 ? hu * t : hu * std::sin(u * t) / u;
  };
  // u = w0 is where h(w0 - u) crosses w = 0 and may have a kink or a jump,
  // so it is always a panel edge. Panels span about one oscillation.
  double head = 0.0, head_err = 0.0;
  bool head_finite = true;
  for (auto [lo, hi] : {std::pair{0.0, w0}, std::pair{w0, split}}) {
    const int panels = std::max(1, int(std::ceil((hi - lo) * t / std::numbers::pi)));
    for (int k = 0; k < panels; ++k) {
      const double a = lo + (hi - lo) * k / panels;
      const double b = lo + (hi - lo) * (k + 1) / panels;
      double err = 0.0, l1 = 0.0;
      head += gauss_kronrod<double, 31>::integrate(near, a, b, 15, tol * 0.1, &err, &l1);
      head_err += err;
      head_finite = head_finite && std::isfinite(l1);
    }
  }

  auto shifted = [&](double v) { return folded(split + v); };
  auto [ts, ts_err] = cached<ooura_fourier_sin<double>>(tol).integrate(shifted, t);
  auto [tc, tc_err] = cached<ooura_fourier_cos<double>>(tol).integrate(shifted, t);
  const double value = head + std::cos(split * t) * ts + std::sin(split * t) * tc;

  const double ref = std::max(std::abs(value), 1e-300);
  const double rel_err =
      (head_err + ts_err * std::abs(ts) + tc_err * std::abs(tc)) / ref;
  if (!std::isfinite(value) || !head_finite || rel_err > tol) throw fail(rel_err);
  return value;
}

}  // namespace

OscillatorSpec::OscillatorSpec(double omega0) : omega0_(omega0) {
  if (!(omega0 > 0.0)) {
    throw std::invalid_argument("omega0 must be positive");
  }
}

BathSpec::BathSpec(double omega_c, double g, double kT)
    : omega_c_(omega_c), g_(g), kT_(kT) {
  if (!(omega_c > 0.0)) throw std::invalid_argument("omega_c must be positive");
  // g = 0 is allowed: it is the free-evolution reference case.
  if (!(g >= 0.0)) throw std::invalid_argument("g must be non-negative");
  if (!(kT > 0.0)) throw std::invalid_argument("kT must be positive");
}

BathSpec BathSpec::from_ratio(double r, double g, double kT,
                              const OscillatorSpec& osc) {
  if (!(r > 0.0)) throw std::invalid_argument("r must be positive");
  return BathSpec(r * osc.omega0(), g, kT);
}

SpectralDensity ohmic_drude(double omega_c) {
  return [omega_c](double w) {
    return 2.0 * w / std::numbers::pi * omega_c * omega_c /
           (omega_c * omega_c + w * w);
  };
}

double delta_closed(double t, const OscillatorSpec& osc, const BathSpec& bath) {
  require_nonnegative_time(t);
  const double w0 = osc.omega0();
  const double r = bath.ratio(osc);
  const double g2 = bath.g() * bath.g();
  const double decay = std::exp(-bath.omega_c() * t);
  return 2.0 * g2 * bath.kT() * w0 * ohmic_prefactor(r) *
         (1.0 - decay * (std::cos(w0 * t) - std::sin(w0 * t) / r));
}

double gamma_closed(double t, const OscillatorSpec& osc, const BathSpec& bath) {
  require_nonnegative_time(t);
  const double w0 = osc.omega0();
  const double r = bath.ratio(osc);
  const double g2 = bath.g() * bath.g();
  const double decay = std::exp(-bath.omega_c() * t);
  return g2 * w0 * ohmic_prefactor(r) *
         (1.0 - decay * std::cos(w0 * t) - r * decay * std::sin(w0 * t));
}

CoefficientSample sample_closed(double t, const OscillatorSpec& osc,
                                const BathSpec& bath) {
  return {t, delta_closed(t, osc, bath), gamma_closed(t, osc, bath)};
}

double delta_quadrature(double t, const OscillatorSpec& osc,
                        const SpectralDensity& J, double g, double kT,
                        double tol, double feature_scale) {
  require_nonnegative_time(t);
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (t == 0.0) return 0.0;
  const double thermal = 2.0 * kT * osc.omega0();  // 2 k_B T
  // J(w) (2N(w)+1) -> J(w) 2k_BT/w, extended evenly to w < 0.
  auto kernel = [&](double w) {
    const double aw = std::max(std::abs(w), 1e-300);
    return J(aw) * thermal / aw;
  };
  const double scale = feature_scale > 0.0 ? feature_scale : osc.omega0();
  return 0.5 * g * g * folded_sine_transform(kernel, osc.omega0(), scale, t, tol);
}

double gamma_quadrature(double t, const OscillatorSpec& osc,
                        const SpectralDensity& J, double g, double tol,
                        double feature_scale) {
  require_nonnegative_time(t);
  if (!(tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (t == 0.0) return 0.0;
  // J extended as an odd function turns the sin*sin kernel into one term.
  auto odd = [&](double w) { return w >= 0.0 ? J(w) : -J(-w); };
  const double scale = feature_scale > 0.0 ? feature_scale : osc.omega0();
  return 0.5 * g * g * folded_sine_transform(odd, osc.omega0(), scale, t, tol);
}

double delta_quadrature(double t, const OscillatorSpec& osc,
                        const BathSpec& bath, double tol) {
  return delta_quadrature(t, osc, ohmic_drude(bath.omega_c()), bath.g(),
                          bath.kT(), tol, bath.omega_c());
}

double gamma_quadrature(double t, const OscillatorSpec& osc,
                        const BathSpec& bath, double tol) {
  return gamma_quadrature(t, osc, ohmic_drude(bath.omega_c()), bath.g(), tol,
                          bath.omega_c());
}

IntegratedCoefficients integrated_closed(double t, const OscillatorSpec& osc,
                                         const BathSpec& bath) {
  require_nonnegative_time(t);
  const double w0 = osc.omega0();
  const double wc = bath.omega_c();
  const double r = bath.ratio(osc);
  const double g2 = bath.g() * bath.g();
  const double d0 = 2.0 * g2 * bath.kT() * w0 * ohmic_prefactor(r);
  const double g0 = g2 * w0 * ohmic_prefactor(r);

  // With z = -wc + i w0 the antiderivatives collapse onto
  // t^2 phi2(z t); the cancelling leading orders are removed analytically.
  const cplx z(-wc, w0);
  const cplx p = phi2(z * t);
  IntegratedCoefficients out;
  out.t = t;
  out.bigN = d0 * (wc + w0 / r) * t * t * p.real();
  out.bigGamma = 2.0 * g0 * (w0 + r * wc) * t * t * p.imag();
  return out;
}

CoefficientTrajectory integrate_coefficients(std::span<const double> t_grid,
                                             const OscillatorSpec& osc,
                                             const BathSpec& bath,
                                             IntegrationMethod method) {
  if (t_grid.empty()) throw std::invalid_argument("time grid is empty");
  if (t_grid.front() != 0.0) {
    throw std::invalid_argument("time grid must start at 0");
  }
  if (!std::is_sorted(t_grid.begin(), t_grid.end())) {
    throw std::invalid_argument("time grid must be sorted ascending");
  }

  CoefficientTrajectory out;
  out.samples.reserve(t_grid.size());
  out.integrated.reserve(t_grid.size());

  double accN = 0.0, accG = 0.0, prev = 0.0;
  for (double t : t_grid) {
    out.samples.push_back(sample_closed(t, osc, bath));
    if (method == IntegrationMethod::Analytic) {
      out.integrated.push_back(integrated_closed(t, osc, bath));
      continue;
    }
    using boost::math::quadrature::gauss_kronrod;
    if (t > prev) {
      auto d = [&](double s) { return delta_closed(s, osc, bath); };
      auto g = [&](double s) { return gamma_closed(s, osc, bath); };
      accN += gauss_kronrod<double, 31>::integrate(d, prev, t, 15, 1e-13);
      accG += 2.0 * gauss_kronrod<double, 31>::integrate(g, prev, t, 15, 1e-13);
    }
    out.integrated.push_back({t, accN, accG});
    prev = t;
  }
  return out;
}

MarkovianLimits markovian_limits(const OscillatorSpec& osc,
                                 const BathSpec& bath) {
  const double r = bath.ratio(osc);
  MarkovianLimits m;
  m.decay_rate = 2.0 * bath.g() * bath.g() * r * r / (r * r + 1.0) *
                 osc.omega0();
  m.occupation = bath.kT() - 0.5;
  m.gamma1 = m.decay_rate * (m.occupation + 1.0);
  m.gamma_minus1 = m.decay_rate * m.occupation;
  return m;
}

SqueezedBathParams squeezed_map(const CoefficientSample& sample, double t,
                                const OscillatorSpec& osc,
                                SqueezedMapping mapping) {
  const double delta = sample.delta;
  const double gamma = sample.gamma;
  if (gamma == 0.0) {
    throw MappingError("mapping singular at t = " + std::to_string(t) +
                       " where gamma vanishes");
  }
  if (gamma < 0.0) {
    throw MappingError("negative damping at t = " + std::to_string(t));
  }
  if (delta <= gamma) {
    throw MappingError("degenerate mapping at t = " + std::to_string(t) +
                       ": delta <= gamma gives a negative occupation");
  }
  const double squeeze =
      mapping == SqueezedMapping::Repaired ? delta - gamma : delta;
  SqueezedBathParams p;
  p.rate = 2.0 * gamma;
  p.n_eff = (delta - gamma) / p.rate;
  p.m_eff = -squeeze * std::polar(1.0, 2.0 * osc.omega0() * t) / p.rate;
  return p;
}

double positivity_margin(const SqueezedBathParams& p) {
  return p.n_eff * (p.n_eff + 1.0) - std::norm(p.m_eff);
}

void write_trajectory_csv(std::ostream& out, const CoefficientTrajectory& tr,
                          const OscillatorSpec& osc) {
  out << "omega0_t,delta,gamma,bigN,bigGamma\n";
  for (std::size_t i = 0; i < tr.samples.size(); ++i) {
    const auto& s = tr.samples[i];
    const auto& c = tr.integrated[i];
    out << format_double(osc.omega0() * s.t) << ',' << format_double(s.delta)
        << ',' << format_double(s.gamma) << ',' << format_double(c.bigN) << ','
        << format_double(c.bigGamma) << '\n';
  }
}

}  // namespace qbm
