#include "qbm/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <ostream>
#include <stdexcept>
#include <string>

#include <json.hpp>

#include "qbm/errors.hpp"
#include "qbm/io.hpp"

namespace qbm {

using std::numbers::pi;

double reliable_radius(int dim) { return std::sqrt(double(dim)); }

namespace {

double wigner_point(const ComplexMatrix& rho, double br, double bi) {
  const int d = int(rho.rows());
  const double mag2 = br * br + bi * bi;
  const double x = 4.0 * mag2;
  const double log2mag = mag2 > 0.0 ? std::log(2.0 * std::sqrt(mag2)) : 0.0;
  const double theta = std::atan2(bi, br);

  double sum = 0.0;
  for (int k = 0; k < d; ++k) {
    if (mag2 == 0.0 && k > 0) break;
    // f_n = sqrt(n!/(n+k)!) x^{k/2} e^{-x/2} L_n^{(k)}(x)
    double f = mag2 > 0.0
                   ? std::exp(k * log2mag - 0.5 * std::lgamma(k + 1.0) - 0.5 * x)
                   : 1.0;
    double f_prev = 0.0;
    std::complex<double> acc = 0.0;
    for (int n = 0; n + k < d; ++n) {
      const double sign = (n % 2 == 0) ? 1.0 : -1.0;
      acc += rho(n + k, n) * (sign * f);
      const double next = ((2.0 * n + 1.0 + k - x) * f -
                           std::sqrt(double(n) * (n + k)) * f_prev) /
                          std::sqrt((n + 1.0) * (n + 1.0 + k));
      f_prev = f;
      f = next;
    }
    const double term = (acc * std::polar(1.0, -k * theta)).real();
    sum += k == 0 ? term : 2.0 * term;
  }
  return 2.0 / pi * sum;
}

}  // namespace

double wigner_at(const DensityMatrix& rho, double beta_r, double beta_i) {
  return wigner_point(rho.matrix(), beta_r, beta_i);
}

WignerGrid wigner_from_density(const DensityMatrix& rho, const GridSpec& grid) {
  grid.validate();
  WignerGrid out;
  out.spec = grid;
  out.values.resize(grid.ni, grid.nr);
  for (int row = 0; row < grid.ni; ++row) {
    const double bi = grid.beta_i(row);
    for (int col = 0; col < grid.nr; ++col) {
      out.values(row, col) = wigner_point(rho.matrix(), grid.beta_r(col), bi);
    }
  }
  out.meta.source = "fock";
  out.meta.dim = rho.dim();
  const double reach = std::hypot(std::max(std::abs(grid.r_min), std::abs(grid.r_max)),
                                  std::max(std::abs(grid.i_min), std::abs(grid.i_max)));
  if (reach > reliable_radius(rho.dim())) {
    out.meta.warnings.push_back(
        "grid reaches |beta| = " + std::to_string(reach) +
        " beyond the truncation-reliable radius " +
        std::to_string(reliable_radius(rho.dim())));
  }
  return out;
}

namespace {

struct Gauss1D {
  double offset;    // vertex relative to the middle sample
  double variance;
  double log_amp;   // log of the value at the vertex
};

Gauss1D fit_three(double ym, double y0, double yp, double h) {
  if (!(ym > 0.0 && y0 > 0.0 && yp > 0.0)) {
    throw GridError("lobe samples are not positive; cannot fit a Gaussian");
  }
  const double lm = std::log(ym), l0 = std::log(y0), lp = std::log(yp);
  const double a = (lp - 2.0 * l0 + lm) / (2.0 * h * h);
  const double b = (lp - lm) / (2.0 * h);
  if (!(a < 0.0)) throw GridError("lobe is not a local maximum");
  return {-b / (2.0 * a), -1.0 / (2.0 * a), l0 - b * b / (4.0 * a)};
}

struct Lobe {
  double amp = 0.0, xr = 0.0, xi = 0.0, vr = 1.0, vi = 1.0;
  double operator()(double br, double bi) const {
    if (amp == 0.0) return 0.0;
    const double dr = br - xr, di = bi - xi;
    return amp * std::exp(-dr * dr / (2.0 * vr) - di * di / (2.0 * vi));
  }
};

struct Interference {
  double amp = 0.0, xmid = 0.0, vr = 1.0, vi = 1.0, k = 0.0;
  double envelope(double br, double bi) const {
    const double dr = br - xmid;
    return std::exp(-dr * dr / (2.0 * vr) - bi * bi / (2.0 * vi)) *
           std::cos(k * bi);
  }
  double operator()(double br, double bi) const {
    return amp == 0.0 ? 0.0 : amp * envelope(br, bi);
  }
};

int nearest(double v, double lo, double step, int n) {
  return std::clamp(int(std::lround((v - lo) / step)), 0, n - 1);
}

// Interior grid maximum within a window around (target, 0).
std::pair<int, int> locate_peak(const WignerGrid& w, double target,
                                double half_width) {
  const auto& s = w.spec;
  const int c_lo = nearest(target - half_width, s.r_min, s.dr(), s.nr);
  const int c_hi = nearest(target + half_width, s.r_min, s.dr(), s.nr);
  const int r_lo = nearest(-half_width, s.i_min, s.di(), s.ni);
  const int r_hi = nearest(half_width, s.i_min, s.di(), s.ni);
  int br = -1, bc = -1;
  double best = -std::numeric_limits<double>::infinity();
  for (int r = r_lo; r <= r_hi; ++r) {
    for (int c = c_lo; c <= c_hi; ++c) {
      if (w.values(r, c) > best) {
        best = w.values(r, c);
        br = r;
        bc = c;
      }
    }
  }
  if (br <= r_lo || br >= r_hi || bc <= c_lo || bc >= c_hi || br == 0 ||
      bc == 0 || br == s.ni - 1 || bc == s.nr - 1) {
    throw GridError("no Wigner lobe found near beta_r = " +
                    std::to_string(target));
  }
  return {br, bc};
}

}  // namespace

VisibilityFit fit_visibility(const WignerGrid& w, double center_hint) {
  const auto& s = w.spec;
  s.validate();
  if (!(center_hint > 0.0)) {
    throw GridError("visibility needs two separated lobes (center hint > 0)");
  }
  const double window = std::max({0.5 * center_hint, 3.0 * s.dr(), 3.0 * s.di()});
  const auto peak_p = locate_peak(w, center_hint, window);
  const auto peak_m = locate_peak(w, -center_hint, window);

  Lobe plus, minus;
  Interference inter;
  auto residual = [&](int r, int c, const Lobe& other) {
    const double br = s.beta_r(c), bi = s.beta_i(r);
    return w.values(r, c) - other(br, bi) - inter(br, bi);
  };
  auto fit_lobe = [&](std::pair<int, int> pk, const Lobe& other) {
    const auto [r, c] = pk;
    const Gauss1D gi = fit_three(residual(r - 1, c, other), residual(r, c, other),
                                 residual(r + 1, c, other), s.di());
    const Gauss1D gr = fit_three(residual(r, c - 1, other), residual(r, c, other),
                                 residual(r, c + 1, other), s.dr());
    Lobe out;
    out.xi = s.beta_i(r) + gi.offset;
    out.vi = gi.variance;
    out.xr = s.beta_r(c) + gr.offset;
    out.vr = gr.variance;
    const double dy = s.beta_i(r) - out.xi;
    out.amp = std::exp(gr.log_amp + dy * dy / (2.0 * out.vi));
    return out;
  };

  VisibilityFit fit;
  double previous = std::numeric_limits<double>::quiet_NaN();
  for (int it = 1; it <= 200; ++it) {
    plus = fit_lobe(peak_p, minus);
    minus = fit_lobe(peak_m, plus);

    Interference next;
    next.xmid = 0.5 * (plus.xr + minus.xr);
    next.vr = 0.5 * (plus.vr + minus.vr);
    next.vi = 0.5 * (plus.vi + minus.vi);
    next.k = 0.5 * (plus.xr - minus.xr) / next.vi;
    if (next.k > 0.0 && s.di() > 2.0 * pi / next.k / 8.0) {
      throw GridError("fringe under-resolved: beta_i spacing " +
                      std::to_string(s.di()) + " exceeds period/8 = " +
                      std::to_string(2.0 * pi / next.k / 8.0));
    }
    const int ro = nearest(0.0, s.i_min, s.di(), s.ni);
    const int co = nearest(next.xmid, s.r_min, s.dr(), s.nr);
    const double br = s.beta_r(co), bi = s.beta_i(ro);
    next.amp = (w.values(ro, co) - plus(br, bi) - minus(br, bi)) /
               next.envelope(br, bi);
    inter = next;

    fit.visibility = 0.5 * inter.amp / std::sqrt(plus.amp * minus.amp);
    fit.iterations = it;
    if (std::abs(fit.visibility - previous) <= 1e-15 * std::abs(fit.visibility)) {
      break;
    }
    previous = fit.visibility;
  }
  fit.amplitude_plus = plus.amp;
  fit.amplitude_minus = minus.amp;
  fit.amplitude_interference = inter.amp;
  fit.center_plus = plus.xr;
  fit.center_minus = minus.xr;
  fit.variance_r = inter.vr;
  fit.variance_i = inter.vi;
  return fit;
}

double fringe_visibility_from_grid(const WignerGrid& w, double center_hint) {
  return fit_visibility(w, center_hint).visibility;
}

bool visibility_agrees(double f_analytic, double f_oracle,
                       const VisibilityTolerance& tol) {
  const double diff = std::abs(f_oracle - f_analytic);
  if (f_analytic > tol.floor) return diff <= tol.relative * f_analytic;
  return diff <= tol.absolute;
}

namespace {

void check_times(const std::vector<double>& times) {
  if (times.empty()) throw std::invalid_argument("comparison needs at least one time");
  if (!std::is_sorted(times.begin(), times.end()) || times.front() < 0.0) {
    throw std::invalid_argument("comparison times must be ascending and >= 0");
  }
}

VisibilityReport report_header(const CompareScenario& s) {
  VisibilityReport r;
  r.regime = s.regime;
  r.kind = s.kind;
  r.omega0 = s.osc.omega0();
  r.ratio = s.bath.ratio(s.osc);
  r.g = s.bath.g();
  r.kT = s.bath.kT();
  r.alpha = s.alpha;
  r.outside_validity = !regime_valid(s.regime, r.ratio);
  r.times = s.times;
  return r;
}

}  // namespace

VisibilityReport analytic_visibility(const CompareScenario& s) {
  check_times(s.times);
  VisibilityReport r = report_header(s);
  const CatParams cat = CatParams::make(s.alpha);
  for (double t : s.times) {
    r.f_analytic.push_back(
        fringe_visibility_closed(cat, integrated_closed(t, s.osc, s.bath), s.regime));
  }
  return r;
}

std::vector<double> oracle_visibility(const EvolutionResult& run,
                                      const CompareScenario& s) {
  const CatParams cat = CatParams::make(s.alpha);
  std::vector<double> out;
  out.reserve(run.times.size());
  for (std::size_t i = 0; i < run.times.size(); ++i) {
    const GaussianCatWigner shape(cat, integrated_closed(run.times[i], s.osc, s.bath),
                                  s.regime);
    const GridSpec grid = analytic_grid(shape, s.samples_per_fringe);
    out.push_back(fringe_visibility_from_grid(
        wigner_from_density(run.states[i], grid), shape.center()));
  }
  return out;
}

VisibilityReport compare_scenario(const CompareScenario& s) {
  if (!(s.alpha > 0.0)) {
    throw std::invalid_argument("comparison needs a cat with alpha > 0");
  }
  VisibilityReport r = analytic_visibility(s);

  double n_max = 0.0;
  for (double t : s.times) {
    n_max = std::max(n_max, integrated_closed(t, s.osc, s.bath).bigN);
  }
  r.dim = s.dim > 0 ? s.dim : auto_dimension(s.alpha, n_max);

  EvolveOptions options;
  options.tol = s.tol;
  options.output_times = s.times;
  const EvolutionResult run = evolve(s.kind, cat_state_density(s.alpha, r.dim),
                                     s.times.back(), s.osc, s.bath, options);
  r.f_oracle = oracle_visibility(run, s);

  for (std::size_t i = 0; i < r.times.size(); ++i) {
    const double fa = r.f_analytic[i], fo = r.f_oracle[i];
    const double dev = std::abs(fo - fa) / fa;
    r.rel_dev.push_back(dev);
    r.max_rel_dev = std::max(r.max_rel_dev, dev);
    r.within_tolerance = r.within_tolerance && visibility_agrees(fa, fo, s.tolerance);
  }
  return r;
}

void write_visibility_csv(std::ostream& out, const VisibilityReport& r) {
  out << "omega0_t,F_analytic,F_oracle,rel_dev\n";
  const bool oracle = r.f_oracle.size() == r.times.size();
  for (std::size_t i = 0; i < r.times.size(); ++i) {
    out << format_double(r.omega0 * r.times[i]) << ','
        << format_double(r.f_analytic[i]) << ',';
    if (oracle) out << format_double(r.f_oracle[i]) << ',' << format_double(r.rel_dev[i]);
    else out << ',';
    out << '\n';
  }
}

void write_visibility_json(std::ostream& out, const VisibilityReport& r) {
  nlohmann::ordered_json j = {
      {"scenario_hash", r.scenario_hash},
      {"regime", std::string(to_string(r.regime))},
      {"kind", std::string(to_string(r.kind))},
      {"parameters",
       {{"omega0", r.omega0},
        {"r", r.ratio},
        {"g", r.g},
        {"kT_over_omega0", r.kT},
        {"alpha", r.alpha},
        {"dim", r.dim}}},
      {"samples", r.times.size()},
      {"oracle", r.f_oracle.size() == r.times.size()},
      {"max_rel_dev", r.max_rel_dev},
      {"within_tolerance", r.within_tolerance},
      {"outside_validity", r.outside_validity},
  };
  out << j.dump(2) << '\n';
}

}  // namespace qbm
