#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "qbm/analysis.hpp"
#include "qbm/errors.hpp"
#include "support.hpp"

using namespace qbm;
using std::numbers::pi;
using qbm::testing::Rng;

namespace {

const OscillatorSpec unit_osc(1.0);

// Coherent state |beta> truncated and renormalized.
DensityMatrix coherent(std::complex<double> beta, int d) {
  Eigen::VectorXcd psi(d);
  psi(0) = std::exp(-0.5 * std::norm(beta));
  for (int n = 1; n < d; ++n) psi(n) = psi(n - 1) * beta / std::sqrt(double(n));
  psi /= psi.norm();
  return DensityMatrix(psi * psi.adjoint());
}

}  // namespace

TEST_CASE("Wigner transform of simple states") {
  CHECK(wigner_at(fock_state_density(0, 4), 0.0, 0.0) == doctest::Approx(2.0 / pi).epsilon(1e-14));
  CHECK(wigner_at(fock_state_density(1, 4), 0.0, 0.0) == doctest::Approx(-2.0 / pi).epsilon(1e-14));
  // Vacuum: (2/pi) exp(-2|beta|^2).
  Rng rng(53);
  for (int i = 0; i < 50; ++i) {
    const double br = rng.uniform(-2, 2), bi = rng.uniform(-2, 2);
    CHECK(wigner_at(fock_state_density(0, 3), br, bi) ==
          doctest::Approx(2.0 / pi * std::exp(-2.0 * (br * br + bi * bi))).epsilon(1e-12));
  }
  // |1>: (2/pi)(4|beta|^2 - 1) exp(-2|beta|^2).
  for (int i = 0; i < 50; ++i) {
    const double br = rng.uniform(-2, 2), bi = rng.uniform(-2, 2);
    const double b2 = br * br + bi * bi;
    CHECK(std::abs(wigner_at(fock_state_density(1, 4), br, bi) -
                   2.0 / pi * (4.0 * b2 - 1.0) * std::exp(-2.0 * b2)) < 1e-13);
  }
  // A coherent state is the vacuum displaced to beta.
  const std::complex<double> b0(1.3, -0.7);
  const auto rho = coherent(b0, 40);
  CHECK(wigner_at(rho, 1.3, -0.7) == doctest::Approx(2.0 / pi).epsilon(1e-12));
  CHECK(wigner_at(rho, 1.8, -0.7) ==
        doctest::Approx(2.0 / pi * std::exp(-0.5)).epsilon(1e-10));
}

TEST_CASE("property: Wigner grids integrate to the trace") {
  Rng rng(59);
  for (int trial = 0; trial < 8; ++trial) {
    const int d = rng.integer(2, 10);
    const DensityMatrix rho(qbm::testing::random_density(d, rng), 1.0);
    const auto w = wigner_from_density(rho, GridSpec::centered(6.0, 6.0, 0.08));
    CHECK(w.integral() == doctest::Approx(1.0).epsilon(1e-8));
    CHECK(w.meta.source == "fock");
    CHECK(w.meta.dim == d);
    // Values are bounded by 2/pi in magnitude.
    CHECK(w.values.cwiseAbs().maxCoeff() <= 2.0 / pi + 1e-12);
  }
}

TEST_CASE("property: Fock cat matches the closed-form cat") {
  for (double alpha : {0.0, 1.0, 2.0, 4.0}) {
    const int d = required_cat_dim(alpha, 1e-16);
    const auto rho = cat_state_density(alpha, d);
    const auto cat = CatParams::make(alpha);
    const IntegratedCoefficients zero{};
    const GaussianCatWigner shape(cat, zero, Regime::OffResonant);
    const GridSpec spec = analytic_grid(shape, 12);
    const auto fock = wigner_from_density(rho, spec);
    const auto closed = wigner_cat_analytic(cat, zero, Regime::OffResonant, spec);
    CAPTURE(alpha);
    CHECK((fock.values - closed.values).cwiseAbs().maxCoeff() < 1e-6);
  }
}

TEST_CASE("reliable radius warning") {
  const auto rho = fock_state_density(0, 4);
  CHECK(reliable_radius(4) == 2.0);
  CHECK(wigner_from_density(rho, GridSpec::centered(1.0, 1.0, 0.5)).meta.warnings.empty());
  CHECK(wigner_from_density(rho, GridSpec::centered(3.0, 1.0, 0.5)).meta.warnings.size() == 1);
}

TEST_CASE("property: grid extraction recovers the closed-form visibility") {
  Rng rng(61);
  for (Regime regime : {Regime::OffResonant, Regime::Resonant}) {
    for (int i = 0; i < 12; ++i) {
      const auto cat = CatParams::make(rng.uniform(1.5, 4.0));
      const IntegratedCoefficients c{1.0, rng.log_uniform(1e-3, 0.3), rng.uniform(0.0, 0.05)};
      const GaussianCatWigner w(cat, c, regime);
      const auto grid = wigner_cat_analytic(cat, c, regime, analytic_grid(w, 10));
      const auto fit = fit_visibility(grid, w.center());
      const double f = fringe_visibility_closed(cat, c, regime);
      CAPTURE(cat.alpha);
      CAPTURE(c.bigN);
      CHECK(std::abs(fit.visibility - f) <= 1e-6 * f);
      CHECK(fit.center_plus == doctest::Approx(w.center()).epsilon(1e-6));
      CHECK(fit.center_minus == doctest::Approx(-w.center()).epsilon(1e-6));
      CHECK(fit.variance_r == doctest::Approx(w.variance_r()).epsilon(1e-6));
      CHECK(fit.variance_i == doctest::Approx(w.variance_i()).epsilon(1e-6));
    }
  }
}

TEST_CASE("initial cat has full visibility") {
  const auto rho = cat_state_density(2.0, required_cat_dim(2.0, 1e-16));
  const GaussianCatWigner w(CatParams::make(2.0), {}, Regime::Resonant);
  const double f = fringe_visibility_from_grid(wigner_from_density(rho, analytic_grid(w, 10)), 2.0);
  CHECK(f == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("grid refinement barely moves the oracle visibility") {
  const BathSpec bath = BathSpec::from_ratio(10.0, 0.01, 100.0, unit_osc);
  const double t = 0.05;
  const auto c = integrated_closed(t, unit_osc, bath);
  const int d = auto_dimension(2.0, c.bigN);
  EvolveOptions opt;
  opt.output_times = {t};
  const auto run = evolve(MasterEquationKind::Repaired, cat_state_density(2.0, d), t,
                          unit_osc, bath, opt);
  const GaussianCatWigner shape(CatParams::make(2.0), c, Regime::Resonant);
  const double coarse = fringe_visibility_from_grid(
      wigner_from_density(run.states[0], analytic_grid(shape, 10)), shape.center());
  const double fine = fringe_visibility_from_grid(
      wigner_from_density(run.states[0], analytic_grid(shape, 20)), shape.center());
  CHECK(qbm::testing::rel_err(coarse, fine) < 1e-3);
}

TEST_CASE("extraction errors") {
  const auto cat = CatParams::make(3.0);
  const IntegratedCoefficients c{1.0, 0.05, 0.0};
  const GaussianCatWigner w(cat, c, Regime::OffResonant);
  // Fringes sampled by fewer than 8 points.
  const double period = 2.0 * pi / w.fringe_wavevector();
  const GridSpec coarse = GridSpec::centered(7.0, 4.0, period / 5.0);
  CHECK_THROWS_AS(fit_visibility(wigner_cat_analytic(cat, c, Regime::OffResonant, coarse),
                                 w.center()),
                  GridError);
  // Lobes nowhere near the hint.
  const auto grid = wigner_cat_analytic(cat, c, Regime::OffResonant, analytic_grid(w));
  CHECK_THROWS_AS(fit_visibility(grid, 0.3 * w.center()), GridError);
}

TEST_CASE("negativity fades as the cat decoheres") {
  const BathSpec bath = BathSpec::from_ratio(10.0, 0.01, 100.0, unit_osc);
  const double t_end = 0.1;
  const int d = auto_dimension(2.0, integrated_closed(t_end, unit_osc, bath).bigN);
  EvolveOptions opt;
  for (int i = 0; i <= 5; ++i) opt.output_times.push_back(t_end * i / 5);
  const auto run = evolve(MasterEquationKind::Repaired, cat_state_density(2.0, d), t_end,
                          unit_osc, bath, opt);
  const GaussianCatWigner shape(CatParams::make(2.0), {}, Regime::Resonant);
  const GridSpec spec = analytic_grid(shape, 10);
  double prev = -1.0;
  for (std::size_t i = 0; i < run.states.size(); ++i) {
    const double m = wigner_from_density(run.states[i], spec).min_value();
    if (i == 0) CHECK(m < -0.05);
    CHECK(m > prev);
    CHECK(m < 0.0);
    prev = m;
  }
}

TEST_CASE("exact and non-secular oracles agree on the visibility") {
  CompareScenario s;
  s.bath = BathSpec::from_ratio(10.0, 0.01, 100.0, unit_osc);
  s.alpha = 2.0;
  for (int i = 0; i <= 10; ++i) s.times.push_back(0.01 * i);  // omega_c t in [0, 1]
  s.kind = MasterEquationKind::NonSecular;
  const auto ns = compare_scenario(s);
  s.kind = MasterEquationKind::ExactReduced;
  const auto ex = compare_scenario(s);
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    CHECK(qbm::testing::rel_err(ex.f_oracle[i], ns.f_oracle[i]) < 0.05);
  }
}

TEST_CASE("comparison without coupling keeps full visibility") {
  CompareScenario s;
  s.bath = BathSpec::from_ratio(10.0, 0.0, 100.0, unit_osc);
  s.alpha = 2.0;
  s.times = {0.0, 0.05, 0.1};
  const auto r = compare_scenario(s);
  for (std::size_t i = 0; i < s.times.size(); ++i) {
    CHECK(r.f_analytic[i] == 1.0);
    CHECK(r.f_oracle[i] == doctest::Approx(1.0).epsilon(1e-5));
  }
  CHECK(r.within_tolerance);
  CHECK_FALSE(r.outside_validity);

  s.alpha = 0.0;
  CHECK_THROWS_AS(compare_scenario(s), std::invalid_argument);
  const auto a = analytic_visibility(s);
  for (double f : a.f_analytic) CHECK(f == 1.0);
}

TEST_CASE("resonant bath decoheres faster than off-resonant") {
  // alpha = 4, kT = 100, g = 0.01 at r = 10 against r = 0.1.
  CompareScenario res, off;
  res.bath = BathSpec::from_ratio(10.0, 0.01, 100.0, unit_osc);
  off.bath = BathSpec::from_ratio(0.1, 0.01, 100.0, unit_osc);
  off.regime = Regime::OffResonant;
  res.alpha = off.alpha = 4.0;
  for (double t : qbm::testing::log_spaced(0.01, 10.0, 40)) {
    res.times.push_back(t);
    off.times.push_back(t);
  }
  const auto fr = analytic_visibility(res), fo = analytic_visibility(off);
  for (std::size_t i = 0; i < res.times.size(); ++i) CHECK(fr.f_analytic[i] < fo.f_analytic[i]);
}

TEST_CASE("tolerance rule") {
  CHECK(visibility_agrees(0.5, 0.52));
  CHECK_FALSE(visibility_agrees(0.5, 0.53));
  CHECK(visibility_agrees(0.005, 0.009));
  CHECK_FALSE(visibility_agrees(0.005, 0.0101));
}

TEST_CASE("report export") {
  CompareScenario s;
  s.bath = BathSpec::from_ratio(10.0, 0.01, 100.0, OscillatorSpec(2.0));
  s.osc = OscillatorSpec(2.0);
  s.times = {0.0, 0.01};
  auto r = compare_scenario(s);
  r.scenario_hash = "0123456789abcdef";

  std::ostringstream csv;
  write_visibility_csv(csv, r);
  std::istringstream in(csv.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "omega0_t,F_analytic,F_oracle,rel_dev");
  std::getline(in, line);
  CHECK(line.rfind("0,1,", 0) == 0);
  std::getline(in, line);
  CHECK(line.rfind("0.02,", 0) == 0);

  std::ostringstream js;
  write_visibility_json(js, r);
  const auto j = nlohmann::json::parse(js.str());
  CHECK(j["scenario_hash"] == "0123456789abcdef");
  CHECK(j["oracle"] == true);
  CHECK(j["parameters"]["r"].get<double>() == doctest::Approx(10.0));

  const auto a = analytic_visibility(s);
  std::ostringstream acsv;
  write_visibility_csv(acsv, a);
  CHECK(acsv.str().find("\n0,1,,\n") != std::string::npos);
}
