#include <doctest.h>

#include <cmath>
#include <numbers>
#include <sstream>

#include <json.hpp>

#include "qbm/errors.hpp"
#include "qbm/gaussian_wigner.hpp"
#include "support.hpp"

using namespace qbm;
using std::numbers::pi;
using qbm::testing::Rng;

namespace {

const OscillatorSpec unit_osc(1.0);

IntegratedCoefficients at(double n, double g, double t = 1.0) {
  return {t, n, g};
}

// Simpson over an 8-sigma box, independent of the grid helpers.
double plane_integral(const GaussianCatWigner& w, int n = 400) {
  const double hr = w.center() + 8.0 * std::sqrt(w.variance_r());
  const double hi = 8.0 * std::sqrt(w.variance_i());
  return qbm::testing::simpson(
      [&](double bi) {
        return qbm::testing::simpson([&](double br) { return w(br, bi); }, -hr, hr, n);
      },
      -hi, hi, n);
}

}  // namespace

TEST_CASE("cat normalization constant") {
  CHECK(CatParams::make(0.0).norm == 0.25);
  const auto c = CatParams::make(2.0);
  CHECK(1.0 / c.norm == doctest::Approx(2.0 * (1.0 + std::exp(-8.0))).epsilon(1e-15));
  CHECK_THROWS_AS(CatParams::make(-1.0), std::invalid_argument);
}

TEST_CASE("initial cat is the same in both regimes") {
  const auto cat = CatParams::make(2.0);
  const GaussianCatWigner off(cat, at(0, 0, 0), Regime::OffResonant);
  const GaussianCatWigner res(cat, at(0, 0, 0), Regime::Resonant);
  Rng rng(3);
  for (int i = 0; i < 200; ++i) {
    const double br = rng.uniform(-4, 4), bi = rng.uniform(-3, 3);
    CHECK(off(br, bi) == doctest::Approx(res(br, bi)).epsilon(1e-14));
  }
  // Side peaks 2N/pi (plus the negligible tail of the other lobe), central
  // fringe 4N/pi.
  CHECK(off.plus(2.0, 0.0) == doctest::Approx(2.0 * cat.norm / pi).epsilon(1e-15));
  CHECK(off(0.0, 0.0) == doctest::Approx(4.0 * cat.norm / pi + 2.0 * off.plus(0.0, 0.0))
                             .epsilon(1e-14));
  CHECK(off.interference(0.0, 0.0) == doctest::Approx(2.0 * off.plus(2.0, 0.0)).epsilon(1e-15));
  CHECK(off.center() == 2.0);
  CHECK(fringe_visibility_closed(cat, at(0, 0, 0), Regime::Resonant) == 1.0);
  CHECK(fringe_visibility_closed(cat, at(0, 0, 0), Regime::OffResonant) == 1.0);
}

TEST_CASE("vacuum limit") {
  const auto cat = CatParams::make(0.0);
  for (Regime regime : {Regime::OffResonant, Regime::Resonant}) {
    const GaussianCatWigner w(cat, at(0.3, 0.02), regime);
    CHECK(w.center() == 0.0);
    CHECK(fringe_visibility_closed(cat, at(0.3, 0.02), regime) == 1.0);
    // Three coincident terms that add up to one normalized Gaussian.
    CHECK(w(0.0, 0.0) == doctest::Approx(4.0 * w.plus(0.0, 0.0)).epsilon(1e-14));
    CHECK(plane_integral(w) == doctest::Approx(1.0).epsilon(1e-10));
  }
  CHECK(GaussianCatWigner(cat, at(0, 0, 0), Regime::OffResonant)(0.0, 0.0) ==
        doctest::Approx(2.0 / pi).epsilon(1e-15));
}

TEST_CASE("property: closed forms integrate to one") {
  // Checked on the printed resonant prefactor, which turns out to be
  // normalized as written.
  Rng rng(31);
  for (Regime regime : {Regime::OffResonant, Regime::Resonant}) {
    for (int i = 0; i < 10; ++i) {
      const auto cat = CatParams::make(rng.uniform(0.5, 4.0));
      const auto c = at(rng.log_uniform(1e-4, 2.0), rng.uniform(0.0, 0.5));
      const GaussianCatWigner w(cat, c, regime);
      CAPTURE(cat.alpha);
      CAPTURE(c.bigN);
      CHECK(plane_integral(w) == doctest::Approx(1.0).epsilon(1e-9));
      const auto grid = wigner_cat_analytic(cat, c, regime, analytic_grid(w));
      CHECK(std::abs(grid.integral() - 1.0) < 1e-3);
    }
  }
}

TEST_CASE("property: variances, centers and marginal symmetry") {
  Rng rng(37);
  for (int i = 0; i < 50; ++i) {
    const auto cat = CatParams::make(rng.uniform(0.0, 5.0));
    const double n = rng.log_uniform(1e-6, 10.0), g = rng.uniform(0.0, 3.0);
    const GaussianCatWigner off(cat, at(n, g), Regime::OffResonant);
    const GaussianCatWigner res(cat, at(n, g), Regime::Resonant);
    CHECK(off.variance_r() == off.variance_i());
    CHECK(off.variance_r() == doctest::Approx((n + 0.5) / 2.0).epsilon(1e-15));
    CHECK(res.variance_r() == 0.25);
    CHECK(res.variance_i() == doctest::Approx((2.0 * n + 0.5) / 2.0).epsilon(1e-15));
    CHECK(off.center() == doctest::Approx(std::exp(-g / 2) * cat.alpha).epsilon(1e-15));
    CHECK(res.center() == off.center());
    // Numerical second moment of the lobe about its center along each axis.
    for (const GaussianCatWigner* w : {&off, &res}) {
      const double c = w->center();
      const double sr = std::sqrt(w->variance_r()), si = std::sqrt(w->variance_i());
      auto moment = [&](auto f, double s) {
        const double m0 = qbm::testing::simpson(f, -10 * s, 10 * s, 400);
        const double m2 = qbm::testing::simpson(
            [&](double x) { return x * x * f(x); }, -10 * s, 10 * s, 400);
        return m2 / m0;
      };
      CHECK(moment([&](double x) { return w->plus(c + x, 0.0); }, sr) ==
            doctest::Approx(w->variance_r()).epsilon(1e-9));
      CHECK(moment([&](double y) { return w->plus(c, y); }, si) ==
            doctest::Approx(w->variance_i()).epsilon(1e-9));
    }
  }
}

TEST_CASE("interference carries the printed fringe wavevector") {
  const auto cat = CatParams::make(3.0);
  const auto c = at(0.2, 0.05);
  const GaussianCatWigner off(cat, c, Regime::OffResonant);
  const GaussianCatWigner res(cat, c, Regime::Resonant);
  const double e = std::exp(-0.025) * 3.0;
  CHECK(off.fringe_wavevector() == doctest::Approx(2.0 * e / 0.7).epsilon(1e-15));
  CHECK(res.fringe_wavevector() == doctest::Approx(2.0 * e / 0.9).epsilon(1e-15));
  // First zero of the cosine.
  const double q = pi / (2.0 * res.fringe_wavevector());
  CHECK(std::abs(res.interference(0.0, q)) < 1e-15);
  CHECK(res.interference(0.0, 2.0 * q) < 0.0);
}

TEST_CASE("visibility examples") {
  const auto cat = CatParams::make(4.0);
  const auto c = at(0.05, 0.0);
  const double f_off = fringe_visibility_closed(cat, c, Regime::OffResonant);
  const double f_res = fringe_visibility_closed(cat, c, Regime::Resonant);
  CHECK(f_off == doctest::Approx(std::exp(-32.0 * (1.0 - 1.0 / 1.1))).epsilon(1e-14));
  CHECK(f_res == doctest::Approx(std::exp(-32.0 * (1.0 - 1.0 / 1.2))).epsilon(1e-14));
  CHECK(f_off == doctest::Approx(0.0545).epsilon(0.002));
  CHECK(f_res == doctest::Approx(0.00483).epsilon(0.002));
  CHECK(f_res < f_off);
  CHECK(f_res == doctest::Approx(
                     fringe_visibility_closed(cat, at(0.1, 0.0), Regime::OffResonant))
                     .epsilon(1e-15));
  // N = 0: both reduce to exp(-2 alpha^2 (1 - e^{-Gamma})).
  for (Regime regime : {Regime::OffResonant, Regime::Resonant}) {
    CHECK(fringe_visibility_closed(cat, at(0.0, 0.3), regime) ==
          doctest::Approx(std::exp(-32.0 * (1.0 - std::exp(-0.3)))).epsilon(1e-14));
  }
  // Peak ratio identity of the three-term form.
  const GaussianCatWigner w(cat, at(0.05, 0.01), Regime::Resonant);
  CHECK(0.5 * w.interference_amplitude() / w.lobe_amplitude() ==
        doctest::Approx(fringe_visibility_closed(cat, at(0.05, 0.01), Regime::Resonant))
            .epsilon(1e-14));
}

TEST_CASE("property: larger cats decohere faster") {
  Rng rng(41);
  for (int i = 0; i < 100; ++i) {
    const auto c = at(rng.log_uniform(1e-4, 1.0), rng.uniform(0.0, 0.2));
    const double a1 = rng.uniform(0.1, 4.0), a2 = a1 + rng.uniform(0.01, 1.0);
    for (Regime regime : {Regime::OffResonant, Regime::Resonant}) {
      CHECK(fringe_visibility_closed(CatParams::make(a2), c, regime) <=
            fringe_visibility_closed(CatParams::make(a1), c, regime));
    }
  }
}

TEST_CASE("property: visibility decays along coefficient trajectories") {
  // N is non-decreasing for r >= 1; at r = 0.1 it is not (see coefficients).
  for (double r : {1.0, 10.0}) {
    const BathSpec bath = BathSpec::from_ratio(r, 0.01, 100.0, unit_osc);
    std::vector<double> grid{0.0};
    for (double t : qbm::testing::log_spaced(1e-3, 200.0, 300)) grid.push_back(t);
    const auto tr = integrate_coefficients(grid, unit_osc, bath);
    for (Regime regime : {Regime::OffResonant, Regime::Resonant}) {
      double prev = 1.0;
      for (const auto& c : tr.integrated) {
        const double f = fringe_visibility_closed(CatParams::make(2.0), c, regime);
        CHECK(f <= prev + 1e-15);
        CHECK(f >= 0.0);
        prev = f;
      }
    }
  }
}

TEST_CASE("effective temperature doubling is exact") {
  Rng rng(43);
  for (double r : {0.1, 1.0, 10.0}) {
    const BathSpec bath = BathSpec::from_ratio(r, rng.uniform(0.001, 0.1), 100.0, unit_osc);
    std::vector<double> grid{0.0};
    for (double t : qbm::testing::log_spaced(1e-3, 100.0, 199)) grid.push_back(t);
    const auto tr = integrate_coefficients(grid, unit_osc, bath);
    for (double alpha : {0.5, 2.0, 4.0}) {
      const auto rep = visibility_ratio_check(CatParams::make(alpha), tr.integrated);
      CHECK(rep.samples == 200);
      CHECK(rep.max_deviation <= 4 * std::numeric_limits<double>::epsilon());
    }
  }
}

TEST_CASE("a_int limits") {
  const auto cat = CatParams::make(3.0);
  CHECK(a_int(cat, at(0.0, 0.0)) == 0.0);
  CHECK(a_int(cat, at(1e12, 0.0)) == doctest::Approx(18.0).epsilon(1e-12));
  // Matches the resonant closed form once e^{-Gamma} = 1.
  for (double n : {1e-3, 0.05, 1.0}) {
    CHECK(std::exp(-a_int(cat, at(n, 0.0))) ==
          doctest::Approx(fringe_visibility_closed(cat, at(n, 0.0), Regime::Resonant))
              .epsilon(1e-13));
  }
  std::vector<std::string> warnings;
  a_int(cat, at(0.1, 0.01), &warnings);
  CHECK(warnings.empty());
  a_int(cat, at(0.1, 0.2), &warnings);
  REQUIRE(warnings.size() == 1);
  CHECK(warnings[0].find("Gamma") != std::string::npos);
}

TEST_CASE("a_int at long times follows the Markovian diffusion") {
  // After the transient, N(t) ~ Delta_M t up to a constant offset; the
  // relative difference shrinks like 1/t.
  const BathSpec bath = BathSpec::from_ratio(10.0, 0.01, 100.0, unit_osc);
  const auto m = markovian_limits(unit_osc, bath);
  const double delta_m = 0.5 * (m.gamma1 + m.gamma_minus1);
  const auto cat = CatParams::make(2.0);
  for (double t : {20.0, 50.0, 100.0}) {
    const auto c = integrated_closed(t, unit_osc, bath);
    const double x = 4.0 * delta_m * t;
    CHECK(qbm::testing::rel_err(a_int(cat, c), 8.0 * x / (x + 1.0)) < 0.01);
  }
}

TEST_CASE("grid checks") {
  const auto cat = CatParams::make(2.0);
  const auto c = at(0.1, 0.01);
  const GaussianCatWigner w(cat, c, Regime::Resonant);
  const GridSpec ok = analytic_grid(w);
  CHECK_NOTHROW(wigner_cat_analytic(cat, c, Regime::Resonant, ok));
  CHECK(ok.dr() <= 2.0 * pi / w.fringe_wavevector() / 16 + 1e-15);
  const GridSpec narrow = GridSpec::centered(w.center() + 2.0, 3.0, 0.05);
  CHECK_THROWS_AS(wigner_cat_analytic(cat, c, Regime::Resonant, narrow), GridError);
  CHECK_THROWS_AS(GaussianCatWigner(cat, at(-0.1, 0.0), Regime::Resonant),
                  std::invalid_argument);
}

TEST_CASE("regime helpers") {
  CHECK(regime_for_ratio(10.0) == Regime::Resonant);
  CHECK(regime_for_ratio(0.1) == Regime::OffResonant);
  CHECK(regime_valid(Regime::Resonant, 5.0));
  CHECK_FALSE(regime_valid(Regime::Resonant, 2.0));
  CHECK(regime_valid(Regime::OffResonant, 0.2));
  CHECK_FALSE(regime_valid(Regime::OffResonant, 0.5));
  CHECK(parse_regime("res") == Regime::Resonant);
  CHECK(parse_regime(to_string(Regime::OffResonant)) == Regime::OffResonant);
  CHECK_THROWS_AS(parse_regime("middle"), std::invalid_argument);
}

TEST_CASE("grid export") {
  const auto cat = CatParams::make(1.0);
  const auto c = at(0.1, 0.01, 0.5);
  const GridSpec spec = GridSpec::centered(5.0, 4.0, 0.5);
  const auto g = wigner_cat_analytic(cat, c, Regime::OffResonant, spec);
  std::ostringstream csv;
  write_wigner_csv(csv, g);
  std::istringstream in(csv.str());
  std::string header;
  std::getline(in, header);
  CHECK(header.rfind("beta_i\\beta_r,", 0) == 0);
  int rows = 0;
  for (std::string line; std::getline(in, line);) ++rows;
  CHECK(rows == spec.ni);

  std::ostringstream js;
  write_wigner_sidecar(js, g, 2.0);
  const auto j = nlohmann::json::parse(js.str());
  CHECK(j["source"] == "analytic/offresonant");
  CHECK(j["alpha"].get<double>() == 1.0);
  CHECK(j["omega0_t"].get<double>() == 1.0);
}
