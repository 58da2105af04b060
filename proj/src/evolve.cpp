#include "qbm/evolve.hpp"

#include <algorithm>
#include <cmath>
#include <ostream>
#include <stdexcept>
#include <string>

#include <boost/numeric/odeint.hpp>
#include <json.hpp>

#include "qbm/errors.hpp"
#include "qbm/io.hpp"

namespace qbm {

namespace odeint = boost::numeric::odeint;
using State = std::vector<std::complex<double>>;

CoefficientFn transient_coefficients(const OscillatorSpec& osc,
                                     const BathSpec& bath) {
  return [osc, bath](double t) { return sample_closed(t, osc, bath); };
}

CoefficientFn markovian_coefficients(const OscillatorSpec& osc,
                                     const BathSpec& bath) {
  const MarkovianLimits m = markovian_limits(osc, bath);
  const double delta = 0.5 * (m.gamma1 + m.gamma_minus1);
  const double gamma = 0.5 * (m.gamma1 - m.gamma_minus1);
  return [delta, gamma](double t) { return CoefficientSample{t, delta, gamma}; };
}

SnapshotDiagnostics diagnose(const DensityMatrix& rho) {
  return {rho.trace_error(), rho.hermiticity_error(), rho.min_eigenvalue(),
          rho.mean_n(), rho.tail_mass()};
}

namespace {

std::vector<double> snapshot_times(double t_final,
                                   const std::vector<double>& requested) {
  if (requested.empty()) {
    std::vector<double> out(101);
    for (int i = 0; i <= 100; ++i) out[i] = t_final * i / 100.0;
    return out;
  }
  if (!std::is_sorted(requested.begin(), requested.end()) ||
      requested.front() < 0.0 || requested.back() > t_final) {
    throw std::invalid_argument(
        "output times must be ascending and lie in [0, t_final]");
  }
  return requested;
}

DensityMatrix to_density(const State& x, int d) {
  return DensityMatrix::unchecked(
      Eigen::Map<const ComplexMatrix>(x.data(), d, d));
}

}  // namespace

EvolutionResult evolve(MasterEquationKind kind, const DensityMatrix& rho0,
                       double t_final, const OscillatorSpec& osc,
                       const BathSpec& bath, const EvolveOptions& options) {
  if (!(options.tol > 0.0)) throw std::invalid_argument("tol must be positive");
  if (!(t_final >= 0.0)) throw std::invalid_argument("t_final must be >= 0");
  const int d = rho0.dim();
  const auto times = snapshot_times(t_final, options.output_times);
  const CoefficientFn coeffs = options.coefficients
                                   ? options.coefficients
                                   : transient_coefficients(osc, bath);

  EvolutionResult result;
  result.kind = kind;
  auto record = [&](double t, const State& x) {
    DensityMatrix rho = to_density(x, d);
    result.diagnostics.push_back(diagnose(rho));
    result.states.push_back(std::move(rho));
    result.times.push_back(t);
  };

  State x(rho0.matrix().data(), rho0.matrix().data() + std::size_t(d) * d);
  std::size_t next = 0;
  for (; next < times.size() && times[next] == 0.0; ++next) record(0.0, x);
  if (next == times.size() || t_final == 0.0) return result;

  auto system = [&](const State& in, State& out, double t) {
    Eigen::Map<const ComplexMatrix> rho(in.data(), d, d);
    const ComplexMatrix drho = rhs(kind, t, rho, coeffs(t), osc);
    out.assign(drho.data(), drho.data() + std::size_t(d) * d);
  };

  auto stepper = odeint::make_dense_output(
      options.tol, options.tol, odeint::runge_kutta_dopri5<State>());
  const double min_step = 1e-13 * std::max(t_final, 1.0);
  stepper.initialize(x, 0.0, std::min(1e-3 * t_final, 1e-2));

  State buf(x.size());
  while (next < times.size()) {
    if (result.steps++ >= options.max_steps) {
      throw IntegrationError("step cap reached", stepper.current_time());
    }
    stepper.do_step(system);
    if (stepper.current_time_step() < min_step) {
      throw IntegrationError(
          "step size underflow at t = " + std::to_string(stepper.current_time()),
          stepper.current_time());
    }
    const State& cur = stepper.current_state();
    const double tail = std::abs(cur[std::size_t(d - 1) * d + (d - 1)]);
    if (tail > options.tail_threshold) {
      throw TruncationError(
          "Fock truncation breached at t = " +
              std::to_string(stepper.current_time()) + ": last-level population " +
              std::to_string(tail) + " exceeds " +
              std::to_string(options.tail_threshold) + " (dim " +
              std::to_string(d) + ")",
          2 * d);
    }
    while (next < times.size() && times[next] <= stepper.current_time()) {
      stepper.calc_state(times[next], buf);
      record(times[next], buf);
      ++next;
    }
  }
  return result;
}

EvolutionResult evolve(MasterEquationKind kind, const DensityMatrix& rho0,
                       double t_final, const OscillatorSpec& osc,
                       const BathSpec& bath, double tol) {
  EvolveOptions options;
  options.tol = tol;
  return evolve(kind, rho0, t_final, osc, bath, options);
}

std::vector<double> heating_function(const EvolutionResult& result) {
  std::vector<double> out;
  out.reserve(result.states.size());
  for (const auto& s : result.states) out.push_back(s.mean_n());
  return out;
}

int auto_dimension(double alpha, double bigN_final) {
  const double heating = std::max(bigN_final, 0.0);
  return required_cat_dim(alpha) + 4 + int(std::ceil(4.0 * heating));
}

void write_diagnostics_csv(std::ostream& out, const EvolutionResult& result,
                           const OscillatorSpec& osc) {
  out << "omega0_t,trace_error,hermiticity_error,min_eigenvalue,mean_n,tail_mass\n";
  for (std::size_t i = 0; i < result.times.size(); ++i) {
    const auto& g = result.diagnostics[i];
    out << format_double(osc.omega0() * result.times[i]) << ','
        << format_double(g.trace_error) << ','
        << format_double(g.hermiticity_error) << ','
        << format_double(g.min_eigenvalue) << ',' << format_double(g.mean_n)
        << ',' << format_double(g.tail_mass) << '\n';
  }
}

void write_snapshots_json(std::ostream& out, const EvolutionResult& result,
                          const OscillatorSpec& osc) {
  nlohmann::ordered_json snaps = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < result.times.size(); ++i) {
    const auto& rho = result.states[i];
    const auto& g = result.diagnostics[i];
    nlohmann::ordered_json elems = nlohmann::ordered_json::array();
    for (int r = 0; r < rho.dim(); ++r) {
      for (int c = 0; c < rho.dim(); ++c) {
        elems.push_back({rho(r, c).real(), rho(r, c).imag()});
      }
    }
    snaps.push_back({
        {"omega0_t", osc.omega0() * result.times[i]},
        {"kind", std::string(to_string(result.kind))},
        {"dim", rho.dim()},
        {"rho", std::move(elems)},
        {"diagnostics",
         {{"trace_error", g.trace_error},
          {"hermiticity_error", g.hermiticity_error},
          {"min_eigenvalue", g.min_eigenvalue},
          {"mean_n", g.mean_n},
          {"tail_mass", g.tail_mass}}},
    });
  }
  out << snaps.dump(1) << '\n';
}

}  // namespace qbm
