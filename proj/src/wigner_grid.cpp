#include "qbm/wigner_grid.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include <json.hpp>

#include "qbm/io.hpp"

namespace qbm {

GridSpec GridSpec::centered(double r_half_width, double i_half_width,
                            double step) {
  if (!(step > 0.0) || !(r_half_width > 0.0) || !(i_half_width > 0.0)) {
    throw std::invalid_argument("grid extents and step must be positive");
  }
  const int hr = int(std::ceil(r_half_width / step));
  const int hi = int(std::ceil(i_half_width / step));
  return {-hr * step, hr * step, 2 * hr + 1, -hi * step, hi * step, 2 * hi + 1};
}

void GridSpec::validate() const {
  if (nr < 2 || ni < 2) throw std::invalid_argument("grid needs >= 2 points per axis");
  if (!(r_max > r_min) || !(i_max > i_min)) {
    throw std::invalid_argument("grid axis bounds must be increasing");
  }
}

void write_wigner_csv(std::ostream& out, const WignerGrid& grid) {
  const auto& s = grid.spec;
  out << "beta_i\\beta_r";
  for (int c = 0; c < s.nr; ++c) out << ',' << format_double(s.beta_r(c));
  out << '\n';
  for (int r = 0; r < s.ni; ++r) {
    out << format_double(s.beta_i(r));
    for (int c = 0; c < s.nr; ++c) out << ',' << format_double(grid.values(r, c));
    out << '\n';
  }
}

void write_wigner_sidecar(std::ostream& out, const WignerGrid& grid,
                          double omega0) {
  const auto& m = grid.meta;
  nlohmann::ordered_json j = {
      {"source", m.source},
      {"omega0_t", omega0 * m.t},
      {"alpha", m.alpha},
      {"bigN", m.bigN},
      {"bigGamma", m.bigGamma},
      {"dim", m.dim},
      {"outside_validity", m.outside_validity},
      {"warnings", m.warnings},
      {"beta_r", {{"min", grid.spec.r_min}, {"max", grid.spec.r_max}, {"points", grid.spec.nr}}},
      {"beta_i", {{"min", grid.spec.i_min}, {"max", grid.spec.i_max}, {"points", grid.spec.ni}}},
  };
  out << j.dump(2) << '\n';
}

}  // namespace qbm
