#include "tpshock/grid_field.hpp"

namespace tpshock {

void differentiate_t(const GridField2D& f, GridField2D& out) {
  out.resize(f.nt, f.nx, f.T, f.x_lo, f.x_hi);
  const double h2 = 2.0 * f.dt();
  for (int it = 0; it <= f.nt; ++it) {
    // periodic neighbours; rows 0 and nt coincide
    int ip = it + 1 <= f.nt ? it + 1 : 1;
    int im = it - 1 >= 0 ? it - 1 : f.nt - 1;
    for (int ix = 0; ix <= f.nx; ++ix) {
      out.at(it, ix) = (f.at(ip, ix) - f.at(im, ix)) / h2;
    }
  }
}

void differentiate_x(const GridField2D& f, GridField2D& out) {
  out.resize(f.nt, f.nx, f.T, f.x_lo, f.x_hi);
  const double h = f.dx();
  for (int it = 0; it <= f.nt; ++it) {
    for (int ix = 1; ix < f.nx; ++ix) {
      out.at(it, ix) = (f.at(it, ix + 1) - f.at(it, ix - 1)) / (2 * h);
    }
    out.at(it, 0) = (-3 * f.at(it, 0) + 4 * f.at(it, 1) - f.at(it, 2)) / (2 * h);
    out.at(it, f.nx) = (3 * f.at(it, f.nx) - 4 * f.at(it, f.nx - 1) +
                        f.at(it, f.nx - 2)) / (2 * h);
  }
}

}  // namespace tpshock
