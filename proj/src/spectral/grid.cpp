#include "cmhd/grid.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace cmhd {

namespace {

void check_extent(int n, const char* name) {
  if (n < 4 || n % 2 != 0) {
    throw ConfigError(std::string("grid size ") + name + " = " + std::to_string(n) +
                      " must be even and >= 4");
  }
}

// Largest integer strictly below n/3: sums of two retained indices never
// alias back into the retained band.
int two_thirds_cut(int n) { return (n - 1) / 3; }

}  // namespace

Grid make_grid(int nx, int ny, int nz, double ly) {
  check_extent(nx, "nx");
  check_extent(ny, "ny");
  check_extent(nz, "nz");
  if (!(ly > 0.0) || !std::isfinite(ly)) {
    throw ConfigError("grid aspect Ly must be positive, got " + std::to_string(ly));
  }
  Grid g;
  g.nx = nx;
  g.ny = ny;
  g.nz = nz;
  g.ly = ly;
  g.cut_x = two_thirds_cut(nx);
  g.cut_y = two_thirds_cut(ny);
  g.cut_z = two_thirds_cut(nz);
  return g;
}

bool Grid::on_grid(int k, int j, int l) const {
  auto in = [](int v, int n) { return v > -n / 2 && v <= n / 2; };
  return in(k, nx) && in(j, ny) && in(l, nz);
}

double Grid::x(int i) const { return 2.0 * std::numbers::pi * i / nx; }
double Grid::y(int i) const { return 2.0 * std::numbers::pi * ly * i / ny; }
double Grid::z(int i) const { return 2.0 * std::numbers::pi * i / nz; }

std::string describe(const Grid& g) {
  std::ostringstream os;
  os << g.nx << "x" << g.ny << "x" << g.nz << " Ly=" << g.ly;
  return os.str();
}

}  // namespace cmhd
