#include "cmhd/symbols.hpp"

#include <algorithm>
#include <cmath>

namespace cmhd {

void leray_project_moving(VectorField& v, double t) {
  const Grid& g = v[0].grid();
  for (int ix = 0; ix < g.nx; ++ix) {
    for (int iy = 0; iy < g.ny; ++iy) {
      for (int iz = 0; iz < g.nzh(); ++iz) {
        const size_t i = g.index(ix, iy, iz);
        const auto w = moving_wave_vector(g.mode(ix, iy, iz), t);
        const Vec3 p = leray_project({v[0][i], v[1][i], v[2][i]}, w);
        v[0][i] = p[0];
        v[1][i] = p[1];
        v[2][i] = p[2];
      }
    }
  }
}

double max_divergence(const VectorField& v, double t) {
  const Grid& g = v[0].grid();
  double worst = 0.0;
  for (int ix = 0; ix < g.nx; ++ix) {
    for (int iy = 0; iy < g.ny; ++iy) {
      for (int iz = 0; iz < g.nzh(); ++iz) {
        const size_t i = g.index(ix, iy, iz);
        const auto w = moving_wave_vector(g.mode(ix, iy, iz), t);
        if (w.norm_sq == 0.0) continue;
        const Complex d = divergence_symbol({v[0][i], v[1][i], v[2][i]}, w);
        worst = std::max(worst, std::abs(d) / std::sqrt(w.norm_sq));
      }
    }
  }
  return worst;
}

void apply_transport(SpectralField& field, double a, double sigma, double t) {
  if (a == 0.0 || t == 0.0) return;
  const Grid& g = field.grid();
  for (int ix = 0; ix < g.nx; ++ix) {
    const int k = g.kx(ix);
    for (int iy = 0; iy < g.ny; ++iy) {
      for (int iz = 0; iz < g.nzh(); ++iz) {
        field[g.index(ix, iy, iz)] *= transport_phase(a, {k, 0.0, iz}, sigma, t);
      }
    }
  }
}

void apply_transport(VectorField& field, double a, double sigma, double t) {
  for (auto& c : field) apply_transport(c, a, sigma, t);
}

}  // namespace cmhd
