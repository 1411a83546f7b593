#include "cmhd/spectral_field.hpp"

#include <algorithm>
#include <cmath>

namespace cmhd {

SpectralField::SpectralField(const Grid& grid, std::string label_, double time_)
    : time(time_), label(std::move(label_)), grid_(grid), coeffs_(grid.spectral_size()) {}

Complex SpectralField::at(int k, int j, int l) const {
  if (l < 0) return std::conj(at(-k, -j, -l));
  if (!grid_.on_grid(k, j, l)) return {};
  return coeffs_[grid_.index(grid_.ix_of(k), grid_.iy_of(j), l)];
}

void SpectralField::set(int k, int j, int l, Complex value) {
  if (l < 0) {
    set(-k, -j, -l, std::conj(value));
    return;
  }
  if (!grid_.on_grid(k, j, l)) {
    throw ConfigError("mode (" + std::to_string(k) + "," + std::to_string(j) + "," +
                      std::to_string(l) + ") is not on the grid");
  }
  coeffs_[grid_.index(grid_.ix_of(k), grid_.iy_of(j), l)] = value;
  const bool self_paired_plane = (l == 0) || (l == grid_.nz / 2);
  if (self_paired_plane && grid_.on_grid(-k, -j, l)) {
    coeffs_[grid_.index(grid_.ix_of(-k), grid_.iy_of(-j), l)] = std::conj(value);
  }
}

void SpectralField::fill(Complex value) { std::fill(coeffs_.begin(), coeffs_.end(), value); }

namespace {

template <class F>
void for_self_paired(const Grid& g, F&& f) {
  for (int iz : {0, g.nz / 2}) {
    for (int ix = 0; ix < g.nx; ++ix) {
      for (int iy = 0; iy < g.ny; ++iy) {
        const int px = (g.nx - ix) % g.nx;
        const int py = (g.ny - iy) % g.ny;
        f(g.index(ix, iy, iz), g.index(px, py, iz));
      }
    }
  }
}

}  // namespace

void SpectralField::enforce_reality() {
  for_self_paired(grid_, [&](size_t a, size_t b) {
    if (a > b) return;
    if (a == b) {
      coeffs_[a] = {coeffs_[a].real(), 0.0};
      return;
    }
    const Complex avg = 0.5 * (coeffs_[a] + std::conj(coeffs_[b]));
    coeffs_[a] = avg;
    coeffs_[b] = std::conj(avg);
  });
}

double SpectralField::reality_defect() const {
  double worst = 0.0;
  for_self_paired(grid_, [&](size_t a, size_t b) {
    worst = std::max(worst, std::abs(coeffs_[a] - std::conj(coeffs_[b])));
  });
  return worst;
}

VectorField make_vector_field(const Grid& grid, const std::string& label, double time) {
  return {SpectralField(grid, label + "1", time), SpectralField(grid, label + "2", time),
          SpectralField(grid, label + "3", time)};
}

ElsasserState make_zero_state(const Grid& grid, double time) {
  return {make_vector_field(grid, "Z+", time), make_vector_field(grid, "Z-", time), time};
}

void dealias(SpectralField& field) {
  const Grid& g = field.grid();
  for (int ix = 0; ix < g.nx; ++ix) {
    for (int iy = 0; iy < g.ny; ++iy) {
      for (int iz = 0; iz < g.nzh(); ++iz) {
        if (!g.retained(ix, iy, iz)) field[g.index(ix, iy, iz)] = 0.0;
      }
    }
  }
}

SpectralField dealiased(SpectralField field) {
  dealias(field);
  return field;
}

double energy(const SpectralField& field) {
  const Grid& g = field.grid();
  double sum = 0.0;
  for (int ix = 0; ix < g.nx; ++ix) {
    for (int iy = 0; iy < g.ny; ++iy) {
      for (int iz = 0; iz < g.nzh(); ++iz) {
        sum += half_space_weight(g, iz) * std::norm(field[g.index(ix, iy, iz)]);
      }
    }
  }
  return sum;
}

}  // namespace cmhd
