#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace cmhd {

using std::size_t;

/// Raised for invalid grids, configs and parameter sets.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A Fourier mode (k, eta, l). x/z wavenumbers are integers; eta is a
/// multiple of 1/Ly on the grid.
struct ModeIndex {
  int k = 0;
  double eta = 0.0;
  int l = 0;
};

/// Truncated Fourier grid on [0,2pi) x [0,2pi Ly) x [0,2pi).
///
/// Spectral storage follows the FFTW r2c layout: index (ix, iy, iz) with
/// ix < nx, iy < ny, iz <= nz/2, flattened as (ix*ny + iy)*nzh + iz. Signed
/// wavenumbers are k = ix or ix - nx (range -nx/2+1 .. nx/2), likewise for y;
/// the z index is the non-negative half.
struct Grid {
  int nx = 0;
  int ny = 0;
  int nz = 0;
  double ly = 1.0;
  // Largest retained |index| per direction under the 2/3 rule.
  int cut_x = 0;
  int cut_y = 0;
  int cut_z = 0;

  [[nodiscard]] int nzh() const { return nz / 2 + 1; }
  [[nodiscard]] size_t spectral_size() const {
    return static_cast<size_t>(nx) * ny * nzh();
  }
  [[nodiscard]] size_t physical_size() const {
    return static_cast<size_t>(nx) * ny * nz;
  }
  [[nodiscard]] size_t index(int ix, int iy, int iz) const {
    return (static_cast<size_t>(ix) * ny + iy) * nzh() + iz;
  }

  [[nodiscard]] int kx(int ix) const { return ix <= nx / 2 ? ix : ix - nx; }
  [[nodiscard]] int jy(int iy) const { return iy <= ny / 2 ? iy : iy - ny; }
  [[nodiscard]] double eta(int iy) const { return jy(iy) / ly; }
  [[nodiscard]] int lz(int iz) const { return iz; }
  [[nodiscard]] double eta_spacing() const { return 1.0 / ly; }

  [[nodiscard]] ModeIndex mode(int ix, int iy, int iz) const {
    return {kx(ix), eta(iy), lz(iz)};
  }

  // Storage index of a signed integer mode; ix/iy wrap, l must be >= 0.
  [[nodiscard]] int ix_of(int k) const { return k >= 0 ? k : k + nx; }
  [[nodiscard]] int iy_of(int j) const { return j >= 0 ? j : j + ny; }

  [[nodiscard]] bool on_grid(int k, int j, int l) const;
  [[nodiscard]] bool retained(int ix, int iy, int iz) const {
    int k = kx(ix), j = jy(iy);
    return (k < 0 ? -k : k) <= cut_x && (j < 0 ? -j : j) <= cut_y && iz <= cut_z;
  }

  // Physical coordinates of grid point i along each direction.
  [[nodiscard]] double x(int i) const;
  [[nodiscard]] double y(int i) const;
  [[nodiscard]] double z(int i) const;

  friend bool operator==(const Grid&, const Grid&) = default;
};

/// Builds a grid; every N must be even and >= 4, Ly > 0.
Grid make_grid(int nx, int ny, int nz, double ly);

std::string describe(const Grid& g);

}  // namespace cmhd
