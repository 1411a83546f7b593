#pragma once

#include <array>
#include <cmath>
#include <complex>

#include "cmhd/grid.hpp"
#include "cmhd/spectral_field.hpp"

namespace cmhd {

/// Sheared wave vector k_t = (k, eta - k t, l) carried by the symbols of
/// grad_L = (d_X, d_Y - t d_X, d_Z).
struct MovingWaveVector {
  std::array<double, 3> kt{};
  double norm_sq = 0.0;
};

[[nodiscard]] inline MovingWaveVector moving_wave_vector(const ModeIndex& m, double t) {
  const double ky = m.eta - m.k * t;
  return {{static_cast<double>(m.k), ky, static_cast<double>(m.l)},
          double(m.k) * m.k + ky * ky + double(m.l) * m.l};
}

/// Symbol of T_a^t = exp(a t (sigma d_x + d_z)): e^{i a (sigma k + l) t}.
[[nodiscard]] inline Complex transport_phase(double a, const ModeIndex& m, double sigma, double t) {
  return std::polar(1.0, a * (sigma * m.k + m.l) * t);
}

/// Integral of |k_s|^2 over [0, t]: k^2 t + eta^2 t - k eta t^2 + k^2 t^3/3 + l^2 t.
[[nodiscard]] inline double sheared_laplacian_integral(const ModeIndex& m, double t) {
  const double k = m.k, e = m.eta, l = m.l;
  return k * k * t + e * e * t - k * e * t * t + k * k * t * t * t / 3.0 + l * l * t;
}

using Vec3 = std::array<Complex, 3>;

/// v - k_t (k_t . v)/|k_t|^2; the (0,0,0) mode is returned unchanged.
[[nodiscard]] inline Vec3 leray_project(const Vec3& v, const MovingWaveVector& w) {
  if (w.norm_sq == 0.0) return v;
  const Complex dot = w.kt[0] * v[0] + w.kt[1] * v[1] + w.kt[2] * v[2];
  const Complex s = dot / w.norm_sq;
  return {v[0] - w.kt[0] * s, v[1] - w.kt[1] * s, v[2] - w.kt[2] * s};
}

[[nodiscard]] inline Complex divergence_symbol(const Vec3& v, const MovingWaveVector& w) {
  return w.kt[0] * v[0] + w.kt[1] * v[1] + w.kt[2] * v[2];
}

/// Applies the moving-frame projection at time t to every mode of a vector field.
void leray_project_moving(VectorField& v, double t);

/// max over modes of |k_t . v| / |k_t|, the size of the component along k_t.
[[nodiscard]] double max_divergence(const VectorField& v, double t);

/// Multiplies every mode of `field` by the transport symbol of T_a^t.
void apply_transport(SpectralField& field, double a, double sigma, double t);
void apply_transport(VectorField& field, double a, double sigma, double t);

}  // namespace cmhd
