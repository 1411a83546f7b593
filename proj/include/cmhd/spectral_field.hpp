#pragma once

#include <array>
#include <complex>
#include <span>
#include <string>
#include <vector>

#include "cmhd/grid.hpp"

namespace cmhd {

using Complex = std::complex<double>;

/// Complex Fourier coefficients of one real scalar component, normalised so
/// that f(x) = sum_k c_k e^{i k.x}. Only the l >= 0 half is stored; the
/// l = 0 plane holds both members of each conjugate pair.
class SpectralField {
 public:
  SpectralField() = default;
  explicit SpectralField(const Grid& grid, std::string label = {}, double time = 0.0);

  [[nodiscard]] const Grid& grid() const { return grid_; }
  [[nodiscard]] std::span<Complex> coeffs() { return coeffs_; }
  [[nodiscard]] std::span<const Complex> coeffs() const { return coeffs_; }
  [[nodiscard]] size_t size() const { return coeffs_.size(); }

  Complex& operator[](size_t i) { return coeffs_[i]; }
  const Complex& operator[](size_t i) const { return coeffs_[i]; }

  /// Coefficient of the signed integer mode (k, j, l); negative l is served
  /// by conjugating the stored partner.
  [[nodiscard]] Complex at(int k, int j, int l) const;
  /// Sets mode (k, j, l) and its conjugate partner so the field stays real.
  void set(int k, int j, int l, Complex value);

  void fill(Complex value);
  /// Symmetrises the l = 0 (and Nyquist-l) plane so c(-k,-j,0) = conj c(k,j,0).
  void enforce_reality();
  /// Largest violation of the reality constraint on the self-paired planes.
  [[nodiscard]] double reality_defect() const;

  double time = 0.0;
  std::string label;

 private:
  Grid grid_{};
  std::vector<Complex> coeffs_;
};

using VectorField = std::array<SpectralField, 3>;

VectorField make_vector_field(const Grid& grid, const std::string& label, double time = 0.0);

/// The Elsasser profile pair Z+ and Z-.
struct ElsasserState {
  VectorField zp;
  VectorField zm;
  double time = 0.0;

  [[nodiscard]] const Grid& grid() const { return zp[0].grid(); }
  VectorField& component(int sign) { return sign > 0 ? zp : zm; }
  [[nodiscard]] const VectorField& component(int sign) const { return sign > 0 ? zp : zm; }
};

ElsasserState make_zero_state(const Grid& grid, double time = 0.0);

/// Zeroes every coefficient outside the retained 2/3 band.
void dealias(SpectralField& field);
[[nodiscard]] SpectralField dealiased(SpectralField field);

/// sum |c|^2 over the full (both halves) mode set; equals the grid-mean of f^2.
[[nodiscard]] double energy(const SpectralField& field);

/// Multiplicity of a stored half-space entry in full-space sums (1 or 2).
[[nodiscard]] inline double half_space_weight(const Grid& g, int iz) {
  return (iz == 0 || (g.nz % 2 == 0 && iz == g.nz / 2)) ? 1.0 : 2.0;
}

}  // namespace cmhd
