#pragma once

#include <memory>
#include <span>
#include <vector>

#include "cmhd/grid.hpp"
#include "cmhd/spectral_field.hpp"

namespace cmhd {

/// FFTW-backed real <-> spectral transforms for one grid. Plans use
/// FFTW_ESTIMATE so results are bitwise reproducible. Not thread-safe per
/// instance; give each worker its own.
class Transform {
 public:
  explicit Transform(const Grid& grid);
  ~Transform();
  Transform(const Transform&) = delete;
  Transform& operator=(const Transform&) = delete;
  Transform(Transform&&) noexcept;
  Transform& operator=(Transform&&) noexcept;

  [[nodiscard]] const Grid& grid() const;

  /// Spectral -> physical values on the grid (layout [ix][iy][iz]).
  void to_physical(const SpectralField& in, std::span<double> out);
  [[nodiscard]] std::vector<double> to_physical(const SpectralField& in);
  /// Physical -> normalised coefficients.
  void to_spectral(std::span<const double> in, SpectralField& out);

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

}  // namespace cmhd
