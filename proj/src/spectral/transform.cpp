#include "cmhd/transform.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cstring>
#include <mutex>

namespace cmhd {

namespace {

// The FFTW planner is not re-entrant.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct FftwFree {
  void operator()(void* p) const { fftw_free(p); }
};

}  // namespace

struct Transform::Impl {
  Grid grid;
  std::unique_ptr<double, FftwFree> real;
  std::unique_ptr<fftw_complex, FftwFree> spec;
  fftw_plan forward = nullptr;
  fftw_plan backward = nullptr;

  explicit Impl(const Grid& g) : grid(g) {
    real.reset(fftw_alloc_real(g.physical_size()));
    spec.reset(fftw_alloc_complex(g.spectral_size()));
    std::lock_guard lock(planner_mutex());
    forward = fftw_plan_dft_r2c_3d(g.nx, g.ny, g.nz, real.get(), spec.get(), FFTW_ESTIMATE);
    backward = fftw_plan_dft_c2r_3d(g.nx, g.ny, g.nz, spec.get(), real.get(), FFTW_ESTIMATE);
  }

  ~Impl() {
    std::lock_guard lock(planner_mutex());
    if (forward) fftw_destroy_plan(forward);
    if (backward) fftw_destroy_plan(backward);
  }
};

Transform::Transform(const Grid& grid) : impl_(std::make_unique<Impl>(grid)) {}
Transform::~Transform() = default;
Transform::Transform(Transform&&) noexcept = default;
Transform& Transform::operator=(Transform&&) noexcept = default;

const Grid& Transform::grid() const { return impl_->grid; }

void Transform::to_physical(const SpectralField& in, std::span<double> out) {
  const Grid& g = impl_->grid;
  if (!(in.grid() == g) || out.size() != g.physical_size()) {
    throw ConfigError("transform: field does not match grid " + describe(g));
  }
  std::memcpy(impl_->spec.get(), in.coeffs().data(), sizeof(Complex) * g.spectral_size());
  fftw_execute(impl_->backward);
  std::copy_n(impl_->real.get(), g.physical_size(), out.data());
}

std::vector<double> Transform::to_physical(const SpectralField& in) {
  std::vector<double> out(impl_->grid.physical_size());
  to_physical(in, out);
  return out;
}

void Transform::to_spectral(std::span<const double> in, SpectralField& out) {
  const Grid& g = impl_->grid;
  if (!(out.grid() == g) || in.size() != g.physical_size()) {
    throw ConfigError("transform: field does not match grid " + describe(g));
  }
  std::copy(in.begin(), in.end(), impl_->real.get());
  fftw_execute(impl_->forward);
  const double scale = 1.0 / static_cast<double>(g.physical_size());
  const auto* src = reinterpret_cast<const Complex*>(impl_->spec.get());
  auto dst = out.coeffs();
  for (size_t i = 0; i < dst.size(); ++i) dst[i] = src[i] * scale;
}

}  // namespace cmhd
