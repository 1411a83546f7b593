#include "cmhd/linear_modes.hpp"

#include <algorithm>
#include <cmath>

#include "cmhd/symbols.hpp"

namespace cmhd::linear {

namespace {

template <size_t N>
using State = std::array<Complex, N>;

template <size_t N>
State<N> axpy(const State<N>& y, double h, const State<N>& k) {
  State<N> out;
  for (size_t i = 0; i < N; ++i) out[i] = y[i] + h * k[i];
  return out;
}

// Classical RK4 from t0 to t1 with a uniform step no larger than h_max.
// `post` may adjust the state after each step; `factor(t)` rescales the
// recorded state (used for the exact viscous factor).
template <size_t N, class Rhs, class Post, class Factor>
ModeTrajectory integrate(std::string system, Rhs&& f, State<N> y, double t0, double t1, double h_max,
                         int stride, Post&& post, Factor&& factor) {
  if (!(t1 >= t0)) throw ConfigError(system + ": time span must satisfy t1 >= t0");
  if (!(h_max > 0.0)) throw ConfigError(system + ": dt must be positive");
  if (stride < 1) throw ConfigError(system + ": record stride must be >= 1");
  const long long n = std::max(1LL, static_cast<long long>(std::ceil((t1 - t0) / h_max - 1e-9)));
  const double h = (t1 - t0) / static_cast<double>(n);
  ModeTrajectory tr;
  tr.system = std::move(system);
  auto record = [&](double t) {
    const double s = factor(t);
    std::vector<Complex> v(N);
    for (size_t i = 0; i < N; ++i) v[i] = s * y[i];
    tr.times.push_back(t);
    tr.values.push_back(std::move(v));
  };
  record(t0);
  for (long long s = 0; s < n; ++s) {
    const double t = t0 + static_cast<double>(s) * h;
    const State<N> k1 = f(t, y);
    const State<N> k2 = f(t + 0.5 * h, axpy(y, 0.5 * h, k1));
    const State<N> k3 = f(t + 0.5 * h, axpy(y, 0.5 * h, k2));
    const State<N> k4 = f(t + h, axpy(y, h, k3));
    for (size_t i = 0; i < N; ++i) y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
    const double tn = (s + 1 == n) ? t1 : t0 + static_cast<double>(s + 1) * h;
    post(tn, y);
    if ((s + 1) % stride == 0 || s + 1 == n) record(tn);
  }
  return tr;
}

auto viscous_factor(double nu, const ModeIndex& m, double t0) {
  const double i0 = sheared_laplacian_integral(m, t0);
  return [=](double t) { return nu == 0.0 ? 1.0 : std::exp(-nu * (sheared_laplacian_integral(m, t) - i0)); };
}

constexpr auto no_post = [](double, auto&) {};

}  // namespace

double ModeTrajectory::norm(size_t i, std::initializer_list<int> components) const {
  double s = 0.0;
  for (int c : components) s += std::norm(values[i][c]);
  return std::sqrt(s);
}

double resolved_dt(double dt, double freq) {
  return std::min({dt, 0.01, 0.1 / (1.0 + std::abs(freq))});
}

double relative_frequency(const LinParams& p) {
  return 2.0 * p.alpha * (p.sigma * p.mode.k + p.mode.l);
}

ModeTrajectory evolve_linear_full(const LinParams& p, const std::array<Complex, 6>& init, double t0,
                                  double t1, double dt, int record_stride) {
  const ModeIndex m = p.mode;
  const auto w0 = moving_wave_vector(m, t0);
  for (int s = 0; s < 2; ++s) {
    const Vec3 z{init[3 * s], init[3 * s + 1], init[3 * s + 2]};
    double mag = 0;
    for (const auto& c : z) mag += std::norm(c);
    const double scale = std::sqrt(w0.norm_sq * mag);
    if (std::abs(divergence_symbol(z, w0)) > 1e-10 * std::max(scale, 1e-300)) {
      throw ConfigError("linear_full: initial data violates k_t . z = 0");
    }
  }
  const double a = p.alpha, sig = p.sigma;
  auto rhs = [&](double t, const State<6>& z) {
    const auto w = moving_wave_vector(m, t);
    const Complex tp = transport_phase(2.0 * a, m, sig, t);
    const Complex gp = tp * z[4];             // T_{+2a} Z^{-,2}
    const Complex gm = std::conj(tp) * z[1];  // T_{-2a} Z^{+,2}
    State<6> d{};
    const double kk = w.norm_sq > 0 ? m.k / w.norm_sq : 0.0;
    const Complex pp = kk * (z[1] + gp), pm = kk * (z[4] + gm);
    for (int i = 0; i < 3; ++i) {
      d[i] = w.kt[i] * pp;
      d[3 + i] = w.kt[i] * pm;
    }
    d[0] -= gp;
    d[3] -= gm;
    return d;
  };
  auto project = [&](double t, State<6>& z) {
    const auto w = moving_wave_vector(m, t);
    for (int s = 0; s < 2; ++s) {
      const Vec3 v = leray_project({z[3 * s], z[3 * s + 1], z[3 * s + 2]}, w);
      for (int i = 0; i < 3; ++i) z[3 * s + i] = v[i];
    }
  };
  return integrate<6>("linear_full", rhs, init, t0, t1, resolved_dt(dt, relative_frequency(p)), record_stride,
                      project, viscous_factor(p.nu, m, t0));
}

ModeTrajectory evolve_F2_pair(const LinParams& p, const std::array<Complex, 2>& init, double t0,
                              double t1, double dt, F2Options opt, int record_stride) {
  const ModeIndex m = p.mode;
  if (m.k == 0) throw ConfigError("F2 system needs k != 0");
  const double a = p.alpha, sig = p.sigma;
  auto rhs = [&](double t, const State<2>& f) {
    const auto w = moving_wave_vector(m, t);
    const double S = m.k * w.kt[1] / w.norm_sq;
    State<2> d{-S * f[0], -S * f[1]};
    if (opt.oscillation) {
      const Complex tp = transport_phase(2.0 * a, m, sig, t);
      d[0] += S * tp * f[1];
      d[1] += S * std::conj(tp) * f[0];
    }
    return d;
  };
  const double freq = opt.oscillation ? relative_frequency(p) : 0.0;
  return integrate<2>("F2", rhs, init, t0, t1, resolved_dt(dt, freq), record_stride, no_post,
                      viscous_factor(p.nu, m, t0));
}

ModeTrajectory evolve_F13(const LinParams& p, int j, const std::array<Complex, 2>& init,
                          const ModeTrajectory* companion, double t0, double t1, double dt, F13Options opt,
                          int record_stride) {
  const ModeIndex m = p.mode;
  if (m.k == 0) throw ConfigError("F13 system needs k != 0");
  if (j != 1 && j != 3) throw ConfigError("F13 component must be 1 or 3");
  State<4> y{init[0], init[1], 0.0, 0.0};
  if (opt.forcing) {
    if (companion == nullptr || companion->system != "F2" || companion->size() == 0) {
      throw ConfigError("F13 system with forcing needs the companion F2 trajectory");
    }
    if (std::abs(companion->times.front() - t0) > 1e-12 || companion->times.back() < t1 - 1e-9) {
      throw ConfigError("companion F2 trajectory does not cover the requested span");
    }
    y[2] = companion->values.front()[0];
    y[3] = companion->values.front()[1];
  }
  const double a = p.alpha, sig = p.sigma;
  auto rhs = [&](double t, const State<4>& f) {
    const auto w = moving_wave_vector(m, t);
    const double S = m.k * w.kt[1] / w.norm_sq;
    const double P = m.k * w.kt[j - 1] / w.norm_sq;
    const Complex tp = opt.oscillation ? transport_phase(2.0 * a, m, sig, t) : Complex(1.0);
    const Complex tm = std::conj(tp);
    State<4> d{-2.0 * S * f[0], -2.0 * S * f[1], -S * f[2] + S * tp * f[3], -S * f[3] + S * tm * f[2]};
    if (opt.forcing) {
      d[0] += P * (f[2] + tp * f[3]);
      d[1] += P * (f[3] + tm * f[2]);
      if (j == 1) {
        d[0] -= tp * f[3];
        d[1] -= tm * f[2];
      }
    }
    return d;
  };
  const double freq = opt.oscillation ? relative_frequency(p) : 0.0;
  return integrate<4>(j == 1 ? "F1" : "F3", rhs, y, t0, t1, resolved_dt(dt, freq), record_stride, no_post,
                      viscous_factor(p.nu, m, t0));
}

ModeTrajectory evolve_model(double omega, const std::array<Complex, 2>& init, double t0, double t1, double dt,
                            bool coupled, int record_stride) {
  if (t0 < 1.0) throw ConfigError("model equation is posed for t >= 1 (degenerate 1/t)");
  auto rhs = [&](double t, const State<2>& f) {
    State<2> d{f[0] / t, f[1] / t};
    if (coupled) {
      const Complex ph = std::polar(1.0, omega * t);
      d[0] += ph * f[1] / t;
      d[1] += std::conj(ph) * f[0] / t;
    }
    return d;
  };
  return integrate<2>("model", rhs, init, t0, t1, resolved_dt(dt, coupled ? omega : 0.0), record_stride,
                      no_post, [](double) { return 1.0; });
}

double enhanced_dissipation_factor(double nu, const ModeIndex& mode, double t) {
  return std::exp(-nu * sheared_laplacian_integral(mode, t));
}

double fit_power_law(const std::vector<double>& t, const std::vector<double>& y, double t_lo, double t_hi) {
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  int n = 0;
  for (size_t i = 0; i < t.size(); ++i) {
    if (t[i] < t_lo || t[i] > t_hi || !(y[i] > 0)) continue;
    const double x = std::log(t[i]), v = std::log(y[i]);
    sx += x;
    sy += v;
    sxx += x * x;
    sxy += x * v;
    ++n;
  }
  if (n < 2) throw ConfigError("power-law fit needs at least two samples in the window");
  return (n * sxy - sx * sy) / (n * sxx - sx * sx);
}

}  // namespace cmhd::linear
