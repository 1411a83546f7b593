#include <algorithm>
#include <cmath>
#include <random>

#include "cmhd/mhd_solver.hpp"
#include "cmhd/symbols.hpp"

namespace cmhd::solver {

namespace {

double sobolev_weight(const ModeIndex& m, double s) {
  const double l1 = std::abs(double(m.k)) + std::abs(m.eta) + std::abs(double(m.l));
  return std::pow(1.0 + l1 * l1, 0.5 * s);
}

bool in_envelope(const InitSpec& spec, const ModeIndex& m) {
  if (spec.zero_mode_only && m.k != 0) return false;
  if (spec.shape == "band") {
    return std::abs(m.k) <= spec.kmax && std::abs(m.eta) <= spec.eta_max + 1e-12 && std::abs(m.l) <= spec.lmax;
  }
  return true;
}

double envelope(const InitSpec& spec, const ModeIndex& m) {
  if (spec.shape == "gaussian") {
    const double r2 = double(m.k) * m.k + m.eta * m.eta + double(m.l) * m.l;
    return std::exp(-r2 / (2.0 * spec.width * spec.width));
  }
  return 1.0;
}

}  // namespace

ElsasserState initial_data(const Grid& grid, const InitSpec& spec, int norm_index) {
  if (!(spec.epsilon >= 0.0)) throw ConfigError("initial data: epsilon must be >= 0");
  if (spec.shape != "band" && spec.shape != "gaussian") {
    throw ConfigError("initial data: unknown spectrum shape '" + spec.shape + "'");
  }
  if (norm_index < 0) throw ConfigError("initial data: norm index must be >= 0");
  ElsasserState s = make_zero_state(grid);
  if (spec.epsilon == 0.0) return s;

  std::mt19937_64 rng(spec.seed);
  std::normal_distribution<double> gauss;
  VectorField u = make_vector_field(grid, "u"), b = make_vector_field(grid, "b");
  const int cx = grid.cut_x, cy = grid.cut_y, cz = grid.cut_z;
  for (int k = -cx; k <= cx; ++k)
    for (int j = -cy; j <= cy; ++j)
      for (int l = 0; l <= cz; ++l) {
        if (l == 0 && (k < 0 || (k == 0 && j <= 0))) continue;  // conjugate partner or mean
        const ModeIndex m{k, j / grid.ly, l};
        // Draws happen for every retained mode so the sequence is shape independent.
        Vec3 vu, vb;
        for (auto& c : vu) c = {gauss(rng), gauss(rng)};
        for (auto& c : vb) c = {gauss(rng), gauss(rng)};
        if (!in_envelope(spec, m)) continue;
        const auto w = moving_wave_vector(m, 0.0);
        const double amp = envelope(spec, m);
        vu = leray_project(vu, w);
        vb = leray_project(vb, w);
        for (int c = 0; c < 3; ++c) {
          u[c].set(k, j, l, amp * vu[c]);
          b[c].set(k, j, l, spec.b_fraction * amp * vb[c]);
        }
      }

  double norm2 = 0.0;
  for (int ix = 0; ix < grid.nx; ++ix)
    for (int iy = 0; iy < grid.ny; ++iy)
      for (int iz = 0; iz < grid.nzh(); ++iz) {
        const size_t i = grid.index(ix, iy, iz);
        double c2 = 0.0;
        for (int c = 0; c < 3; ++c) c2 += std::norm(u[c][i]) + std::norm(b[c][i]);
        if (c2 == 0.0) continue;
        const double sw = sobolev_weight(grid.mode(ix, iy, iz), norm_index);
        norm2 += half_space_weight(grid, iz) * sw * sw * c2;
      }
  if (norm2 == 0.0) throw ConfigError("initial data: spectrum lies entirely outside the retained grid band");
  const double scale = spec.epsilon / std::sqrt(norm2);
  for (int c = 0; c < 3; ++c)
    for (size_t i = 0; i < grid.spectral_size(); ++i) {
      s.zp[c][i] = scale * (u[c][i] - b[c][i]);
      s.zm[c][i] = scale * (u[c][i] + b[c][i]);
    }
  return s;
}

// ---------------------------------------------------------------------------

struct Solver::Impl {
  Grid g;
  diag::FlowParams p;
  SolverOptions opt;
  Transform tr;
  std::vector<double> omega_xz;  // sigma k + l per (ix, iz)
  std::vector<ModeIndex> modes;
  // Work buffers.
  std::array<std::vector<double>, 3> zp_phys, a_phys;
  std::vector<double> prod;
  std::array<std::array<SpectralField, 3>, 3> P;
  VectorField A, np, nm;
  ElsasserState k1, k2, k3, k4, y;
  std::vector<double> e_half, e_full;

  Impl(const Grid& grid, const diag::FlowParams& params, SolverOptions o)
      : g(grid), p(params), opt(std::move(o)), tr(grid) {
    omega_xz.resize(size_t(g.nx) * g.nzh());
    for (int ix = 0; ix < g.nx; ++ix)
      for (int iz = 0; iz < g.nzh(); ++iz) omega_xz[size_t(ix) * g.nzh() + iz] = p.sigma * g.kx(ix) + iz;
    modes.resize(g.spectral_size());
    for (int ix = 0; ix < g.nx; ++ix)
      for (int iy = 0; iy < g.ny; ++iy)
        for (int iz = 0; iz < g.nzh(); ++iz) modes[g.index(ix, iy, iz)] = g.mode(ix, iy, iz);
    for (auto& v : zp_phys) v.resize(g.physical_size());
    for (auto& v : a_phys) v.resize(g.physical_size());
    prod.resize(g.physical_size());
    for (auto& row : P)
      for (auto& f : row) f = SpectralField(g);
    A = make_vector_field(g, "A");
    np = make_vector_field(g, "N+");
    nm = make_vector_field(g, "N-");
    k1 = k2 = k3 = k4 = y = make_zero_state(g);
    e_half.resize(g.spectral_size());
    e_full.resize(g.spectral_size());
  }

  Complex phase(size_t idx_xz, double a, double t) const { return std::polar(1.0, a * omega_xz[idx_xz] * t); }

  // T_{a}^t applied into `out`.
  void transport(const VectorField& in, VectorField& out, double a, double t) const {
    const size_t nzh = g.nzh();
    for (int ix = 0; ix < g.nx; ++ix)
      for (size_t iz = 0; iz < nzh; ++iz) {
        const Complex ph = phase(size_t(ix) * nzh + iz, a, t);
        for (int iy = 0; iy < g.ny; ++iy) {
          const size_t i = g.index(ix, iy, int(iz));
          for (int c = 0; c < 3; ++c) out[c][i] = in[c][i] * ph;
        }
      }
  }

  void nonlinear(const ElsasserState& s, VectorField& outp, VectorField& outm) {
    const double t = s.time, a2 = 2.0 * p.alpha;
    transport(s.zm, A, a2, t);
    for (int c = 0; c < 3; ++c) {
      tr.to_physical(s.zp[c], zp_phys[c]);
      tr.to_physical(A[c], a_phys[c]);
    }
    // P_ij = (T Z^-)_j Z^+_i. Then N+_i = d_j P_ij and N-_i = T_{-2a} d_j P_ji.
    for (int i = 0; i < 3; ++i)
      for (int j = 0; j < 3; ++j) {
        for (size_t n = 0; n < prod.size(); ++n) prod[n] = a_phys[j][n] * zp_phys[i][n];
        tr.to_spectral(prod, P[i][j]);
      }
    const size_t nzh = g.nzh();
    for (int ix = 0; ix < g.nx; ++ix)
      for (int iy = 0; iy < g.ny; ++iy)
        for (size_t iz = 0; iz < nzh; ++iz) {
          const size_t n = g.index(ix, iy, int(iz));
          if (!g.retained(ix, iy, int(iz))) {
            for (int c = 0; c < 3; ++c) outp[c][n] = outm[c][n] = 0.0;
            continue;
          }
          const auto w = moving_wave_vector(modes[n], t);
          const Complex back = phase(size_t(ix) * nzh + iz, -a2, t);
          for (int i = 0; i < 3; ++i) {
            Complex sp = 0.0, sm = 0.0;
            for (int j = 0; j < 3; ++j) {
              sp += w.kt[j] * P[i][j][n];
              sm += w.kt[j] * P[j][i][n];
            }
            outp[i][n] = Complex(0.0, 1.0) * sp;
            outm[i][n] = Complex(0.0, 1.0) * sm * back;
          }
        }
  }

  void rhs(const ElsasserState& s, ElsasserState& out) {
    const double t = s.time, a2 = 2.0 * p.alpha;
    if (opt.nonlinear) {
      nonlinear(s, np, nm);
    } else {
      for (int c = 0; c < 3; ++c) {
        np[c].fill(0.0);
        nm[c].fill(0.0);
      }
    }
    const size_t nzh = g.nzh();
    for (int ix = 0; ix < g.nx; ++ix)
      for (int iy = 0; iy < g.ny; ++iy)
        for (size_t iz = 0; iz < nzh; ++iz) {
          const size_t n = g.index(ix, iy, int(iz));
          const auto w = moving_wave_vector(modes[n], t);
          const Complex ph = phase(size_t(ix) * nzh + iz, a2, t);
          for (int sgn = 0; sgn < 2; ++sgn) {
            const VectorField& z = sgn == 0 ? s.zp : s.zm;
            const VectorField& zo = sgn == 0 ? s.zm : s.zp;
            const VectorField& nl = sgn == 0 ? np : nm;
            VectorField& o = sgn == 0 ? out.zp : out.zm;
            Vec3 r{-nl[0][n], -nl[1][n], -nl[2][n]};
            if (opt.lift_up) r[0] -= (sgn == 0 ? ph : std::conj(ph)) * zo[1][n];
            if (w.norm_sq == 0.0) {
              for (int c = 0; c < 3; ++c) o[c][n] = 0.0;
              continue;
            }
            const Vec3 pr = leray_project(r, w);
            const Complex frame = double(modes[n].k) * z[1][n] / w.norm_sq;
            for (int c = 0; c < 3; ++c) o[c][n] = pr[c] + w.kt[c] * frame;
          }
        }
    if (opt.forcing) {
      ElsasserState f = make_zero_state(g, t);
      opt.forcing(t, f);
      for (int c = 0; c < 3; ++c)
        for (size_t n = 0; n < g.spectral_size(); ++n) {
          out.zp[c][n] += f.zp[c][n];
          out.zm[c][n] += f.zm[c][n];
        }
    }
    out.time = t;
  }

  // y = a * x0 + h * b * k, per mode scalars a, b (null = 1).
  void combine(ElsasserState& out, const ElsasserState& x0, const double* a, double h, const ElsasserState& k,
               const double* b, double t) {
    for (int c = 0; c < 3; ++c)
      for (size_t n = 0; n < g.spectral_size(); ++n) {
        const double fa = a ? a[n] : 1.0, fb = b ? b[n] : 1.0;
        out.zp[c][n] = fa * x0.zp[c][n] + h * fb * k.zp[c][n];
        out.zm[c][n] = fa * x0.zm[c][n] + h * fb * k.zm[c][n];
      }
    out.time = t;
  }

  void step(ElsasserState& s, double h) {
    if (!(h > 0.0)) throw ConfigError("step: dt must be positive");
    const double t = s.time;
    for (size_t n = 0; n < modes.size(); ++n) {
      const double i0 = sheared_laplacian_integral(modes[n], t);
      e_half[n] = std::exp(-p.nu * (sheared_laplacian_integral(modes[n], t + 0.5 * h) - i0));
      e_full[n] = std::exp(-p.nu * (sheared_laplacian_integral(modes[n], t + h) - i0));
    }
    std::vector<double> e_rest(modes.size());  // factor from t + h/2 to t + h
    for (size_t n = 0; n < modes.size(); ++n) e_rest[n] = e_full[n] / e_half[n];

    rhs(s, k1);
    combine(y, s, nullptr, 0.5 * h, k1, nullptr, t + 0.5 * h);
    for (int c = 0; c < 3; ++c)
      for (size_t n = 0; n < modes.size(); ++n) {
        y.zp[c][n] *= e_half[n];
        y.zm[c][n] *= e_half[n];
      }
    rhs(y, k2);
    combine(y, s, e_half.data(), 0.5 * h, k2, nullptr, t + 0.5 * h);
    rhs(y, k3);
    combine(y, s, e_full.data(), h, k3, e_rest.data(), t + h);
    rhs(y, k4);
    for (int c = 0; c < 3; ++c)
      for (size_t n = 0; n < modes.size(); ++n) {
        const double ef = e_full[n], er = e_rest[n];
        s.zp[c][n] = ef * s.zp[c][n] +
                     h / 6.0 * (ef * k1.zp[c][n] + 2.0 * er * (k2.zp[c][n] + k3.zp[c][n]) + k4.zp[c][n]);
        s.zm[c][n] = ef * s.zm[c][n] +
                     h / 6.0 * (ef * k1.zm[c][n] + 2.0 * er * (k2.zm[c][n] + k3.zm[c][n]) + k4.zm[c][n]);
      }
    s.time = t + h;
    leray_project_moving(s.zp, s.time);
    leray_project_moving(s.zm, s.time);
    for (int c = 0; c < 3; ++c) {
      s.zp[c].enforce_reality();
      s.zm[c].enforce_reality();
      dealias(s.zp[c]);
      dealias(s.zm[c]);
      s.zp[c].time = s.zm[c].time = s.time;
      for (size_t n = 0; n < modes.size(); ++n) {
        if (!std::isfinite(s.zp[c][n].real() + s.zp[c][n].imag() + s.zm[c][n].real() + s.zm[c][n].imag())) {
          throw BlowUpError("non-finite state at t = " + std::to_string(s.time), s.time);
        }
      }
    }
  }

  double suggest_dt(const ElsasserState& s, double dt_max, double cfl) {
    double zmax = 0.0;
    for (const VectorField* v : {&s.zp, &s.zm}) {
      for (int c = 0; c < 3; ++c) tr.to_physical((*v)[c], zp_phys[c]);
      for (size_t n = 0; n < prod.size(); ++n) {
        const double m2 = zp_phys[0][n] * zp_phys[0][n] + zp_phys[1][n] * zp_phys[1][n] +
                          zp_phys[2][n] * zp_phys[2][n];
        zmax = std::max(zmax, m2);
      }
    }
    zmax = std::sqrt(zmax);
    const double kmax = std::max({double(g.cut_x), double(g.cut_z),
                                  g.cut_y / g.ly + g.cut_x * std::abs(s.time)});
    double dt = std::min(dt_max, 0.1 / (1.0 + 2.0 * p.alpha));
    if (zmax * kmax > 0.0) dt = std::min(dt, cfl / (zmax * kmax));
    return dt;
  }
};

Solver::Solver(const Grid& grid, const diag::FlowParams& p, SolverOptions opt)
    : impl_(std::make_unique<Impl>(grid, p, std::move(opt))) {}
Solver::~Solver() = default;

void Solver::nonlinear_term(const ElsasserState& s, VectorField& np, VectorField& nm) { impl_->nonlinear(s, np, nm); }
void Solver::rhs(const ElsasserState& s, ElsasserState& out) { impl_->rhs(s, out); }
void Solver::step(ElsasserState& s, double dt) { impl_->step(s, dt); }
double Solver::suggest_dt(const ElsasserState& s, double dt_max, double cfl) {
  return impl_->suggest_dt(s, dt_max, cfl);
}
const Grid& Solver::grid() const { return impl_->g; }

}  // namespace cmhd::solver
