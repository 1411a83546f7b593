#include "cmhd/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <limits>
#include <numbers>
#include <sstream>

#include "cmhd/symbols.hpp"
#include "cmhd/transform.hpp"

namespace cmhd::diag {

using weights::WeightName;

namespace {

double japanese(double x) { return std::sqrt(1.0 + x * x); }

bool in_part(XPart part, int k) {
  return part == XPart::all || (part == XPart::zero ? k == 0 : k != 0);
}

template <class F>
void for_each_mode(const Grid& g, F&& f) {
  for (int ix = 0; ix < g.nx; ++ix)
    for (int iy = 0; iy < g.ny; ++iy)
      for (int iz = 0; iz < g.nzh(); ++iz) f(g.index(ix, iy, iz), g.mode(ix, iy, iz), half_space_weight(g, iz));
}

// a -> T_{a}^t applied to a copy.
VectorField transported(const VectorField& v, double a, double sigma, double t) {
  VectorField out = v;
  apply_transport(out, a, sigma, t);
  return out;
}

SpectralField laplacian_L(const SpectralField& f, double t) {
  SpectralField out = f;
  const Grid& g = f.grid();
  for_each_mode(g, [&](size_t i, const ModeIndex& m, double) { out[i] *= -moving_wave_vector(m, t).norm_sq; });
  return out;
}

VectorField laplacian_L(const VectorField& v, double t) {
  return {laplacian_L(v[0], t), laplacian_L(v[1], t), laplacian_L(v[2], t)};
}

SpectralField derivative_L(const SpectralField& f, int dir, double t) {
  SpectralField out = f;
  const Grid& g = f.grid();
  for_each_mode(g, [&](size_t i, const ModeIndex& m, double) {
    out[i] *= Complex(0.0, moving_wave_vector(m, t).kt[dir]);
  });
  return out;
}

double symbol_factor(Symbol s, const ModeIndex& m) {
  const double kl = double(m.k) * m.k + double(m.l) * m.l;
  switch (s) {
    case Symbol::grad_xz:
      return std::sqrt(kl);
    case Symbol::lap_xz:
      return kl;
    case Symbol::none:
      break;
  }
  return 1.0;
}

double sobolev_factor(const ModeIndex& m, double s, bool original, double t) {
  const double eta = original ? m.eta - m.k * t : m.eta;
  const double l1 = std::abs(double(m.k)) + std::abs(eta) + std::abs(double(m.l));
  return std::pow(1.0 + l1 * l1, 0.5 * s);
}

}  // namespace

RegularityLadder RegularityLadder::from_n(int n, int N) {
  if (n < 1) throw ConfigError("regularity ladder needs n >= 1");
  if (N < 0) N = 11 + 3 * n;
  if (N < 11 + 3 * n) throw ConfigError("regularity ladder needs N >= 11 + 3n");
  RegularityLadder r;
  r.n = n;
  r.N = N;
  r.Nprime = N - 4 - 2 * n;
  r.Nsecond = N - 9 - 3 * n;
  r.Ntilde = r.Nprime + 2 + n;
  return r;
}

DerivedUnknowns derived_unknowns(const ElsasserState& state, const FlowParams& p) {
  const double t = state.time;
  const VectorField wp = transported(state.zp, -p.alpha, p.sigma, t);
  const VectorField wm = transported(state.zm, p.alpha, p.sigma, t);
  const Grid& g = state.grid();
  DerivedUnknowns d;
  d.t = t;
  d.U = make_vector_field(g, "U", t);
  d.B = make_vector_field(g, "B", t);
  for (int c = 0; c < 3; ++c) {
    for (size_t i = 0; i < g.spectral_size(); ++i) {
      d.U[c][i] = 0.5 * (wp[c][i] + wm[c][i]);
      d.B[c][i] = 0.5 * (wm[c][i] - wp[c][i]);
    }
  }
  d.Fp = laplacian_L(state.zp, t);
  d.Fm = laplacian_L(state.zm, t);
  d.Q = laplacian_L(d.U, t);
  d.H = laplacian_L(d.B, t);
  return d;
}

double weighted_sobolev_norm(const std::vector<const SpectralField*>& fields, const NormSpec& spec,
                             const weights::MultiplierParams& mp, double t) {
  if (spec.s < 0) throw ConfigError("Sobolev index must be >= 0");
  if (fields.empty()) return 0.0;
  const Grid& g = fields.front()->grid();
  double sum = 0.0;
  for_each_mode(g, [&](size_t i, const ModeIndex& m, double hw) {
    if (!in_part(spec.part, m.k)) return;
    double c2 = 0.0;
    for (const auto* f : fields) c2 += std::norm((*f)[i]);
    if (c2 == 0.0) return;
    const double w = spec.weight == WeightName::unit ? 1.0 : weights::eval_weight(mp, t, m, spec.weight);
    const double f = w * symbol_factor(spec.symbol, m) * sobolev_factor(m, spec.s, spec.original_frame, t);
    sum += hw * f * f * c2;
  });
  return std::sqrt(sum);
}

double weighted_sobolev_norm(const SpectralField& field, const NormSpec& spec, const weights::MultiplierParams& mp,
                             double t) {
  return weighted_sobolev_norm(std::vector<const SpectralField*>{&field}, spec, mp, t);
}

double tail_fraction(const ElsasserState& state) {
  const Grid& g = state.grid();
  double total = 0.0, tail = 0.0;
  for (int ix = 0; ix < g.nx; ++ix)
    for (int iy = 0; iy < g.ny; ++iy)
      for (int iz = 0; iz < g.nzh(); ++iz) {
        const size_t i = g.index(ix, iy, iz);
        double e = 0.0;
        for (int c = 0; c < 3; ++c) e += std::norm(state.zp[c][i]) + std::norm(state.zm[c][i]);
        if (e == 0.0) continue;
        e *= half_space_weight(g, iz);
        total += e;
        const double rx = g.cut_x ? std::abs(g.kx(ix)) / double(g.cut_x) : 0.0;
        const double ry = g.cut_y ? std::abs(g.jy(iy)) / double(g.cut_y) : 0.0;
        const double rz = g.cut_z ? iz / double(g.cut_z) : 0.0;
        if (std::max({rx, ry, rz}) > 2.0 / 3.0) tail += e;
      }
  return total > 0.0 ? tail / total : 0.0;
}

const std::vector<std::string>& DiagnosticsRecord::columns() {
  static const std::vector<std::string> c{"t",           "hn_F1_tilde", "hn_F3",         "hn_H2",   "hn_Q2",
                                          "hn_zero",     "int_F2_Ntil", "int_F2_Nprime", "low_F1",  "low_F3",
                                          "zero_ub",     "ub_low",      "ub_low_orig",   "damp_grad",
                                          "damp_route2", "ed_lap",      "energy",        "divergence",
                                          "tail"};
  return c;
}

std::vector<double> DiagnosticsRecord::values() const {
  return {t,       hn_F1_tilde, hn_F3,       hn_H2,     hn_Q2,       hn_zero, int_F2_Ntil,
          int_F2_Nprime, low_F1, low_F3, zero_ub, ub_low, ub_low_orig, damp_grad,
          damp_route2, ed_lap, energy, divergence, tail};
}

DiagnosticsRecord record(const ElsasserState& state, const RegularityLadder& ladder, const FlowParams& p) {
  const double t = state.time;
  const auto d = derived_unknowns(state, p);
  const Grid& g = state.grid();
  const auto mp = p.multipliers();
  const double jt = japanese(t);

  // Squared partial sums, accumulated in one pass over the modes.
  double F1t_N[2]{}, F3_N[2]{}, F2_Nt[2]{}, F2_Np[2]{}, F1t_Ns[2]{}, F3_Ns[2]{};
  double H2 = 0, Q2 = 0, HQ0 = 0, ub0 = 0, ubl = 0, ublo = 0, dg = 0, r2Q = 0, r2H = 0, el = 0, en = 0;
  const VectorField* F[2] = {&d.Fp, &d.Fm};

  for_each_mode(g, [&](size_t i, const ModeIndex& m, double hw) {
    const double sN = sobolev_factor(m, ladder.N, false, t);
    const double sNs = sobolev_factor(m, ladder.Nsecond, false, t);
    double ub2 = 0;
    for (int c = 0; c < 3; ++c) ub2 += std::norm(d.U[c][i]) + std::norm(d.B[c][i]);
    en += hw * ub2;
    ubl += hw * sNs * sNs * ub2;
    const double so = sobolev_factor(m, ladder.Nsecond, true, t);
    ublo += hw * so * so * ub2;
    if (m.k == 0) {
      ub0 += hw * sN * sN * ub2;
      double hq = 0;
      for (int c = 0; c < 3; ++c) hq += std::norm(d.H[c][i]) + std::norm(d.Q[c][i]);
      HQ0 += hw * sN * sN * hq;
      return;
    }
    const auto ws = weights::eval_all(mp, t, m);
    const double A = ws.m * ws.M * ws.lambda, At = ws.mtilde * ws.M * ws.lambda, J = ws.mhalf * ws.M * ws.lambda;
    const double Jt = J / std::sqrt(jt);
    const double sNp = sobolev_factor(m, ladder.Nprime, false, t);
    const double sNt = sobolev_factor(m, ladder.Ntilde, false, t);
    const double sNpm1 = sobolev_factor(m, ladder.Nprime - 1, false, t);
    for (int s = 0; s < 2; ++s) {
      const double f1 = std::norm((*F[s])[0][i]), f2 = std::norm((*F[s])[1][i]), f3 = std::norm((*F[s])[2][i]);
      F1t_N[s] += hw * At * At * sN * sN * f1;
      F3_N[s] += hw * A * A * sN * sN * f3;
      F2_Nt[s] += hw * Jt * Jt * sNt * sNt * f2;
      F2_Np[s] += hw * J * J * sNp * sNp * f2;
      F1t_Ns[s] += hw * At * At * sNs * sNs * f1;
      F3_Ns[s] += hw * A * A * sNs * sNs * f3;
    }
    H2 += hw * A * A * sN * sN * std::norm(d.H[1][i]);
    Q2 += hw * A * A * sN * sN * std::norm(d.Q[1][i]);
    const double v2 = std::norm(d.U[1][i]) + std::norm(d.B[1][i]);
    const double kl = double(m.k) * m.k + double(m.l) * m.l;
    dg += hw * kl * sNpm1 * sNpm1 * v2;
    el += hw * kl * kl * sN * sN * v2;
    const double mM = ws.mhalf * ws.M;
    r2Q += hw * mM * mM * sNp * sNp * std::norm(d.Q[1][i]);
    r2H += hw * mM * mM * sNp * sNp * std::norm(d.H[1][i]);
  });

  auto pm = [](const double (&v)[2]) { return std::sqrt(std::max(v[0], v[1])); };
  DiagnosticsRecord r;
  r.t = t;
  r.hn_F1_tilde = pm(F1t_N);
  r.hn_F3 = pm(F3_N);
  r.hn_H2 = std::sqrt(H2);
  r.hn_Q2 = std::sqrt(Q2);
  r.hn_zero = std::sqrt(HQ0);
  r.int_F2_Ntil = pm(F2_Nt);
  r.int_F2_Nprime = pm(F2_Np);
  r.low_F1 = pm(F1t_Ns);
  r.low_F3 = pm(F3_Ns);
  r.zero_ub = std::sqrt(ub0);
  r.ub_low = std::sqrt(ubl);
  r.ub_low_orig = std::sqrt(ublo);
  r.damp_grad = jt * std::sqrt(dg);
  r.damp_route2 = std::sqrt(std::max(r2Q, r2H));
  r.ed_lap = std::sqrt(el);
  r.energy = en;
  r.divergence = std::max(max_divergence(state.zp, t), max_divergence(state.zm, t));
  r.tail = tail_fraction(state);
  return r;
}

// ---------------------------------------------------------------------------
// Original-frame map. Separable DFTs: y, shear phase e^{-i k y t}, x, then
// the real z synthesis.

namespace {

struct Twiddles {
  std::vector<Complex> x, y, z;  // e^{2 pi i m / n}
  explicit Twiddles(const Grid& g) {
    auto make = [](int n) {
      std::vector<Complex> w(n);
      for (int m = 0; m < n; ++m) w[m] = std::polar(1.0, 2.0 * std::numbers::pi * m / n);
      return w;
    };
    x = make(g.nx);
    y = make(g.ny);
    z = make(g.nz);
  }
};

std::vector<double> field_to_original(const SpectralField& f, double t, const Twiddles& tw) {
  const Grid& g = f.grid();
  const int nx = g.nx, ny = g.ny, nh = g.nzh();
  std::vector<Complex> G(size_t(nx) * ny * nh), H(size_t(nx) * ny * nh);
  auto at = [&](int a, int b, int c) { return (size_t(a) * ny + b) * nh + c; };
  for (int ix = 0; ix < nx; ++ix)
    for (int l = 0; l < nh; ++l)
      for (int iy = 0; iy < ny; ++iy) {
        Complex s = 0.0;
        for (int j = 0; j < ny; ++j) s += f[g.index(ix, j, l)] * tw.y[(size_t(g.jy(j) + ny) * iy) % ny];
        const double y = g.y(iy);
        G[at(ix, iy, l)] = s * std::polar(1.0, -g.kx(ix) * y * t);
      }
  for (int iy = 0; iy < ny; ++iy)
    for (int l = 0; l < nh; ++l)
      for (int px = 0; px < nx; ++px) {
        Complex s = 0.0;
        for (int ix = 0; ix < nx; ++ix) s += G[at(ix, iy, l)] * tw.x[(size_t(g.kx(ix) + nx) * px) % nx];
        H[at(px, iy, l)] = s;
      }
  std::vector<double> out(g.physical_size());
  for (int px = 0; px < nx; ++px)
    for (int iy = 0; iy < ny; ++iy)
      for (int pz = 0; pz < g.nz; ++pz) {
        double s = 0.0;
        for (int l = 0; l < nh; ++l) {
          s += half_space_weight(g, l) * (H[at(px, iy, l)] * tw.z[(size_t(l) * pz) % g.nz]).real();
        }
        out[(size_t(px) * ny + iy) * g.nz + pz] = s;
      }
  return out;
}

SpectralField field_from_original(const Grid& g, const std::vector<double>& u, double t, const Twiddles& tw) {
  const int nx = g.nx, ny = g.ny, nh = g.nzh();
  if (u.size() != g.physical_size()) throw ConfigError("original-frame field does not match grid");
  std::vector<Complex> H(size_t(nx) * ny * nh), G(size_t(nx) * ny * nh);
  auto at = [&](int a, int b, int c) { return (size_t(a) * ny + b) * nh + c; };
  for (int px = 0; px < nx; ++px)
    for (int iy = 0; iy < ny; ++iy)
      for (int l = 0; l < nh; ++l) {
        Complex s = 0.0;
        for (int pz = 0; pz < g.nz; ++pz) {
          s += u[(size_t(px) * ny + iy) * g.nz + pz] * std::conj(tw.z[(size_t(l) * pz) % g.nz]);
        }
        H[at(px, iy, l)] = s / double(g.nz);
      }
  for (int iy = 0; iy < ny; ++iy)
    for (int l = 0; l < nh; ++l)
      for (int ix = 0; ix < nx; ++ix) {
        Complex s = 0.0;
        for (int px = 0; px < nx; ++px) s += H[at(px, iy, l)] * std::conj(tw.x[(size_t(g.kx(ix) + nx) * px) % nx]);
        G[at(ix, iy, l)] = s / double(nx) * std::polar(1.0, g.kx(ix) * g.y(iy) * t);
      }
  SpectralField f(g);
  for (int ix = 0; ix < nx; ++ix)
    for (int l = 0; l < nh; ++l)
      for (int j = 0; j < ny; ++j) {
        Complex s = 0.0;
        for (int iy = 0; iy < ny; ++iy) s += G[at(ix, iy, l)] * std::conj(tw.y[(size_t(g.jy(j) + ny) * iy) % ny]);
        f[g.index(ix, j, l)] = s / double(ny);
      }
  return f;
}

}  // namespace

std::array<std::vector<double>, 6> map_to_original_frame(const ElsasserState& state, const FlowParams& p) {
  const auto d = derived_unknowns(state, p);
  const Twiddles tw(state.grid());
  std::array<std::vector<double>, 6> out;
  for (int c = 0; c < 3; ++c) {
    out[c] = field_to_original(d.U[c], state.time, tw);
    out[3 + c] = field_to_original(d.B[c], state.time, tw);
  }
  return out;
}

ElsasserState map_from_original_frame(const Grid& grid, const std::array<std::vector<double>, 6>& ub, double t,
                                      const FlowParams& p) {
  const Twiddles tw(grid);
  ElsasserState s = make_zero_state(grid, t);
  for (int c = 0; c < 3; ++c) {
    const SpectralField U = field_from_original(grid, ub[c], t, tw);
    const SpectralField B = field_from_original(grid, ub[3 + c], t, tw);
    for (size_t i = 0; i < grid.spectral_size(); ++i) {
      s.zp[c][i] = U[i] - B[i];
      s.zm[c][i] = U[i] + B[i];
    }
  }
  apply_transport(s.zp, p.alpha, p.sigma, t);
  apply_transport(s.zm, -p.alpha, p.sigma, t);
  for (int c = 0; c < 3; ++c) {
    s.zp[c].time = s.zm[c].time = t;
  }
  return s;
}

// ---------------------------------------------------------------------------
// F^{pm,2} right-hand side, assembled term by term from physical products.

namespace {

struct Physical {
  Transform& tr;
  std::vector<double> operator()(const SpectralField& f) const { return tr.to_physical(f); }
};

SpectralField product_sum(Transform& tr, const Grid& g,
                          const std::vector<std::pair<const std::vector<double>*, const std::vector<double>*>>& pairs,
                          double scale) {
  std::vector<double> acc(g.physical_size(), 0.0);
  for (const auto& [a, b] : pairs)
    for (size_t i = 0; i < acc.size(); ++i) acc[i] += (*a)[i] * (*b)[i];
  for (auto& v : acc) v *= scale;
  SpectralField out(g);
  tr.to_spectral(acc, out);
  dealias(out);
  return out;
}

struct Reform2Parts {
  SpectralField linear, nonlinear;
};

Reform2Parts reform2_parts(const ElsasserState& state, const FlowParams& p, int sign) {
  const Grid& g = state.grid();
  const double t = state.time;
  Transform tr(g);
  Physical phys{tr};
  const VectorField& zs = state.component(sign);
  const VectorField A = transported(state.component(-sign), sign * 2.0 * p.alpha, p.sigma, t);
  const VectorField FA = laplacian_L(A, t);  // T F^{mp}
  const SpectralField F2 = laplacian_L(zs[1], t);

  std::array<std::vector<double>, 3> a, fa, dF2, dZ2;
  std::array<std::array<std::vector<double>, 3>, 3> dA, dZ, ddZ2;  // dA[i][j] = d_i A_j
  for (int j = 0; j < 3; ++j) {
    a[j] = phys(A[j]);
    fa[j] = phys(FA[j]);
    dF2[j] = phys(derivative_L(F2, j, t));
    dZ2[j] = phys(derivative_L(zs[1], j, t));
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      dA[i][j] = phys(derivative_L(A[j], i, t));
      dZ[i][j] = phys(derivative_L(zs[j], i, t));
      if (j >= i) ddZ2[i][j] = phys(derivative_L(derivative_L(zs[1], i, t), j, t));
    }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < i; ++j) ddZ2[i][j] = ddZ2[j][i];

  std::vector<std::pair<const std::vector<double>*, const std::vector<double>*>> transport, stretch, pres;
  for (int j = 0; j < 3; ++j) {
    transport.emplace_back(&a[j], &dF2[j]);
    transport.emplace_back(&fa[j], &dZ2[j]);
  }
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      stretch.emplace_back(&dA[i][j], &ddZ2[i][j]);
      pres.emplace_back(&dA[j][i], &dZ[i][j]);
    }
  SpectralField nl = product_sum(tr, g, transport, -1.0);
  const SpectralField st = product_sum(tr, g, stretch, -2.0);
  SpectralField pr = product_sum(tr, g, pres, 1.0);
  for_each_mode(g, [&](size_t i, const ModeIndex& m, double) {
    const auto w = moving_wave_vector(m, t);
    nl[i] += st[i] + Complex(0.0, w.kt[1]) * pr[i];
  });

  SpectralField lin(g);
  const SpectralField F2other = laplacian_L(A[1], t);  // T F^{mp,2}
  for_each_mode(g, [&](size_t i, const ModeIndex& m, double) {
    const auto w = moving_wave_vector(m, t);
    if (w.norm_sq == 0.0) return;
    const double S = m.k * w.kt[1] / w.norm_sq;
    lin[i] = -S * F2[i] + S * F2other[i] - p.nu * w.norm_sq * F2[i];
  });
  return {lin, nl};
}

double l2(const SpectralField& f) { return std::sqrt(energy(f)); }

}  // namespace

std::array<SpectralField, 2> reform2_rhs(const ElsasserState& state, const FlowParams& p) {
  std::array<SpectralField, 2> out;
  for (int s = 0; s < 2; ++s) {
    auto parts = reform2_parts(state, p, s == 0 ? 1 : -1);
    for (size_t i = 0; i < parts.linear.size(); ++i) parts.linear[i] += parts.nonlinear[i];
    out[s] = std::move(parts.linear);
  }
  return out;
}

ResidualReport reform2_residual(const ElsasserState& before, const ElsasserState& mid, const ElsasserState& after,
                                const FlowParams& p) {
  const double h = mid.time - before.time;
  if (!(h > 0.0) || std::abs((after.time - mid.time) - h) > 1e-12 * std::max(1.0, mid.time)) {
    throw ConfigError("reform2 residual needs three equally spaced states");
  }
  double num = 0, den = 0, nl2 = 0, rhs2 = 0;
  for (int s = 0; s < 2; ++s) {
    const int sign = s == 0 ? 1 : -1;
    const auto parts = reform2_parts(mid, p, sign);
    const SpectralField fb = laplacian_L(before.component(sign)[1], before.time);
    const SpectralField fa = laplacian_L(after.component(sign)[1], after.time);
    SpectralField diff(mid.grid()), fd(mid.grid()), rhs(mid.grid());
    for (size_t i = 0; i < fd.size(); ++i) {
      fd[i] = (fa[i] - fb[i]) / (2.0 * h);
      rhs[i] = parts.linear[i] + parts.nonlinear[i];
      diff[i] = fd[i] - rhs[i];
    }
    num += energy(diff);
    den += energy(fd);
    nl2 += energy(parts.nonlinear);
    rhs2 += energy(rhs);
  }
  ResidualReport r;
  r.residual = den > 0 ? std::sqrt(num / den) : std::sqrt(num);
  r.nonlinear_share = rhs2 > 0 ? std::sqrt(nl2 / rhs2) : 0.0;
  return r;
}

// ---------------------------------------------------------------------------

void write_csv(const std::vector<DiagnosticsRecord>& series, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  const auto& cols = DiagnosticsRecord::columns();
  for (size_t c = 0; c < cols.size(); ++c) out << (c ? "," : "") << cols[c];
  out << '\n' << std::setprecision(17);
  for (const auto& r : series) {
    const auto v = r.values();
    for (size_t c = 0; c < v.size(); ++c) out << (c ? "," : "") << v[c];
    out << '\n';
  }
}

std::vector<DiagnosticsRecord> read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::string line;
  std::getline(in, line);
  std::vector<std::string> header;
  {
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) header.push_back(cell);
  }
  if (header != DiagnosticsRecord::columns()) throw ConfigError(path + ": unexpected diagnostics header");
  std::vector<DiagnosticsRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ss(line);
    std::string cell;
    std::vector<double> v;
    while (std::getline(ss, cell, ',')) v.push_back(std::stod(cell));
    if (v.size() != header.size()) throw ConfigError(path + ": malformed row");
    DiagnosticsRecord r;
    double* fields[] = {&r.t,           &r.hn_F1_tilde, &r.hn_F3,     &r.hn_H2,     &r.hn_Q2,
                        &r.hn_zero,     &r.int_F2_Ntil, &r.int_F2_Nprime, &r.low_F1, &r.low_F3,
                        &r.zero_ub,     &r.ub_low,      &r.ub_low_orig,  &r.damp_grad,
                        &r.damp_route2, &r.ed_lap,      &r.energy,       &r.divergence,
                        &r.tail};
    for (size_t c = 0; c < v.size(); ++c) *fields[c] = v[c];
    out.push_back(r);
  }
  return out;
}

double efolding_time(const std::vector<double>& t, const std::vector<double>& values) {
  double peak = 0.0;
  for (size_t i = 0; i < values.size(); ++i) {
    const double target = peak * std::exp(-1.0);
    if (i > 0 && peak > 0.0 && values[i] <= target) {
      const double a = values[i - 1], b = values[i];
      if (a <= target || !(a > 0) || !(b > 0)) return t[i];
      const double f = std::log(a / target) / std::log(a / b);
      return t[i - 1] + f * (t[i] - t[i - 1]);
    }
    peak = std::max(peak, values[i]);
  }
  return std::numeric_limits<double>::quiet_NaN();
}

nlohmann::json summary_json(const std::vector<DiagnosticsRecord>& series) {
  nlohmann::json j;
  j["records"] = series.size();
  if (series.empty()) return j;
  const auto& cols = DiagnosticsRecord::columns();
  nlohmann::json peak, last;
  for (size_t c = 1; c < cols.size(); ++c) {
    double m = 0;
    for (const auto& r : series) m = std::max(m, r.values()[c]);
    peak[cols[c]] = m;
    last[cols[c]] = series.back().values()[c];
  }
  j["peak"] = peak;
  j["final"] = last;
  j["t_final"] = series.back().t;
  std::vector<double> t, ed, edc;
  for (const auto& r : series) {
    t.push_back(r.t);
    ed.push_back(r.ed_lap);
    edc.push_back(r.ed_lap * japanese(r.t));
  }
  auto num = [](double v) { return std::isfinite(v) ? nlohmann::json(v) : nlohmann::json(nullptr); };
  j["efolding_ed_lap"] = num(efolding_time(t, ed));
  j["efolding_ed_lap_compensated"] = num(efolding_time(t, edc));
  return j;
}

}  // namespace cmhd::diag
