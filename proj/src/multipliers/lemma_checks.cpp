#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "cmhd/multipliers.hpp"
#include "cmhd/symbols.hpp"

namespace cmhd::weights {

std::vector<double> SampleSpec::etas() const {
  std::vector<double> out(eta_points);
  for (int i = 0; i < eta_points; ++i) {
    out[i] = eta_points == 1 ? 0.0 : -eta_max + 2.0 * eta_max * i / (eta_points - 1);
  }
  return out;
}

std::vector<double> SampleSpec::times(double nu) const {
  std::vector<double> out{0.0};
  const double t_max = t_factor / std::cbrt(nu);
  const double a = std::log(t_min), b = std::log(t_max);
  for (int i = 0; i < t_points; ++i) {
    out.push_back(std::exp(t_points == 1 ? b : a + (b - a) * i / (t_points - 1)));
  }
  return out;
}

bool StretchReport::passed() const {
  return std::all_of(results.begin(), results.end(), [](const auto& r) { return r.passed; });
}

namespace {

double japanese_sq(double a) { return 1.0 + a * a; }

struct Tracker {
  InequalityResult r;
  Tracker(std::string name, std::string statement) {
    r.name = std::move(name);
    r.statement = std::move(statement);
    r.constant = -std::numeric_limits<double>::infinity();
  }
  void offer(double value, const SamplePoint& at) {
    ++r.samples;
    if (std::isnan(value)) value = std::numeric_limits<double>::infinity();
    if (value > r.constant) {
      r.constant = value;
      r.extremal = at;
    }
  }
  InequalityResult finish(bool ordering) {
    r.passed = ordering ? r.constant <= 1.0 + 1e-12 : std::isfinite(r.constant);
    return r;
  }
};

double l1_norm(int k, double eta, int l) { return std::abs(k) + std::abs(eta) + std::abs(l); }

}  // namespace

StretchReport verify_lemma_stretch(const MultiplierParams& p, const SampleSpec& spec) {
  validate(p);
  StretchReport report;
  report.params = p;
  Tracker order("mle1", "mtilde <= m <= 1");
  Tracker lapl("mlapl", "k^2 + l^2 <= C |k_t|^2 mtilde");
  Tracker trivcom("mtrivcom", "nu^{2/3} <= C m");
  Tracker trivcomt("mtrivcomt", "1/mtilde + 1/m <= C <t>^2");
  Tracker com("mcom", "mtilde(eta,l)/mtilde(eta',l') + m(eta,l)/m(eta',l') <= C (<eta-eta'>^2 + <l-l'>^2)");
  Tracker decay("mtildecay", "mtilde <= C |k,eta,l|^4 / <t>^2");

  const auto etas = spec.etas();
  const auto times = spec.times(p.nu);
  const int nl = 2 * spec.l_max + 1;
  const int ne = static_cast<int>(etas.size());
  const double nu23 = std::pow(p.nu, 2.0 / 3.0);

  // Denominators of the commutator check depend only on index differences.
  std::vector<double> den(static_cast<size_t>(2 * ne - 1) * (2 * nl - 1));
  const double d_eta = ne > 1 ? etas[1] - etas[0] : 0.0;
  for (int de = -(ne - 1); de <= ne - 1; ++de) {
    for (int dl = -(nl - 1); dl <= nl - 1; ++dl) {
      den[static_cast<size_t>(de + ne - 1) * (2 * nl - 1) + (dl + nl - 1)] =
          japanese_sq(de * d_eta) + japanese_sq(dl);
    }
  }

  std::vector<double> mv(ne * nl), mtv(ne * nl), inv_m(ne * nl), inv_mt(ne * nl);
  for (int k = -spec.k_max; k <= spec.k_max; ++k) {
    if (k == 0) continue;
    for (double t : times) {
      const double jt2 = japanese_sq(t);
      for (int ie = 0; ie < ne; ++ie) {
        for (int il = 0; il < nl; ++il) {
          const int l = il - spec.l_max;
          const ModeIndex mode{k, etas[ie], l};
          const double m = eval_m(p, t, mode);
          const double mt = eval_mtilde(p, t, mode);
          const SamplePoint at{k, etas[ie], l, t};
          order.offer(std::max(mt / m, m), at);
          const double kt2 = moving_wave_vector(mode, t).norm_sq;
          lapl.offer((double(k) * k + double(l) * l) / (kt2 * mt), at);
          trivcom.offer(nu23 / m, at);
          trivcomt.offer((1.0 / mt + 1.0 / m) / jt2, at);
          const double n1 = l1_norm(k, etas[ie], l);
          decay.offer(mt * jt2 / (n1 * n1 * n1 * n1), at);
          const int idx = ie * nl + il;
          mv[idx] = m;
          mtv[idx] = mt;
          inv_m[idx] = 1.0 / m;
          inv_mt[idx] = 1.0 / mt;
        }
      }
      // Commutator: all ordered pairs sharing k at this time.
      double best = -1.0;
      int bi = 0, bj = 0;
      for (int i = 0; i < ne * nl; ++i) {
        const int ie = i / nl, il = i % nl;
        for (int j = 0; j < ne * nl; ++j) {
          const int je = j / nl, jl = j % nl;
          const double d =
              den[static_cast<size_t>(ie - je + ne - 1) * (2 * nl - 1) + (il - jl + nl - 1)];
          const double v = (mtv[i] * inv_mt[j] + mv[i] * inv_m[j]) / d;
          if (v > best) {
            best = v;
            bi = i;
            bj = j;
          }
        }
      }
      com.r.samples += static_cast<long long>(ne) * nl * ne * nl - 1;
      com.offer(best, {k, etas[bi / nl], bi % nl - spec.l_max, t, etas[bj / nl], bj % nl - spec.l_max});
    }
  }

  report.results = {order.finish(true), lapl.finish(false),    trivcom.finish(false),
                    trivcomt.finish(false), com.finish(false), decay.finish(false)};
  return report;
}

GhostReport verify_ghost_enhanced(const std::vector<double>& nus, const SampleSpec& spec,
                                  double delta) {
  if (nus.size() < 2) throw ConfigError("ghost check needs at least two viscosities");
  const auto [lo, hi] = std::minmax_element(nus.begin(), nus.end());
  if (std::log10(*hi / *lo) < 3.0 - 1e-9) {
    throw ConfigError("ghost check viscosities must span at least three decades");
  }
  GhostReport report;
  report.m_floor = std::exp(-3.0 * std::numbers::pi);
  const auto etas = spec.etas();
  for (double nu : nus) {
    MultiplierParams p{nu, delta};
    validate(p);
    GhostNuResult res;
    res.nu = nu;
    res.ratio_min = std::numeric_limits<double>::infinity();
    res.m_min = std::numeric_limits<double>::infinity();
    const double nu16 = std::pow(nu, 1.0 / 6.0);
    const double nu12 = std::sqrt(nu);
    for (int k = -spec.k_max; k <= spec.k_max; ++k) {
      if (k == 0) continue;  // the lemma is stated for k != 0
      for (double t : spec.times(nu)) {
        for (double eta : etas) {
          for (int l = -spec.l_max; l <= spec.l_max; ++l) {
            const ModeIndex mode{k, eta, l};
            const double M3 = eval_ghost(p, t, mode, Ghost::M3);
            const double rate = ghost_rate(p, t, mode, Ghost::M3);
            const auto w = moving_wave_vector(mode, t);
            const double kt_l1 = std::abs(w.kt[0]) + std::abs(w.kt[1]) + std::abs(w.kt[2]);
            // sqrt(-M3' M3) = M3 sqrt(rate)
            const double ratio = (nu12 * kt_l1 + M3 * std::sqrt(rate)) / nu16;
            if (ratio < res.ratio_min) {
              res.ratio_min = ratio;
              res.ratio_argmin = {k, eta, l, t};
            }
            const double M = std::exp(log_ghost(p, t, mode, Ghost::M1) +
                                      log_ghost(p, t, mode, Ghost::M2) + std::log(M3));
            res.m_max = std::max(res.m_max, M);
            if (M < res.m_min) {
              res.m_min = M;
              res.m_argmin = {k, eta, l, t};
            }
          }
        }
      }
    }
    report.per_nu.push_back(res);
  }
  double rmin = std::numeric_limits<double>::infinity(), rmax = 0.0, mmin = 1.0, mmax = 0.0;
  for (const auto& r : report.per_nu) {
    rmin = std::min(rmin, r.ratio_min);
    rmax = std::max(rmax, r.ratio_min);
    mmin = std::min(mmin, r.m_min);
    mmax = std::max(mmax, r.m_max);
  }
  report.ratio_variation = (rmax - rmin) / rmax;
  report.ratio_stable = rmin > 0.0 && report.ratio_variation <= report.ratio_tolerance;
  report.m_bounded = mmin >= report.m_floor && mmax <= 1.0;
  return report;
}

namespace {

nlohmann::json point_json(const SamplePoint& s, bool pair) {
  nlohmann::json j{{"k", s.k}, {"eta", s.eta}, {"l", s.l}, {"t", s.t}};
  if (pair) {
    j["eta_prime"] = s.eta2;
    j["l_prime"] = s.l2;
  }
  return j;
}

}  // namespace

nlohmann::json to_json(const StretchReport& r) {
  nlohmann::json out;
  out["nu"] = r.params.nu;
  out["delta"] = r.params.delta;
  out["passed"] = r.passed();
  for (const auto& res : r.results) {
    out["inequalities"].push_back({{"name", res.name},
                                   {"statement", res.statement},
                                   {"constant", res.constant},
                                   {"samples", res.samples},
                                   {"passed", res.passed},
                                   {"extremal", point_json(res.extremal, res.name == "mcom")}});
  }
  return out;
}

nlohmann::json to_json(const GhostReport& r) {
  nlohmann::json out;
  for (const auto& n : r.per_nu) {
    out["per_nu"].push_back({{"nu", n.nu},
                             {"ratio_min", n.ratio_min},
                             {"ratio_argmin", point_json(n.ratio_argmin, false)},
                             {"M_min", n.m_min},
                             {"M_max", n.m_max},
                             {"M_argmin", point_json(n.m_argmin, false)}});
  }
  out["ratio_variation"] = r.ratio_variation;
  out["ratio_tolerance"] = r.ratio_tolerance;
  out["ratio_stable"] = r.ratio_stable;
  out["M_floor"] = r.m_floor;
  out["M_bounded"] = r.m_bounded;
  out["passed"] = r.passed();
  return out;
}

}  // namespace cmhd::weights
