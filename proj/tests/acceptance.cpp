// Acceptance run: one PASS/FAIL line per criterion. Optional arguments select
// criteria by name prefix.
#include <chrono>
#include <cmath>
#include <functional>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "cmhd/diophantine.hpp"
#include "cmhd/linear_modes.hpp"
#include "cmhd/mhd_solver.hpp"
#include "cmhd/multipliers.hpp"
#include "cmhd/symbols.hpp"
#include "solver_checks.hpp"

using namespace cmhd;

namespace {

struct Outcome {
  bool pass = true;
  std::ostringstream detail;

  void require(bool ok, const std::string& what) {
    if (!ok) {
      pass = false;
      detail << "[failed: " << what << "] ";
    }
  }
};

double seconds_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

void multipliers(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  for (double nu : {1e-2, 1e-4, 1e-6}) {
    const auto r = weights::verify_lemma_stretch({nu, 0.01});
    o.require(r.results.size() == 6, "six inequalities");
    for (const auto& x : r.results) {
      o.require(x.passed && std::isfinite(x.constant), x.name + " at nu=" + std::to_string(nu));
    }
    if (nu == 1e-6) {
      o.detail << "constants at nu=1e-6:";
      for (const auto& x : r.results) o.detail << ' ' << x.name << '=' << x.constant;
      o.detail << "; ";
    }
  }
  const auto g = weights::verify_ghost_enhanced({1e-2, 1e-4, 1e-6});
  double mmin = 1.0, mmax = 0.0;
  for (const auto& r : g.per_nu) {
    mmin = std::min(mmin, r.m_min);
    mmax = std::max(mmax, r.m_max);
  }
  o.detail << "M in [" << mmin << ", " << mmax << "], floor " << g.m_floor << "; ghost ratio min:";
  for (const auto& r : g.per_nu) o.detail << ' ' << r.ratio_min;
  o.detail << ", variation " << g.ratio_variation << " (limit " << g.ratio_tolerance << "); ";
  o.require(g.m_bounded, "exp(-3 pi) <= M <= 1");
  o.require(g.ratio_stable, "ghost ratio variation <= 10%");
  const double rt = seconds_since(t0);
  o.detail << "runtime " << rt << " s";
  o.require(rt < 60.0, "runtime < 1 min");
}

void check_suite(Outcome& o, const std::string& name, const std::vector<std::string>& checks) {
  linear::SuiteOptions opt;
  opt.dt = 1e-3;
  const auto r = linear::run_linear_suite(name, opt);
  for (const auto& want : checks) {
    bool found = false;
    for (const auto& c : r.checks) {
      if (c.name != want) continue;
      found = true;
      o.detail << c.name << " = " << c.value << " (tol " << c.tolerance << "); ";
      o.require(c.passed, c.name);
    }
    o.require(found, "check '" + want + "' present in suite " + name);
  }
}

void closed_form(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  check_suite(o, "liftup", {"zero-mode z+1 closed form", "zero-mode z-1 closed form", "alpha=0 lift-up u1 = -t"});
  check_suite(o, "orr", {"F2 envelope sqrt(|k_t|^2/|k_0|^2)", "F2 envelope, second member"});
  const double rt = seconds_since(t0);
  o.detail << "runtime " << rt << " s";
  o.require(rt < 60.0, "runtime of seconds");
}

void dichotomies(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  check_suite(o, "model", {"model exponent, omega = 0", "model exponent, omega = 10", "model exponent, omega = 100"});
  check_suite(o, "damping", {"F2 pair: sup |F|/t over inf |F|/t on [10,1e3]", "F1 growth exponent", "F3 growth exponent"});
  const double rt = seconds_since(t0);
  o.detail << "runtime " << rt << " s";
  o.require(rt < 60.0, "runtime < 1 min");
}

struct DissipationRuns {
  std::vector<double> nus{1e-3, 1e-4, 1e-5};
  std::vector<solver::RunResult> runs;
  double runtime = 0;
};

const DissipationRuns& dissipation_runs() {
  static DissipationRuns d = [] {
    DissipationRuns out;
    const auto t0 = std::chrono::steady_clock::now();
    for (double nu : out.nus) {
      solver::SolverConfig c;  // 32 x 64 x 32
      c.nu = nu;
      c.alpha = 1.0;
      c.init.epsilon = 0.01 * nu;
      c.t_end = 2.0 * std::cbrt(1.0 / nu);
      c.dt_max = 0.04;
      c.output_cadence = 0.25;
      out.runs.push_back(solver::run_simulation(c));
    }
    out.runtime = seconds_since(t0);
    return out;
  }();
  return d;
}

void enhanced_dissipation(Outcome& o) {
  const auto& d = dissipation_runs();
  std::vector<double> x, y;
  for (size_t i = 0; i < d.nus.size(); ++i) {
    const auto& r = d.runs[i];
    o.require(r.status == solver::RunStatus::completed, "run at nu=" + std::to_string(d.nus[i]) + " completed");
    std::vector<double> t, v;
    for (const auto& rec : r.series) {
      t.push_back(rec.t);
      v.push_back(std::sqrt(1.0 + rec.t * rec.t) * rec.ed_lap);
    }
    const double te = diag::efolding_time(t, v);
    o.detail << "nu=" << d.nus[i] << " e-folding " << te << "; ";
    o.require(std::isfinite(te), "e-folding reached at nu=" + std::to_string(d.nus[i]));
    x.push_back(std::log(d.nus[i]));
    y.push_back(std::log(te));
  }
  const double n = double(x.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
    sxx += x[i] * x[i];
    sxy += x[i] * y[i];
  }
  const double slope = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  o.detail << "slope " << slope << " (target -1/3 +- 0.07); runtime " << d.runtime << " s";
  o.require(std::abs(slope + 1.0 / 3.0) <= 0.07, "slope within -1/3 +- 0.07");
  o.require(d.runtime <= 1800.0, "runtime <= 30 min");
}

void inviscid_damping(Outcome& o) {
  const auto& d = dissipation_runs();
  for (size_t i = 0; i < d.nus.size(); ++i) {
    double v5 = -1, vmax = 0, vmin = INFINITY;
    for (const auto& rec : d.runs[i].series) {
      if (rec.t < 5.0 - 1e-9) continue;
      if (v5 < 0) v5 = rec.damp_grad;
      vmax = std::max(vmax, rec.damp_grad);
      vmin = std::min(vmin, rec.damp_grad);
    }
    o.detail << "nu=" << d.nus[i] << " max/v(5) " << vmax / v5 << " min/v(5) " << vmin / v5 << "; ";
    o.require(v5 > 0 && vmax <= 4.0 * v5, "<t>|grad (U2,B2)| <= 4 x value at t=5, nu=" + std::to_string(d.nus[i]));
  }
}

void lift_up(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const double nu = 1e-3, horizon = 0.2 / nu;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    double peak[2] = {0, 0}, cross = NAN;
    for (int ctl = 0; ctl < 2; ++ctl) {
      solver::SolverConfig c;
      c.nx = 16;
      c.ny = 32;
      c.nz = 16;
      c.nu = nu;
      c.alpha = ctl ? 0.0 : 1.0;
      c.init.epsilon = 0.01 * nu;
      c.init.eta_max = 1.0;
      c.init.seed = seed;
      c.t_end = horizon;
      c.dt_max = 0.04;
      c.output_cadence = 1.0;
      const auto r = solver::run_simulation(c);
      o.require(r.status == solver::RunStatus::completed, "run completed, seed " + std::to_string(seed));
      const double z0 = r.series.front().zero_ub;
      for (const auto& rec : r.series) {
        peak[ctl] = std::max(peak[ctl], rec.zero_ub / z0);
        if (ctl && std::isnan(cross) && rec.zero_ub > 10.0 * z0) cross = rec.t;
      }
    }
    o.detail << "seed " << seed << ": alpha=1 peak " << peak[0] << ", alpha=0 peak " << peak[1] << " (10x at t=" << cross
             << "); ";
    const std::string s = std::to_string(seed);
    o.require(peak[0] <= 10.0, "alpha=1 stays <= 10x, seed " + s);
    o.require(peak[1] > 10.0 && cross < horizon, "alpha=0 exceeds 10x before the horizon, seed " + s);
    o.require(peak[1] > peak[0], "control grows more, seed " + s);
  }
  o.detail << "runtime " << seconds_since(t0) << " s";
}

void diophantine(Outcome& o) {
  const auto t0 = std::chrono::steady_clock::now();
  const auto sqrt2 = dioph::Sigma::parse("sqrt2");
  const auto cert = dioph::dioph_constant(sqrt2, 1, 100000);
  const double exact = 6.0 - 4.0 * std::sqrt(2.0);
  o.detail << "c(sqrt2) = " << cert.c << " (error " << std::abs(cert.c - exact) << ", " << cert.tail_method << "); ";
  o.require(std::abs(cert.c - exact) <= 1e-12, "c(sqrt2, 1) = 6 - 4 sqrt2 to 1e-12");
  o.require(cert.tail_method == "quadratic-irrational-exact", "exact tail method");
  double worst = INFINITY;
  for (std::int64_t k = 1; k <= 10000; ++k) worst = std::min(worst, dioph::scaled_distance(sqrt2, 1, k));
  o.detail << "min_k |k| |sigma k + l| over |k| <= 1e4: " << worst << "; ";
  o.require(worst >= cert.c * (1.0 - 1e-12), "|sigma k + l| >= c/|k| for |k| <= 1e4");
  const auto rat = dioph::dioph_constant(dioph::Sigma::parse("3/2"), 1, 1000);
  o.detail << "c(3/2) = " << rat.c << " at (p,q) = (" << rat.best_p << "," << rat.best_q << "); ";
  o.require(rat.c == 0.0 && rat.best_p == 3 && rat.best_q == 2, "rational sigma gives c = 0 at (3, 2)");
  const double rt = seconds_since(t0);
  o.detail << "runtime " << rt << " s";
  o.require(rt < 60.0, "runtime of seconds");
}

void invariants(Outcome& o) {
  using namespace cmhd::testing;
  const Grid g = make_grid(16, 16, 16, 1.0);
  solver::Solver sol(g, kFlow);
  ElsasserState s = random_state(g, 9, 4, 0.2);
  double div = 0;
  for (int i = 0; i < 200; ++i) {
    sol.step(s, sol.suggest_dt(s, 0.05, 0.5));
    div = std::max({div, max_divergence(s.zp, s.time), max_divergence(s.zm, s.time)});
  }
  o.detail << "divergence " << div << "; ";
  o.require(div <= 1e-10, "divergence <= 1e-10");

  const double d1 = one_step_energy_drift(0.04), d2 = one_step_energy_drift(0.0025);
  const double order = std::log(d1 / d2) / std::log(16.0);
  o.detail << "energy drift order " << order << "; ";
  o.require(order >= 4.0, "energy neutrality O(dt^4)");

  const double h = 1e-3;
  ElsasserState mid = s, after;
  sol.step(mid, h);
  after = mid;
  sol.step(after, h);
  const auto rep = diag::reform2_residual(s, mid, after, kFlow);
  o.detail << "reform residual " << rep.residual << " (nonlinear share " << rep.nonlinear_share << "); ";
  o.require(rep.residual <= 1e-3, "reformulation residual <= 1e-3");

  const auto e = manufactured_errors({10, 20, 40});
  const double o1 = std::log2(e[0] / e[1]), o2 = std::log2(e[1] / e[2]);
  o.detail << "manufactured orders " << o1 << ", " << o2;
  o.require(std::min(o1, o2) >= 3.8, "manufactured order >= 3.8");
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<void(Outcome&)>>> criteria{
      {"multiplier-lemmas", multipliers},
      {"closed-form-oracles", closed_form},
      {"rate-dichotomies", dichotomies},
      {"diophantine-certificates", diophantine},
      {"solver-invariants", invariants},
      {"lift-up-suppression", lift_up},
      {"enhanced-dissipation", enhanced_dissipation},
      {"inviscid-damping", inviscid_damping},
  };
  int failed = 0;
  for (const auto& [name, fn] : criteria) {
    bool selected = argc < 2;
    for (int i = 1; i < argc; ++i) selected = selected || name.rfind(argv[i], 0) == 0;
    if (!selected) continue;
    Outcome o;
    try {
      fn(o);
    } catch (const std::exception& e) {
      o.pass = false;
      o.detail << "[exception: " << e.what() << "]";
    }
    std::cout << (o.pass ? "PASS " : "FAIL ") << name << ": " << o.detail.str() << std::endl;
    failed += o.pass ? 0 : 1;
  }
  return failed == 0 ? 0 : 1;
}
