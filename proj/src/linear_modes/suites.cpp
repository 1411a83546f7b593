#include <algorithm>
#include <cmath>
#include <fstream>
#include <functional>
#include <iomanip>
#include <limits>
#include <map>

#include "cmhd/linear_modes.hpp"
#include "cmhd/symbols.hpp"

namespace cmhd::linear {

bool SuiteResult::passed() const {
  return std::all_of(checks.begin(), checks.end(), [](const SuiteCheck& c) { return c.passed; });
}

namespace {

constexpr double kClosedFormTol = 1e-6;

double japanese(double t) { return std::sqrt(1.0 + t * t); }

// Tracks |numeric - closed| normalised by the largest closed-form magnitude
// seen, and emits every `stride`-th sample as a CSV row.
struct Comparison {
  std::string quantity;
  int stride;
  std::vector<SuiteRow>* rows;
  std::vector<std::pair<double, double>> pending;  // (t, error)
  std::vector<SuiteRow> local;
  double scale = 0, worst = 0;

  void add(size_t i, double t, Complex closed, Complex numeric) {
    scale = std::max(scale, std::abs(closed));
    const double err = std::abs(numeric - closed);
    pending.emplace_back(t, err);
    if (i % stride == 0) local.push_back({t, quantity, std::abs(closed), std::abs(numeric), err});
  }
  double finish() {
    const double s = scale > 0 ? scale : 1.0;
    for (const auto& [t, e] : pending) worst = std::max(worst, e / s);
    for (auto& r : local) {
      r.rel_error /= s;
      rows->push_back(r);
    }
    return worst;
  }
};

SuiteCheck upper(std::string name, double value, double tol, std::string detail = {}) {
  return {std::move(name), value <= tol, value, tol, std::move(detail)};
}

SuiteCheck within(std::string name, double value, double target, double tol, std::string detail = {}) {
  return {std::move(name), std::abs(value - target) <= tol, value, tol, std::move(detail)};
}

// ---------------------------------------------------------------------------

SuiteResult liftup_suite(const SuiteOptions& o) {
  SuiteResult r;
  r.suite = "liftup";
  const double eta = 0.5;
  const int l = 1;
  {
    // Oscillating zero mode: z^{pm,1}(t) = -e^{pm i a l t} sin(a l t)/(a l) w^{mp,2}.
    LinParams p{0.0, 1.0, o.sigma, {0, eta, l}};
    const std::array<Complex, 6> init{0.0, 1.0, -eta / l, 0.0, 1.0, -eta / l};
    const auto tr = evolve_linear_full(p, init, 0.0, 50.0, o.dt);
    Comparison cp{"z+1", o.csv_stride, &r.rows}, cm{"z-1", o.csv_stride, &r.rows};
    double drift = 0;
    for (size_t i = 0; i < tr.size(); ++i) {
      const double t = tr.times[i], al = p.alpha * l;
      const Complex amp = std::sin(al * t) / al;
      cp.add(i, t, -std::polar(1.0, al * t) * amp, tr.values[i][0]);
      cm.add(i, t, -std::polar(1.0, -al * t) * amp, tr.values[i][3]);
      for (int c : {1, 2, 4, 5}) drift = std::max(drift, std::abs(tr.values[i][c] - init[c]));
    }
    r.checks.push_back(upper("zero-mode z+1 closed form", cp.finish(), kClosedFormTol));
    r.checks.push_back(upper("zero-mode z-1 closed form", cm.finish(), kClosedFormTol));
    r.checks.push_back(upper("zero-mode z2, z3 constant", drift, kClosedFormTol));
  }
  {
    // alpha = 0: u^1(t) = u^1(0) - t u^2(0).
    LinParams p{0.0, 0.0, o.sigma, {0, eta, l}};
    const std::array<Complex, 6> init{0.0, 1.0, -eta / l, 0.0, 1.0, -eta / l};
    const auto tr = evolve_linear_full(p, init, 0.0, 50.0, o.dt);
    Comparison c{"u1", o.csv_stride, &r.rows};
    for (size_t i = 0; i < tr.size(); ++i) {
      c.add(i, tr.times[i], -tr.times[i], 0.5 * (tr.values[i][0] + tr.values[i][3]));
    }
    r.checks.push_back(upper("alpha=0 lift-up u1 = -t", c.finish(), kClosedFormTol));
  }
  {
    // Suppression: sup_t |(u,b)(t)|/|(u,b)(0)| does not grow with the horizon
    // when alpha l >= 1; for alpha = 0, |u1(t)| >= t |u2(0)| - |u1(0)|.
    auto sup_ratio = [&](double alpha, double horizon, double* growth_defect) {
      LinParams p{0.0, alpha, o.sigma, {0, eta, l}};
      const std::array<Complex, 6> init{0.2, 1.0, -eta / l, 0.2, 1.0, -eta / l};
      const auto tr = evolve_linear_full(p, init, 0.0, horizon, 1e-2, 10);
      const double n0 = tr.norm(0, {0, 1, 2, 3, 4, 5});
      double sup = 0;
      for (size_t i = 0; i < tr.size(); ++i) {
        sup = std::max(sup, tr.norm(i, {0, 1, 2, 3, 4, 5}) / n0);
        if (growth_defect) {
          const double u1 = std::abs(0.5 * (tr.values[i][0] + tr.values[i][3]));
          *growth_defect = std::min(*growth_defect, u1 - (tr.times[i] * 1.0 - 0.2));
        }
      }
      return sup;
    };
    const double c100 = sup_ratio(1.0, 100.0, nullptr), c1000 = sup_ratio(1.0, 1000.0, nullptr);
    r.rows.push_back({100.0, "sup_ratio_alpha1", 0, c100, 0});
    r.rows.push_back({1000.0, "sup_ratio_alpha1", 0, c1000, 0});
    r.checks.push_back(upper("alpha l = 1: sup norm ratio bounded", c1000, 2.0));
    r.checks.push_back(upper("alpha l = 1: bound independent of horizon", c1000 / c100 - 1.0, 1e-3));
    double defect = std::numeric_limits<double>::infinity();
    const double g1000 = sup_ratio(0.0, 1000.0, &defect);
    r.rows.push_back({1000.0, "sup_ratio_alpha0", 0, g1000, 0});
    r.checks.push_back({"alpha=0: |u1(t)| >= t|u2(0)| - |u1(0)|", defect >= -1e-9, defect, 0.0, ""});
  }
  return r;
}

SuiteResult orr_suite(const SuiteOptions& o) {
  SuiteResult r;
  r.suite = "orr";
  {
    LinParams p{0.0, 0.0, o.sigma, {1, 8.0, 1}};
    const Complex f0{0.6, -0.8};
    const auto tr = evolve_F2_pair(p, {f0, 2.0 * f0}, 0.0, 40.0, o.dt, {false});
    Comparison c{"F2_envelope", o.csv_stride, &r.rows};
    const double n0 = moving_wave_vector(p.mode, 0).norm_sq;
    double worst_phase = 0;
    for (size_t i = 0; i < tr.size(); ++i) {
      const double ratio = std::sqrt(moving_wave_vector(p.mode, tr.times[i]).norm_sq / n0);
      c.add(i, tr.times[i], ratio * f0, tr.values[i][0]);
      worst_phase = std::max(worst_phase, std::abs(tr.values[i][1] - 2.0 * ratio * f0) / (2.0 * ratio));
    }
    r.checks.push_back(upper("F2 envelope sqrt(|k_t|^2/|k_0|^2)", c.finish(), kClosedFormTol));
    r.checks.push_back(upper("F2 envelope, second member", worst_phase, kClosedFormTol));
  }
  {
    // Transient amplification of W^2 over [0, eta/k].
    for (double eta : {5.0, 20.0}) {
      LinParams p{0.0, 0.0, o.sigma, {1, eta, 0}};
      const auto tr = evolve_F2_pair(p, {1.0, 1.0}, 0.0, eta, o.dt, {false});
      const double k0 = moving_wave_vector(p.mode, 0).norm_sq, kc = moving_wave_vector(p.mode, eta).norm_sq;
      const double amp = std::abs(tr.values.back()[0]) / std::abs(tr.values.front()[0]) * k0 / kc;
      r.rows.push_back({eta, "orr_amplification", eta, amp, std::abs(amp - eta) / eta});
      r.checks.push_back(upper("Orr amplification ~ eta/k (eta=" + std::to_string(int(eta)) + ")",
                               std::abs(amp - eta) / eta, 0.10));
    }
  }
  {
    // Resonant tilt sigma k + l = 0: F+ + F- is conserved.
    LinParams p{0.0, 5.0, 2.0, {1, 3.0, -2}};
    const auto tr = evolve_F2_pair(p, {1.0, Complex(0.0, 0.5)}, 0.0, 30.0, o.dt);
    const Complex s0 = tr.values[0][0] + tr.values[0][1];
    double worst = 0;
    for (const auto& v : tr.values) worst = std::max(worst, std::abs(v[0] + v[1] - s0) / std::abs(s0));
    r.checks.push_back(upper("resonant tilt: F+ + F- conserved", worst, 1e-10));
  }
  return r;
}

SuiteResult damping_suite(const SuiteOptions& o) {
  SuiteResult r;
  r.suite = "damping";
  const double alpha = 10.0 / o.dioph_c;
  const LinParams p{0.0, alpha, o.sigma, {1, 0.0, 1}};
  const int stride = 50;
  const auto f2 = evolve_F2_pair(p, {1.0, 0.5}, 0.0, 1000.0, o.dt, {}, stride);
  double lo = std::numeric_limits<double>::infinity(), hi = 0, dlo = lo, dhi = 0;
  std::vector<double> ts, fs;
  for (size_t i = 0; i < f2.size(); ++i) {
    const double t = f2.times[i];
    if (t < 10.0) continue;
    const double fn = f2.norm(i, {0, 1});
    const double q = fn / t;
    lo = std::min(lo, q);
    hi = std::max(hi, q);
    // |(U^2, B^2)| = sqrt((|W+2|^2 + |W-2|^2)/2) with |W^2| = |F^2|/|k_t|^2.
    const double ub2 = fn / std::sqrt(2.0) / moving_wave_vector(p.mode, t).norm_sq;
    dlo = std::min(dlo, japanese(t) * ub2);
    dhi = std::max(dhi, japanese(t) * ub2);
    ts.push_back(t);
    fs.push_back(fn);
    if (i % (o.csv_stride) == 0) r.rows.push_back({t, "F2_over_t", 0, q, 0});
  }
  r.checks.push_back(upper("F2 pair: sup |F|/t over inf |F|/t on [10,1e3]", hi / lo, 4.0,
                           "sup " + std::to_string(hi) + ", inf " + std::to_string(lo)));
  r.rows.push_back({1000.0, "F2_growth_exponent", 1.0, fit_power_law(ts, fs, 10.0, 1000.0), 0});
  r.checks.push_back(upper("<t>|(U2,B2)| within factor 2 on [10,1e3]", dhi / dlo, 2.0));

  for (int j : {1, 3}) {
    const auto tr = evolve_F13(p, j, {1.0, 0.5}, &f2, 0.0, 1000.0, o.dt, {}, stride);
    std::vector<double> t13, n13;
    for (size_t i = 0; i < tr.size(); ++i) {
      t13.push_back(tr.times[i]);
      n13.push_back(std::max(std::abs(tr.values[i][0]), std::abs(tr.values[i][1])));
    }
    const double e = fit_power_law(t13, n13, 10.0, 1000.0);
    r.rows.push_back({1000.0, "F" + std::to_string(j) + "_growth_exponent", 2.0, e, std::abs(e - 2.0) / 2.0});
    r.checks.push_back(within("F" + std::to_string(j) + " growth exponent", e, 2.0, 0.1));
  }
  {
    // Envelope with couplings removed: |F(t)| = |k_t|^2/|k_0|^2 |F(0)|.
    const LinParams q{0.0, alpha, o.sigma, {2, 3.0, -1}};
    const auto tr = evolve_F13(q, 3, {1.0, 0.0}, nullptr, 0.0, 20.0, o.dt, {false, false});
    Comparison c{"F3_envelope", o.csv_stride, &r.rows};
    const double n0 = moving_wave_vector(q.mode, 0).norm_sq;
    for (size_t i = 0; i < tr.size(); ++i) {
      c.add(i, tr.times[i], moving_wave_vector(q.mode, tr.times[i]).norm_sq / n0, tr.values[i][0]);
    }
    r.checks.push_back(upper("F13 quadratic envelope", c.finish(), kClosedFormTol));
  }
  return r;
}

SuiteResult model_suite(const SuiteOptions& o) {
  SuiteResult r;
  r.suite = "model";
  {
    const auto tr = evolve_model(0.0, {Complex(1.0, 2.0), 0.0}, 1.0, 100.0, o.dt, false);
    Comparison c{"decoupled", o.csv_stride, &r.rows};
    for (size_t i = 0; i < tr.size(); ++i) c.add(i, tr.times[i], Complex(1.0, 2.0) * tr.times[i], tr.values[i][0]);
    r.checks.push_back(upper("decoupled: F(t) = F(1) t", c.finish(), kClosedFormTol));
  }
  {
    const auto tr = evolve_model(0.0, {1.0, 0.25}, 1.0, 100.0, o.dt);
    Comparison c{"sum_omega0", o.csv_stride, &r.rows};
    for (size_t i = 0; i < tr.size(); ++i) {
      c.add(i, tr.times[i], 1.25 * tr.times[i] * tr.times[i], tr.values[i][0] + tr.values[i][1]);
    }
    r.checks.push_back(upper("omega = 0: F+ + F- = (F+ + F-)(1) t^2", c.finish(), kClosedFormTol));
  }
  for (double omega : {0.0, 10.0, 100.0}) {
    const auto tr = evolve_model(omega, {1.0, 0.0}, 1.0, 1000.0, o.dt, true, 20);
    std::vector<double> ts, ns;
    double sup = 0;
    for (size_t i = 0; i < tr.size(); ++i) {
      ts.push_back(tr.times[i]);
      ns.push_back(std::abs(tr.values[i][0]) + std::abs(tr.values[i][1]));
      sup = std::max(sup, ns.back() / ts.back());
    }
    const double e = fit_power_law(ts, ns, 100.0, 1000.0);
    const double target = omega == 0.0 ? 2.0 : 1.0;
    r.rows.push_back({1000.0, "exponent_omega_" + std::to_string(int(omega)), target, e, std::abs(e - target)});
    r.checks.push_back(within("model exponent, omega = " + std::to_string(int(omega)), e, target, 0.1));
    if (omega >= 10.0) {
      r.rows.push_back({1000.0, "sup_norm_over_t_omega_" + std::to_string(int(omega)), 0, sup, 0});
      r.checks.push_back(upper("model sup (|F+|+|F-|)/t bounded, omega = " + std::to_string(int(omega)), sup, 4.0));
    }
  }
  return r;
}

SuiteResult enhanced_suite(const SuiteOptions& o) {
  SuiteResult r;
  r.suite = "enhanced";
  {
    const double f = enhanced_dissipation_factor(1e-3, {1, 0, 0}, 10.0);
    const double expect = std::exp(-1e-3 * (10.0 + 1000.0 / 3.0));
    r.rows.push_back({10.0, "factor_example", expect, f, std::abs(f - expect) / expect});
    r.checks.push_back(upper("factor(nu=1e-3,(1,0,0),t=10)", std::abs(f - 0.7094) / 0.7094, 1e-4));
  }
  {
    // RK4 on dg/dt = -nu |k_t|^2 g against the closed-form factor.
    double worst = 0;
    for (const ModeIndex m : {ModeIndex{1, 0, 0}, ModeIndex{2, 5.0, 1}, ModeIndex{-1, 3.25, 2}, ModeIndex{0, 2.0, 3}}) {
      const double nu = 1e-3;
      const double h = o.dt * 10;
      double g = 1.0, t = 0.0;
      const int n = static_cast<int>(std::lround(30.0 / h));
      auto f = [&](double s, double y) { return -nu * moving_wave_vector(m, s).norm_sq * y; };
      for (int i = 0; i < n; ++i) {
        const double k1 = f(t, g), k2 = f(t + h / 2, g + h / 2 * k1), k3 = f(t + h / 2, g + h / 2 * k2),
                     k4 = f(t + h, g + h * k3);
        g += h / 6 * (k1 + 2 * k2 + 2 * k3 + k4);
        t += h;
        if ((i + 1) % o.csv_stride == 0) {
          const double cf = enhanced_dissipation_factor(nu, m, t);
          r.rows.push_back({t, "factor_k" + std::to_string(m.k), cf, g, std::abs(g - cf) / cf});
        }
      }
      const double cf = enhanced_dissipation_factor(nu, m, t);
      worst = std::max(worst, std::abs(g - cf) / cf);
    }
    r.checks.push_back(upper("closed-form factor vs integration", worst, kClosedFormTol));
  }
  {
    double worst = -1;
    for (int k : {-3, -1, 1, 2, 5})
      for (double eta : {-10.0, 0.0, 2.5, 40.0})
        for (int l : {0, 1, 4})
          for (double t : {0.1, 1.0, 10.0, 100.0, 1000.0}) {
            const double nu = 1e-4;
            const double f = enhanced_dissipation_factor(nu, {k, eta, l}, t);
            const double b = std::exp(-nu * k * k * t * t * t / 12.0);
            worst = std::max(worst, f / b);
          }
    r.checks.push_back(upper("factor <= exp(-nu k^2 t^3/12)", worst, 1.0 + 1e-14));
    const double heat = enhanced_dissipation_factor(1e-2, {0, 3.0, 2}, 7.0);
    r.checks.push_back(upper("k = 0 heat decay", std::abs(heat - std::exp(-1e-2 * 13.0 * 7.0)), 1e-15));
  }
  {
    // Exact viscous factor inside the full linear engine.
    LinParams inv{0.0, 2.0, o.sigma, {1, 2.0, 1}}, vis = inv;
    vis.nu = 1e-2;
    Vec3 v = leray_project({1.0, Complex(0, 1), 0.5}, moving_wave_vector(inv.mode, 0));
    const std::array<Complex, 6> init{v[0], v[1], v[2], v[0], v[1], v[2]};
    const auto a = evolve_linear_full(inv, init, 0.0, 20.0, o.dt);
    const auto b = evolve_linear_full(vis, init, 0.0, 20.0, o.dt);
    double worst = 0;
    for (size_t i = 0; i < a.size(); ++i) {
      const double f = enhanced_dissipation_factor(vis.nu, vis.mode, a.times[i]);
      for (int c = 0; c < 6; ++c) worst = std::max(worst, std::abs(b.values[i][c] - f * a.values[i][c]));
    }
    r.checks.push_back(upper("integrating factor in linear engine", worst, 1e-12));
  }
  return r;
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names{"liftup", "orr", "damping", "model", "enhanced"};
  return names;
}

SuiteResult run_linear_suite(const std::string& name, const SuiteOptions& opt) {
  static const std::map<std::string, std::function<SuiteResult(const SuiteOptions&)>> table{
      {"liftup", liftup_suite},
      {"orr", orr_suite},
      {"damping", damping_suite},
      {"model", model_suite},
      {"enhanced", enhanced_suite}};
  const auto it = table.find(name);
  if (it == table.end()) throw ConfigError("unknown linear suite '" + name + "'");
  return it->second(opt);
}

void write_csv(const SuiteResult& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "t,quantity,closed_form,numeric,rel_error\n" << std::setprecision(17);
  for (const auto& row : r.rows) {
    out << row.t << ',' << row.quantity << ',' << row.closed_form << ',' << row.numeric << ',' << row.rel_error
        << '\n';
  }
}

nlohmann::json to_json(const SuiteResult& r) {
  nlohmann::json j{{"suite", r.suite}, {"passed", r.passed()}};
  j["checks"] = nlohmann::json::array();
  for (const auto& c : r.checks) {
    j["checks"].push_back(
        {{"name", c.name}, {"passed", c.passed}, {"value", c.value}, {"tolerance", c.tolerance}, {"detail", c.detail}});
  }
  return j;
}

}  // namespace cmhd::linear
