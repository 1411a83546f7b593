#include <doctest.h>

#include <cmath>
#include <complex>

#include "cmhd/linear_modes.hpp"
#include "cmhd/symbols.hpp"

using namespace cmhd;
using namespace cmhd::linear;

namespace {

const double kSqrt2 = std::sqrt(2.0);

// Error of the omega = 0 model sum against s(1) t^2 at t = 2.
double model_sum_error(double dt) {
  const auto tr = evolve_model(0.0, {1.0, 0.5}, 1.0, 2.0, dt);
  return std::abs(tr.values.back()[0] + tr.values.back()[1] - 1.5 * 4.0);
}

// Error of the uncoupled F3 envelope |k_t|^2/|k_0|^2 at t = 3.
double f13_envelope_error(double dt) {
  const LinParams p{0.0, 0.0, kSqrt2, {3, 1.0, 0}};
  const auto tr = evolve_F13(p, 3, {1.0, 0.0}, nullptr, 0.0, 3.0, dt, {false, false});
  const double expect = moving_wave_vector(p.mode, 3.0).norm_sq / moving_wave_vector(p.mode, 0.0).norm_sq;
  return std::abs(tr.values.back()[0] - expect);
}

}  // namespace

TEST_CASE("resolved step respects oscillation frequency") {
  CHECK(resolved_dt(1e-3, 0.0) == 1e-3);
  CHECK(resolved_dt(1.0, 0.0) == doctest::Approx(0.01));
  CHECK(resolved_dt(1.0, 99.0) == doctest::Approx(1e-3));
  const LinParams p{0.0, 1.0, 2.0, {1, 0.0, -2}};
  CHECK(relative_frequency(p) == 0.0);
}

TEST_CASE("zero mode: oscillating lift-up amplitude") {
  const double alpha = 1.0, eta = 0.5;
  const int l = 1;
  const LinParams p{0.0, alpha, kSqrt2, {0, eta, l}};
  const std::array<Complex, 6> init{0.0, 1.0, -eta / l, 0.0, 1.0, -eta / l};
  const auto tr = evolve_linear_full(p, init, 0.0, 20.0, 1e-3, 10);
  for (size_t i = 0; i < tr.size(); ++i) {
    const double t = tr.times[i];
    const double amp = std::abs(std::sin(alpha * l * t)) / (alpha * l);
    CHECK(std::abs(tr.values[i][0]) == doctest::Approx(amp).epsilon(0).scale(1).epsilon(1e-8));
    CHECK(std::abs(std::abs(tr.values[i][3]) - amp) < 1e-8);
    CHECK(std::abs(tr.values[i][1] - 1.0) < 1e-12);
    CHECK(std::abs(tr.values[i][5] + eta / l) < 1e-12);
  }
}

TEST_CASE("zero mode: alpha = 0 lift-up is -t") {
  const LinParams p{0.0, 0.0, kSqrt2, {0, 1.0, 2}};
  // u = (0, 1, -1/2), b = 0: Z+ = Z- = u.
  const std::array<Complex, 6> init{0.0, 1.0, -0.5, 0.0, 1.0, -0.5};
  const auto tr = evolve_linear_full(p, init, 0.0, 10.0, 1e-3);
  for (size_t i = 0; i < tr.size(); i += 100) {
    const Complex u1 = 0.5 * (tr.values[i][0] + tr.values[i][3]);
    CHECK(std::abs(u1 + tr.times[i]) < 1e-10);
  }
}

TEST_CASE("linear engine keeps k_t . Z = 0 for a sheared mode") {
  const LinParams p{1e-3, 3.0, kSqrt2, {2, 5.0, 1}};
  const auto w0 = moving_wave_vector(p.mode, 0);
  const Vec3 zp = leray_project({1.0, Complex(0.3, 1.0), -0.7}, w0);
  const Vec3 zm = leray_project({Complex(0, -1), 0.4, 2.0}, w0);
  const auto tr = evolve_linear_full(p, {zp[0], zp[1], zp[2], zm[0], zm[1], zm[2]}, 0.0, 10.0, 1e-3, 50);
  for (size_t i = 0; i < tr.size(); ++i) {
    const auto w = moving_wave_vector(p.mode, tr.times[i]);
    for (int s = 0; s < 2; ++s) {
      const Vec3 z{tr.values[i][3 * s], tr.values[i][3 * s + 1], tr.values[i][3 * s + 2]};
      CHECK(std::abs(divergence_symbol(z, w)) <= 1e-10 * std::sqrt(w.norm_sq));
    }
  }
}

TEST_CASE("linear engine reproduces the F2 system") {
  // F^{pm,2} = -|k_t|^2 Z^{pm,2} follows the F2 pair equation.
  const LinParams p{0.0, 2.0, kSqrt2, {1, 3.0, 1}};
  const auto w0 = moving_wave_vector(p.mode, 0);
  const Vec3 zp = leray_project({0.2, 1.0, 0.1}, w0);
  const Vec3 zm = leray_project({0.0, Complex(0, 0.5), 1.0}, w0);
  const auto full = evolve_linear_full(p, {zp[0], zp[1], zp[2], zm[0], zm[1], zm[2]}, 0.0, 8.0, 1e-3, 100);
  const auto f2 = evolve_F2_pair(p, {-w0.norm_sq * zp[1], -w0.norm_sq * zm[1]}, 0.0, 8.0, 1e-3, {}, 100);
  REQUIRE(full.size() == f2.size());
  for (size_t i = 0; i < f2.size(); ++i) {
    const double n = moving_wave_vector(p.mode, full.times[i]).norm_sq;
    CHECK(std::abs(-n * full.values[i][1] - f2.values[i][0]) < 1e-9);
    CHECK(std::abs(-n * full.values[i][4] - f2.values[i][1]) < 1e-9);
  }
}

TEST_CASE("linear engine reproduces the F1 and F3 systems") {
  const LinParams p{0.0, 1.5, kSqrt2, {1, 2.0, 2}};
  const auto w0 = moving_wave_vector(p.mode, 0);
  const Vec3 zp = leray_project({1.0, 0.5, 0.2}, w0);
  const Vec3 zm = leray_project({-0.3, Complex(0, 1), 0.6}, w0);
  const auto full = evolve_linear_full(p, {zp[0], zp[1], zp[2], zm[0], zm[1], zm[2]}, 0.0, 6.0, 1e-3, 100);
  const auto f2 = evolve_F2_pair(p, {-w0.norm_sq * zp[1], -w0.norm_sq * zm[1]}, 0.0, 6.0, 1e-3, {}, 100);
  for (int j : {1, 3}) {
    const auto f = evolve_F13(p, j, {-w0.norm_sq * zp[j - 1], -w0.norm_sq * zm[j - 1]}, &f2, 0.0, 6.0, 1e-3, {}, 100);
    for (size_t i = 0; i < f.size(); ++i) {
      const double n = moving_wave_vector(p.mode, full.times[i]).norm_sq;
      CHECK(std::abs(-n * full.values[i][j - 1] - f.values[i][0]) < 1e-9);
      CHECK(std::abs(-n * full.values[i][2 + j] - f.values[i][1]) < 1e-9);
    }
  }
}

TEST_CASE("viscous factor commutes with the linear engine") {
  LinParams p{0.0, 1.0, kSqrt2, {1, -2.0, 1}};
  const auto w0 = moving_wave_vector(p.mode, 0);
  const Vec3 z = leray_project({1.0, 1.0, 1.0}, w0);
  const auto a = evolve_linear_full(p, {z[0], z[1], z[2], z[0], z[1], z[2]}, 0.0, 5.0, 1e-3, 500);
  p.nu = 0.05;
  const auto b = evolve_linear_full(p, {z[0], z[1], z[2], z[0], z[1], z[2]}, 0.0, 5.0, 1e-3, 500);
  for (size_t i = 0; i < a.size(); ++i) {
    const double f = enhanced_dissipation_factor(0.05, p.mode, a.times[i]);
    CHECK(std::abs(b.values[i][0] - f * a.values[i][0]) < 1e-14);
  }
}

TEST_CASE("F2 pair") {
  SUBCASE("resonant tilt conserves the sum") {
    const LinParams p{0.0, 7.0, 2.0, {1, 4.0, -2}};
    const auto tr = evolve_F2_pair(p, {Complex(1, 1), 0.3}, 0.0, 25.0, 1e-3);
    for (const auto& v : tr.values) CHECK(std::abs(v[0] + v[1] - Complex(1.3, 1.0)) < 1e-10);
  }
  SUBCASE("no oscillation: envelope sqrt(|k_t|^2/|k_0|^2)") {
    const LinParams p{0.0, 3.0, kSqrt2, {2, 1.0, 3}};
    const auto tr = evolve_F2_pair(p, {1.0, -2.0}, 0.0, 30.0, 1e-3, {false}, 100);
    const double n0 = moving_wave_vector(p.mode, 0).norm_sq;
    for (size_t i = 0; i < tr.size(); ++i) {
      const double env = std::sqrt(moving_wave_vector(p.mode, tr.times[i]).norm_sq / n0);
      CHECK(std::abs(std::abs(tr.values[i][0]) - env) <= 1e-6 * env);
      CHECK(std::abs(std::abs(tr.values[i][1]) - 2.0 * env) <= 2e-6 * env);
    }
  }
  SUBCASE("large alpha: linear growth") {
    const LinParams p{0.0, 10.0 / 0.34314575050761981, kSqrt2, {1, 0.0, 1}};
    const auto tr = evolve_F2_pair(p, {1.0, 0.0}, 0.0, 1000.0, 1e-3, {}, 100);
    double lo = 1e300, hi = 0;
    for (size_t i = 0; i < tr.size(); ++i) {
      if (tr.times[i] < 10) continue;
      const double q = tr.norm(i, {0, 1}) / tr.times[i];
      lo = std::min(lo, q);
      hi = std::max(hi, q);
    }
    CHECK(lo > 0.1);
    CHECK(hi / lo < 4.0);
  }
  CHECK_THROWS_AS(evolve_F2_pair({0.0, 1.0, kSqrt2, {0, 1.0, 1}}, {1.0, 1.0}, 0.0, 1.0, 1e-3), ConfigError);
}

TEST_CASE("F13 system") {
  const LinParams p{0.0, 2.0, kSqrt2, {1, 0.0, 1}};
  CHECK_THROWS_AS(evolve_F13(p, 1, {1.0, 1.0}, nullptr, 0.0, 1.0, 1e-3), ConfigError);
  CHECK_THROWS_AS(evolve_F13(p, 2, {1.0, 1.0}, nullptr, 0.0, 1.0, 1e-3, {false, false}), ConfigError);
  CHECK_THROWS_AS(evolve_F13({0.0, 2.0, kSqrt2, {0, 1.0, 1}}, 3, {1.0, 1.0}, nullptr, 0.0, 1.0, 1e-3, {false, false}),
                  ConfigError);
  const auto short_f2 = evolve_F2_pair(p, {1.0, 0.0}, 0.0, 1.0, 1e-3);
  CHECK_THROWS_AS(evolve_F13(p, 1, {1.0, 1.0}, &short_f2, 0.0, 2.0, 1e-3), ConfigError);

  const auto tr = evolve_F13(p, 1, {1.0, 0.0}, nullptr, 0.0, 10.0, 1e-3, {false, false}, 100);
  for (size_t i = 0; i < tr.size(); ++i) {
    const double env = moving_wave_vector(p.mode, tr.times[i]).norm_sq / moving_wave_vector(p.mode, 0).norm_sq;
    CHECK(std::abs(std::abs(tr.values[i][0]) - env) <= 1e-10 * env);
  }
}

TEST_CASE("model equation") {
  CHECK_THROWS_AS(evolve_model(1.0, {1.0, 0.0}, 0.5, 2.0, 1e-3), ConfigError);
  SUBCASE("decoupled") {
    const auto tr = evolve_model(3.0, {Complex(2, -1), 0.0}, 1.0, 50.0, 1e-3, false, 1000);
    for (size_t i = 0; i < tr.size(); ++i) {
      CHECK(std::abs(tr.values[i][0] - Complex(2, -1) * tr.times[i]) < 1e-10 * tr.times[i]);
    }
  }
  SUBCASE("omega = 0 sum grows as t^2") {
    const auto tr = evolve_model(0.0, {1.0, 2.0}, 1.0, 30.0, 1e-3, true, 1000);
    for (size_t i = 0; i < tr.size(); ++i) {
      const double t = tr.times[i];
      CHECK(std::abs(tr.values[i][0] + tr.values[i][1] - 3.0 * t * t) < 1e-9 * t * t);
    }
  }
  SUBCASE("growth exponents") {
    for (double omega : {0.0, 10.0, -10.0, 50.0}) {
      const auto tr = evolve_model(omega, {1.0, 0.0}, 1.0, 1000.0, 1e-3, true, 50);
      std::vector<double> n;
      for (size_t i = 0; i < tr.size(); ++i) n.push_back(tr.norm(i, {0, 1}));
      const double e = fit_power_law(tr.times, n, 100.0, 1000.0);
      CHECK(std::abs(e - (omega == 0.0 ? 2.0 : 1.0)) <= 0.1);
    }
  }
}

TEST_CASE("fourth-order convergence") {
  for (auto err : {model_sum_error, f13_envelope_error}) {
    const double e1 = err(0.01), e2 = err(0.005);
    INFO("errors " << e1 << " " << e2);
    CHECK(e1 > 1e-13);
    CHECK(e1 / e2 >= 15.0);
  }
}

TEST_CASE("enhanced dissipation factor") {
  CHECK(enhanced_dissipation_factor(1e-3, {1, 0.0, 0}, 10.0) == doctest::Approx(0.7094).epsilon(1e-4));
  CHECK(enhanced_dissipation_factor(0.1, {0, 2.0, 1}, 3.0) == doctest::Approx(std::exp(-0.1 * 5.0 * 3.0)));
  CHECK(enhanced_dissipation_factor(0.3, {4, 1.0, 1}, 0.0) == 1.0);
  for (int k : {-2, 1, 3})
    for (double eta : {-5.0, 0.0, 0.25, 12.0})
      for (double t : {0.5, 5.0, 50.0}) {
        const double f = enhanced_dissipation_factor(1e-3, {k, eta, 2}, t);
        CHECK(f > 0.0);
        CHECK(f <= std::exp(-1e-3 * k * k * t * t * t / 12.0));
      }
}

TEST_CASE("power-law fit") {
  std::vector<double> t, y;
  for (int i = 1; i <= 50; ++i) {
    t.push_back(i * 20.0);
    y.push_back(3.0 * std::pow(i * 20.0, 1.5));
  }
  CHECK(fit_power_law(t, y, 10.0, 1000.0) == doctest::Approx(1.5));
  CHECK_THROWS_AS(fit_power_law(t, y, 2000.0, 3000.0), ConfigError);
}

TEST_CASE("divergence-violating initial data is rejected") {
  const LinParams p{0.0, 1.0, kSqrt2, {1, 0.0, 0}};
  CHECK_THROWS_AS(evolve_linear_full(p, {1.0, 0.0, 0.0, 0.0, 0.0, 0.0}, 0.0, 1.0, 1e-3), ConfigError);
}

TEST_CASE("verification suites pass") {
  for (const auto& name : suite_names()) {
    const auto r = run_linear_suite(name);
    for (const auto& c : r.checks) {
      INFO(name << ": " << c.name << " value " << c.value << " tol " << c.tolerance);
      CHECK(c.passed);
    }
    CHECK(!r.rows.empty());
    CHECK(to_json(r)["passed"] == r.passed());
  }
  CHECK_THROWS_AS(run_linear_suite("bogus"), ConfigError);
}
