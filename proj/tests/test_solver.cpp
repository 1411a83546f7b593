#include <doctest.h>

#include <cmath>
#include <cstring>
#include <filesystem>
#include <limits>
#include <random>

#include "cmhd/linear_modes.hpp"
#include "cmhd/mhd_solver.hpp"
#include "cmhd/symbols.hpp"
#include "solver_checks.hpp"

using namespace cmhd;
using namespace cmhd::solver;
using namespace cmhd::testing;

namespace {

SolverConfig small_config() {
  SolverConfig c;
  c.nx = c.ny = c.nz = 16;
  c.ly = 1.0;
  c.t_end = 1.0;
  c.output_cadence = 0.1;
  c.init.epsilon = 1e-3;
  return c;
}

}  // namespace

TEST_CASE("initial data") {
  const Grid g = make_grid(16, 32, 16, 2.0);
  InitSpec spec;
  spec.epsilon = 0.3;
  const auto a = initial_data(g, spec, 4);
  SUBCASE("deterministic in the seed") {
    CHECK(max_diff(a, initial_data(g, spec, 4)) == 0.0);
    spec.seed = 2;
    CHECK(max_diff(a, initial_data(g, spec, 4)) > 0.0);
  }
  SUBCASE("divergence free and real") {
    CHECK(max_divergence(a.zp, 0.0) < 1e-13);
    CHECK(max_divergence(a.zm, 0.0) < 1e-13);
    for (int c = 0; c < 3; ++c) CHECK(a.zp[c].reality_defect() < 1e-15);
  }
  SUBCASE("scaled to epsilon in H^s") {
    VectorField u = make_vector_field(g, "u"), b = make_vector_field(g, "b");
    for (int c = 0; c < 3; ++c)
      for (size_t i = 0; i < g.spectral_size(); ++i) {
        u[c][i] = 0.5 * (a.zp[c][i] + a.zm[c][i]);
        b[c][i] = 0.5 * (a.zm[c][i] - a.zp[c][i]);
      }
    const double n = diag::weighted_sobolev_norm({&u[0], &u[1], &u[2], &b[0], &b[1], &b[2]},
                                                 {weights::WeightName::unit, 4.0}, kFlow.multipliers(), 0.0);
    CHECK(n == doctest::Approx(0.3).epsilon(1e-12));
  }
  SUBCASE("band respected") {
    for (int ix = 0; ix < g.nx; ++ix)
      for (int iy = 0; iy < g.ny; ++iy)
        for (int iz = 0; iz < g.nzh(); ++iz) {
          const auto m = g.mode(ix, iy, iz);
          if (std::abs(m.k) > spec.kmax || std::abs(m.eta) > spec.eta_max + 1e-12 || m.l > spec.lmax) {
            CHECK(a.zp[0][g.index(ix, iy, iz)] == Complex(0.0));
          }
        }
  }
  SUBCASE("variants") {
    spec.epsilon = 0.0;
    CHECK(state_energy(initial_data(g, spec, 4)) == 0.0);
    spec.epsilon = 1.0;
    spec.b_fraction = 0.0;
    const auto nob = initial_data(g, spec, 4);
    CHECK(max_diff(nob, [&] { auto s = nob; s.zm = s.zp; return s; }()) == 0.0);
    spec.b_fraction = 1.0;
    spec.zero_mode_only = true;
    const auto z = initial_data(g, spec, 4);
    CHECK(state_energy(z) > 0.0);
    for (int iy = 0; iy < g.ny; ++iy)
      for (int iz = 0; iz < g.nzh(); ++iz)
        for (int ix = 1; ix < g.nx; ++ix) CHECK(z.zp[1][g.index(ix, iy, iz)] == Complex(0.0));
    spec.zero_mode_only = false;
    spec.shape = "gaussian";
    CHECK(state_energy(initial_data(g, spec, 4)) > 0.0);
  }
  SUBCASE("bad specs") {
    spec.kmax = 0;
    spec.eta_max = 0.0;
    spec.lmax = 0;
    CHECK_THROWS_AS(initial_data(g, spec, 4), ConfigError);
    spec = InitSpec{};
    spec.shape = "tophat";
    CHECK_THROWS_AS(initial_data(g, spec, 4), ConfigError);
  }
}

TEST_CASE("nonlinear structure") {
  const Grid g = make_grid(16, 16, 16, 1.0);
  Solver sol(g, kFlow);
  VectorField np = make_vector_field(g, "np"), nm = make_vector_field(g, "nm");
  SUBCASE("Z- = 0 switches off both products") {
    ElsasserState s = random_state(g, 3, 4, 1.0, 0.7);
    for (auto& c : s.zm) c.fill(0.0);
    sol.nonlinear_term(s, np, nm);
    for (int c = 0; c < 3; ++c) {
      CHECK(energy(np[c]) == 0.0);
      CHECK(energy(nm[c]) == 0.0);
    }
  }
  SUBCASE("transport is energy neutral") {
    for (double t : {0.0, 1.3, 6.0}) {
      const ElsasserState s = random_state(g, 5, 4, 1.0, t);
      sol.nonlinear_term(s, np, nm);
      const double scale = std::sqrt(state_energy(s)) * std::sqrt(inner(np, np));
      CHECK(std::abs(inner(s.zp, np)) < 1e-13 * scale);
      CHECK(std::abs(inner(s.zm, nm)) < 1e-13 * scale);
    }
  }
}

TEST_CASE("zero state is a fixed point") {
  const Grid g = make_grid(16, 16, 16, 1.0);
  Solver sol(g, kFlow);
  ElsasserState s = make_zero_state(g);
  for (int i = 0; i < 5; ++i) sol.step(s, 0.05);
  CHECK(state_energy(s) == 0.0);
  CHECK(s.time == doctest::Approx(0.25));
}

TEST_CASE("energy drift is high order without lift-up and viscosity") {
  const double d1 = one_step_energy_drift(0.04), d2 = one_step_energy_drift(0.0025);
  const double order = std::log(d1 / d2) / std::log(16.0);
  MESSAGE("one-step energy drift " << d1 << " -> " << d2 << ", mean order " << order);
  CHECK(d1 < 1e-7);
  CHECK(order >= 4.0);
}

TEST_CASE("divergence and reality are maintained") {
  const Grid g = make_grid(16, 16, 16, 1.0);
  Solver sol(g, kFlow);
  ElsasserState s = random_state(g, 9, 4, 0.2);
  for (int i = 0; i < 100; ++i) {
    sol.step(s, sol.suggest_dt(s, 0.05, 0.5));
    CHECK(max_divergence(s.zp, s.time) < 1e-10);
    CHECK(max_divergence(s.zm, s.time) < 1e-10);
  }
  for (int c = 0; c < 3; ++c) {
    CHECK(s.zp[c].reality_defect() < 1e-12);
    CHECK(s.zm[c].reality_defect() < 1e-12);
  }
}

TEST_CASE("manufactured solution converges at fourth order") {
  const auto e = manufactured_errors({10, 20, 40});
  const double o1 = std::log2(e[0] / e[1]), o2 = std::log2(e[1] / e[2]);
  MESSAGE("errors " << e[0] << " " << e[1] << " " << e[2] << ", orders " << o1 << " " << o2);
  CHECK(o1 >= 3.8);
  CHECK(o2 >= 3.8);
}

TEST_CASE("small data follow the linear dynamics") {
  const Grid g = make_grid(16, 16, 16, 1.0);
  Solver sol(g, kFlow);
  ElsasserState s = make_zero_state(g);
  const ModeIndex m{1, 2.0, 1};
  const auto w = moving_wave_vector(m, 0.0);
  const Vec3 vp = leray_project({Complex(1.0, 0.5), Complex(-0.3, 0.2), Complex(0.4, -1.0)}, w);
  const Vec3 vm = leray_project({Complex(-0.2, 0.7), Complex(0.5, 0.1), Complex(0.3, 0.3)}, w);
  const double eps = 1e-8;
  std::array<Complex, 6> init{};
  for (int c = 0; c < 3; ++c) {
    s.zp[c].set(1, 2, 1, eps * vp[c]);
    s.zm[c].set(1, 2, 1, eps * vm[c]);
    init[c] = vp[c];
    init[3 + c] = vm[c];
  }
  const double T = 5.0, h = 0.01;
  for (int i = 0; i < int(std::lround(T / h)); ++i) sol.step(s, h);
  const auto traj = linear::evolve_linear_full({kFlow.nu, kFlow.alpha, kFlow.sigma, m}, init, 0.0, T, h);
  REQUIRE(traj.times.back() == doctest::Approx(T));
  const auto& ref = traj.values.back();
  double err = 0, scale = 0;
  for (int c = 0; c < 3; ++c) {
    err = std::max({err, std::abs(s.zp[c].at(1, 2, 1) / eps - ref[c]), std::abs(s.zm[c].at(1, 2, 1) / eps - ref[3 + c])});
    scale = std::max({scale, std::abs(ref[c]), std::abs(ref[3 + c])});
  }
  CHECK(err < 1e-2 * scale);
}

TEST_CASE("blow-up is detected") {
  const Grid g = make_grid(16, 16, 16, 1.0);
  Solver sol(g, kFlow);
  ElsasserState s = random_state(g, 13, 3, 0.1);
  s.zp[0].set(1, 1, 1, Complex(std::numeric_limits<double>::quiet_NaN(), 0.0));
  CHECK_THROWS_AS(sol.step(s, 0.01), BlowUpError);
}

TEST_CASE("reformulated equation matches the trajectory") {
  const Grid g = make_grid(16, 16, 16, 1.0);
  Solver sol(g, kFlow);
  ElsasserState s = random_state(g, 17, 4, 0.3, 0.0);
  for (int i = 0; i < 20; ++i) sol.step(s, 0.05);
  const double h = 1e-3;
  const ElsasserState before = s;
  ElsasserState mid = s;
  sol.step(mid, h);
  ElsasserState after = mid;
  sol.step(after, h);
  const auto rep = diag::reform2_residual(before, mid, after, kFlow);
  MESSAGE("residual " << rep.residual << ", nonlinear share " << rep.nonlinear_share);
  CHECK(rep.residual < 1e-3);
  CHECK(rep.nonlinear_share > 0.01);
}

TEST_CASE("config") {
  SolverConfig c = small_config();
  c.sigma = "golden";
  const SolverConfig back = parse_config(to_toml(c));
  CHECK(config_hash(back) == config_hash(c));
  CHECK(back.sigma_value() == doctest::Approx((1 + std::sqrt(5.0)) / 2));
  CHECK(parse_config("").nx == SolverConfig{}.nx);
  CHECK_THROWS_AS(parse_config("[physics]\nnu = -1.0\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[grid]\nnx = \"big\"\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("schema_version = 9\n"), ConfigError);
  CHECK_THROWS_AS(parse_config("[time\n"), ConfigError);
  c.cfl = 2.0;
  CHECK_THROWS_AS(validate(c), ConfigError);
}

TEST_CASE("run, checkpoint and resume") {
  namespace fs = std::filesystem;
  const fs::path dir = fs::temp_directory_path() / "cmhd_test_run";
  fs::remove_all(dir);
  const SolverConfig c = small_config();
  const auto full = run_simulation(c);
  CHECK(full.status == RunStatus::completed);
  CHECK(full.final_state.time == doctest::Approx(1.0));
  CHECK(full.series.size() == 11);

  RunOptions part;
  part.out_dir = (dir / "part").string();
  part.max_steps = 7;
  const auto first = run_simulation(c, part);
  CHECK(first.steps == 7);
  for (const char* f : {"resolved_config.toml", "version.json", "diagnostics.csv", "summary.json", "checkpoint_final.ckpt"})
    CHECK(fs::exists(dir / "part" / f));
  CHECK(config_hash(load_config((dir / "part" / "resolved_config.toml").string())) == config_hash(c));

  const Checkpoint cp = read_checkpoint((dir / "part" / "checkpoint_final.ckpt").string());
  CHECK(cp.step == 7);
  CHECK(bitwise_equal(cp.state, first.final_state));
  RunOptions cont;
  cont.resume = cp;
  const auto second = run_simulation(c, cont);
  CHECK(second.steps == full.steps);
  CHECK(bitwise_equal(second.final_state, full.final_state));

  SolverConfig other = c;
  other.nu = 2e-3;
  CHECK_THROWS_AS(run_simulation(other, cont), ConfigError);
  fs::remove_all(dir);
}

TEST_CASE("zero data run stays at zero") {
  SolverConfig c = small_config();
  c.init.epsilon = 0.0;
  const auto r = run_simulation(c);
  CHECK(r.status == RunStatus::completed);
  for (const auto& rec : r.series)
    for (size_t i = 1; i < rec.values().size(); ++i) CHECK(rec.values()[i] == 0.0);
}

TEST_CASE("under-resolved data raise the resolution alarm") {
  SolverConfig c = small_config();
  c.init.shape = "gaussian";
  c.init.width = 50.0;
  c.init.epsilon = 1e-3;
  const auto r = run_simulation(c);
  CHECK(r.status == RunStatus::resolution_alarm);
  CHECK(r.series.back().tail > c.tail_threshold);
  CHECK(to_string(r.status) == "resolution-alarm");
}
