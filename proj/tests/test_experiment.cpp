#include <doctest.h>

#include <cmath>
#include <limits>

#include "cmhd/experiment.hpp"

using namespace cmhd;
using namespace cmhd::experiment;

namespace {

std::vector<diag::DiagnosticsRecord> series(const std::vector<double>& t, const std::vector<double>& ub) {
  std::vector<diag::DiagnosticsRecord> out;
  for (size_t i = 0; i < t.size(); ++i) {
    diag::DiagnosticsRecord r;
    r.t = t[i];
    r.ub_low = ub[i];
    out.push_back(r);
  }
  return out;
}

ScanSpec tiny_spec() {
  ScanSpec s;
  s.base.nx = s.base.ny = s.base.nz = 8;
  s.base.ly = 1.0;
  s.base.init.kmax = 1;
  s.base.init.eta_max = 1.0;
  s.base.init.lmax = 1;
  s.tend = 0.5;
  s.base.output_cadence = 0.1;
  return s;
}

}  // namespace

TEST_CASE("classify_transition") {
  const std::vector<double> t{0, 2.5, 5, 7.5, 10};
  SUBCASE("constant series is stable") {
    const auto c = classify_transition(series(t, {1, 1, 1, 1, 1}), 100.0);
    CHECK(c.status == CellStatus::stable);
    CHECK(std::isnan(c.crossing_time));
    CHECK(c.peak_ratio == 1.0);
  }
  SUBCASE("crossing at 7.5") {
    const auto c = classify_transition(series(t, {0.01, 0.1, 0.5, 1.0, 3.0}), 100.0);
    CHECK(c.status == CellStatus::transitioned);
    CHECK(c.crossing_time == 7.5);
    CHECK(c.peak_ratio == doctest::Approx(300.0));
  }
  SUBCASE("NaN is blow-up") {
    const auto c = classify_transition(series(t, {1, 2, std::numeric_limits<double>::quiet_NaN(), 1, 1}), 100.0);
    CHECK(c.status == CellStatus::blow_up);
  }
  SUBCASE("run status is respected") {
    CHECK(classify_transition(series(t, {1, 1, 1, 1, 1}), 100.0, solver::RunStatus::resolution_alarm).status ==
          CellStatus::resolution_alarm);
    CHECK(classify_transition(series(t, {1, 1, 1, 1, 1}), 100.0, solver::RunStatus::blow_up).status ==
          CellStatus::blow_up);
    CHECK(classify_transition(series(t, {1, 1, 200, 1, 1}), 100.0, solver::RunStatus::resolution_alarm).status ==
          CellStatus::transitioned);
  }
  SUBCASE("zero series is stable") {
    CHECK(classify_transition(series(t, {0, 0, 0, 0, 0}), 100.0).status == CellStatus::stable);
  }
  SUBCASE("bad input") {
    CHECK_THROWS_AS(classify_transition({}, 100.0), ConfigError);
    CHECK_THROWS_AS(classify_transition(series(t, {1, 1, 1, 1, 1}), 1.0), ConfigError);
    CHECK_THROWS_AS(classify_transition(series({0, 1, 1}, {1, 1, 1}), 100.0), ConfigError);
  }
}

TEST_CASE("scan spec") {
  ScanSpec s;
  s.nus = {1e-3, 1e-4};
  s.gammas = {1.0, 4.0 / 3.0, 2.0};
  s.alpha_multiples = {1.0, 0.0};
  s.sigmas = {"sqrt2", "1"};
  s.repetitions = 2;
  const auto cells = expand(s);
  CHECK(cells.size() == 48);
  CHECK(s.cells() == 48);
  CHECK(cells[0].alpha == doctest::Approx(1.0 / (6.0 - 4.0 * std::sqrt(2.0))).epsilon(1e-10));
  CHECK(cells[0].epsilon == doctest::Approx(0.1 * 1e-3));
  CHECK(cells[1].seed == cells[0].seed + 1);
  CHECK(cells[2].sigma == "1");
  CHECK(cells[2].dioph_c == 0.0);
  CHECK(cells[2].alpha == 1.0);
  CHECK(cell_config(s, cells[0]).t_end == doctest::Approx(50.0));

  const ScanSpec back = parse_scan_spec(to_toml(s));
  CHECK(back.cells() == s.cells());
  CHECK(to_toml(back) == to_toml(s));
  CHECK(parse_scan_spec("[scan]\nnu = [1e-3]\ngamma = [1.5]\n").gammas == std::vector<double>{1.5});
  CHECK_THROWS_AS(parse_scan_spec("[scan]\nnu = []\n"), ConfigError);
  CHECK_THROWS_AS(parse_scan_spec("[scan]\nrmax = 0.5\n"), ConfigError);
  CHECK_THROWS_AS(parse_scan_spec("[scan]\nsigma = [\"pi\"]\n"), ConfigError);
}

TEST_CASE("scan runs") {
  SUBCASE("one cell with zero data is stable") {
    ScanSpec s = tiny_spec();
    s.a_eps = 0.0;
    const auto r = run_scan(s);
    REQUIRE(r.rows.size() == 1);
    CHECK(r.rows[0].cls.status == CellStatus::stable);
  }
  SUBCASE("zero data rows agree across seeds") {
    ScanSpec s = tiny_spec();
    s.a_eps = 0.0;
    s.repetitions = 3;
    const auto r = run_scan(s, 2);
    REQUIRE(r.rows.size() == 3);
    for (const auto& row : r.rows) {
      CHECK(row.cell.index == size_t(&row - r.rows.data()));
      CHECK(row.cls.status == r.rows[0].cls.status);
      CHECK(row.cls.peak_ratio == r.rows[0].cls.peak_ratio);
      CHECK(row.steps == r.rows[0].steps);
    }
  }
  SUBCASE("rerun reproduces the table") {
    ScanSpec s = tiny_spec();
    s.a_eps = 1.0;
    s.gammas = {1.0, 2.0};
    s.alpha_multiples = {1.0, 0.0};
    const auto a = run_scan(s, 1), b = run_scan(s, 3);
    CHECK(a.rows.size() == 4);
    CHECK(scan_csv(a, false) == scan_csv(b, false));
  }
  SUBCASE("cell failures are recorded") {
    ScanSpec s = tiny_spec();
    s.base.init.kmax = 0;
    s.base.init.eta_max = 0.0;
    s.base.init.lmax = 0;
    const auto r = run_scan(s);
    REQUIRE(r.rows.size() == 1);
    CHECK(r.rows[0].message.find("cell failed") == 0);
  }
}

TEST_CASE("smoke preset: the control grows more than the magnetized run") {
  const auto r = run_scan(smoke_preset());
  REQUIRE(r.rows.size() == 2);
  const auto& mag = r.rows[0];
  const auto& ctl = r.rows[1];
  REQUIRE(mag.cell.alpha > 0.0);
  REQUIRE(ctl.cell.alpha == 0.0);
  MESSAGE("peak ratio magnetized " << mag.cls.peak_ratio << ", control " << ctl.cls.peak_ratio);
  CHECK(ctl.cls.peak_ratio > mag.cls.peak_ratio);
  CHECK(ctl.peak_zero_ub_ratio > mag.peak_zero_ub_ratio);
}

TEST_CASE("shipped configs parse") {
  const std::string dir = CMHD_SOURCE_DIR "/configs/";
  const auto scan = load_scan_spec(dir + "scan_gamma.toml");
  CHECK(scan.cells() == 96);
  CHECK(scan.base.nx == 16);
  const auto run = solver::load_config(dir + "small_run.toml");
  CHECK(run.init.eta_max == 1.0);
  CHECK(run.checkpoint_every == 4);
}
