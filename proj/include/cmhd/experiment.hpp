#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <vector>

#include "cmhd/diagnostics.hpp"
#include "cmhd/mhd_solver.hpp"

namespace cmhd::experiment {

enum class CellStatus { stable, transitioned, blow_up, resolution_alarm };
std::string to_string(CellStatus s);

struct Classification {
  CellStatus status = CellStatus::stable;
  double crossing_time = std::numeric_limits<double>::quiet_NaN();
  double peak_ratio = 0;  // max of ub_low(t)/ub_low(first record)
};

/// Tracks R(t) = ub_low(t)/ub_low(t_first). Transitioned at the first record
/// with R >= rmax; any NaN gives blow-up; an alarm without a crossing gives
/// resolution-alarm.
Classification classify_transition(const std::vector<diag::DiagnosticsRecord>& series, double rmax,
                                   solver::RunStatus run_status = solver::RunStatus::completed);

struct ScanSpec {
  solver::SolverConfig base;
  std::vector<double> nus{1e-3};
  std::vector<double> gammas{1.0};
  double a_eps = 0.1;                     // epsilon = a_eps nu^gamma
  std::vector<double> alpha_multiples{1.0};
  std::string alpha_rule = "certificate";  // certificate: alpha = m C0 / c; absolute: alpha = m
  double c0 = 1.0;
  int dioph_n = 1;
  std::int64_t dioph_bound = 100000;
  std::vector<std::string> sigmas{"sqrt2"};
  int repetitions = 1;
  std::uint64_t base_seed = 1;
  double rmax = 100.0;
  double tend_factor = 5.0;  // t_end = tend_factor nu^{-1/3}
  double tend = 0.0;         // > 0 overrides tend_factor

  [[nodiscard]] size_t cells() const;
};

void validate(const ScanSpec& s);
/// nu = 1e-3, gamma = 1, sigma = sqrt2 with alpha = C0/c against an alpha = 0
/// control, on a 16 x 32 x 16 grid.
ScanSpec smoke_preset();
/// Solver sections as in parse_config, plus a [scan] table.
ScanSpec parse_scan_spec(const std::string& toml_text);
ScanSpec load_scan_spec(const std::string& path);
std::string to_toml(const ScanSpec& s);

struct Cell {
  size_t index = 0;
  double nu = 0, gamma = 0, epsilon = 0, alpha_multiple = 0, alpha = 0, dioph_c = 0;
  std::string sigma;
  std::uint64_t seed = 0;
};

/// Row-major over (nu, gamma, alpha multiple, sigma, repetition).
std::vector<Cell> expand(const ScanSpec& s);
solver::SolverConfig cell_config(const ScanSpec& s, const Cell& c);

struct CellResult {
  Cell cell;
  Classification cls;
  double peak_zero_ub_ratio = 0;
  double peak_ub_low_orig_ratio = 0;
  double peak_ed_lap_ratio = 0;
  double t_stop = 0;
  long long steps = 0;
  double runtime = 0;  // seconds, wall clock
  std::string message;
};

struct ScanResult {
  std::vector<CellResult> rows;  // sorted by cell index
};

/// Runs every cell on `threads` workers. Cell failures are recorded in the row.
ScanResult run_scan(const ScanSpec& s, int threads = 1);

/// Columns: cell, nu, gamma, epsilon, alpha, alpha_multiple, sigma_id, dioph_c, seed, status,
/// peak_ub_low_ratio, peak_ub_low_orig_ratio, peak_zero_ub_ratio, peak_ed_lap_ratio,
/// crossing_time, t_stop, steps, runtime, message.
void write_scan_csv(const ScanResult& r, const std::string& path);
std::string scan_csv(const ScanResult& r, bool include_runtime = true);

}  // namespace cmhd::experiment
