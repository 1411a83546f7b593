#pragma once

#include <array>
#include <string>
#include <vector>

#include <json.hpp>

#include "cmhd/grid.hpp"
#include "cmhd/spectral_field.hpp"

namespace cmhd::linear {

struct LinParams {
  double nu = 0.0;
  double alpha = 0.0;
  double sigma = 1.4142135623730951;
  ModeIndex mode;
};

/// Recorded samples of a per-mode system. values[i] holds the state at times[i].
struct ModeTrajectory {
  std::string system;
  std::vector<double> times;
  std::vector<std::vector<Complex>> values;

  [[nodiscard]] size_t size() const { return times.size(); }
  /// sqrt(sum |values[i][c]|^2) over the listed components.
  [[nodiscard]] double norm(size_t i, std::initializer_list<int> components) const;
};

/// Largest step used for a system oscillating at angular frequency `freq`:
/// min(dt, 0.01, 0.1/(1 + |freq|)).
double resolved_dt(double dt, double freq);

/// Angular frequency 2 alpha (sigma k + l) of the relative transport T_{2 alpha}.
double relative_frequency(const LinParams& p);

/// Full per-mode linearisation of the profile system, state (Z+^1..3, Z-^1..3):
///   dZ^+/dt = -(g,0,0) + k k_t (Z^{+,2} + g)/|k_t|^2 - nu |k_t|^2 Z^+,  g = T_{2a} Z^{-,2}
/// and symmetrically for Z^-. The k k_t term carries both the pressure of
/// the lift-up forcing and the motion of the frame, so k_t . Z^pm is conserved.
ModeTrajectory evolve_linear_full(const LinParams& p, const std::array<Complex, 6>& init, double t0,
                                  double t1, double dt, int record_stride = 1);

struct F2Options {
  bool oscillation = true;  // keep the T_{pm 2 alpha} coupling on the right-hand side
};

/// dF^{pm,2}/dt = -S F^{pm,2} + S T_{pm 2 alpha} F^{mp,2} - nu |k_t|^2 F^{pm,2},
/// S = k (eta - k t)/|k_t|^2. State (F+, F-). Requires k != 0.
ModeTrajectory evolve_F2_pair(const LinParams& p, const std::array<Complex, 2>& init, double t0,
                              double t1, double dt, F2Options opt = {}, int record_stride = 1);

struct F13Options {
  bool forcing = true;      // lift-up and pressure couplings to F^{pm,2}
  bool oscillation = true;  // T_{pm 2 alpha} factors on the coupled terms
};

/// j in {1, 3}:
///   dF^{pm,j}/dt = -2 S F^{pm,j} - [j=1] T F^{mp,2} + P_j (F^{pm,2} + T F^{mp,2}) - nu |k_t|^2 F^{pm,j},
/// P_j = k (k_t)_j / |k_t|^2. The companion F2 trajectory supplies the
/// initial F^{pm,2}; both are integrated jointly. State (F+j, F-j, F+2, F-2).
ModeTrajectory evolve_F13(const LinParams& p, int j, const std::array<Complex, 2>& init,
                          const ModeTrajectory* companion, double t0, double t1, double dt,
                          F13Options opt = {}, int record_stride = 1);

/// dF^pm/dt - F^pm/t = e^{pm i omega t} F^mp / t on t >= 1. State (F+, F-).
ModeTrajectory evolve_model(double omega, const std::array<Complex, 2>& init, double t0, double t1,
                            double dt, bool coupled = true, int record_stride = 1);

/// exp(-nu (k^2 t + eta^2 t - k eta t^2 + k^2 t^3/3 + l^2 t)).
double enhanced_dissipation_factor(double nu, const ModeIndex& mode, double t);

/// Least-squares slope of log y against log t over samples with t in [t_lo, t_hi].
double fit_power_law(const std::vector<double>& t, const std::vector<double>& y, double t_lo,
                     double t_hi);

// ---------------------------------------------------------------------------
// Verification suites.

struct SuiteRow {
  double t = 0;
  std::string quantity;
  double closed_form = 0;
  double numeric = 0;
  double rel_error = 0;
};

struct SuiteCheck {
  std::string name;
  bool passed = false;
  double value = 0;
  double tolerance = 0;
  std::string detail;
};

struct SuiteResult {
  std::string suite;
  std::vector<SuiteRow> rows;
  std::vector<SuiteCheck> checks;
  [[nodiscard]] bool passed() const;
};

struct SuiteOptions {
  double dt = 1e-3;
  double sigma = 1.4142135623730951;
  double dioph_c = 0.34314575050761981;  // 6 - 4 sqrt 2
  int csv_stride = 100;
};

const std::vector<std::string>& suite_names();
SuiteResult run_linear_suite(const std::string& name, const SuiteOptions& opt = {});

void write_csv(const SuiteResult& r, const std::string& path);
nlohmann::json to_json(const SuiteResult& r);

}  // namespace cmhd::linear
