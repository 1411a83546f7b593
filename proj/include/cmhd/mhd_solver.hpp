#pragma once

#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "cmhd/diagnostics.hpp"
#include "cmhd/grid.hpp"
#include "cmhd/spectral_field.hpp"
#include "cmhd/transform.hpp"

namespace cmhd::solver {

struct InitSpec {
  double epsilon = 1e-5;
  std::string shape = "band";  // band | gaussian
  int kmax = 2;                // band: |k| <= kmax, |eta| <= eta_max, |l| <= lmax
  double eta_max = 2.0;
  int lmax = 2;
  double width = 2.0;          // gaussian: exp(-|xi|^2 / (2 width^2))
  std::uint64_t seed = 1;
  int norm_index = -1;         // -1: N + 2 of the regularity ladder
  double b_fraction = 1.0;     // b drawn with this amplitude relative to u
  bool zero_mode_only = false; // keep only k = 0 modes
};

struct SolverConfig {
  int nx = 32, ny = 64, nz = 32;
  double ly = 4.0;
  double nu = 1e-3;
  double alpha = 1.0;
  std::string sigma = "sqrt2";
  double delta = 0.01;
  double t_end = 10.0;
  double dt_max = 0.02;
  double cfl = 0.5;
  double output_cadence = 0.5;
  InitSpec init;
  int ladder_n = 1;
  int ladder_N = -1;
  double tail_threshold = 1e-6;
  int checkpoint_every = 0;  // records between checkpoints; 0 = final only
  bool lift_up = true;
  bool nonlinear = true;

  [[nodiscard]] Grid grid() const;
  [[nodiscard]] double sigma_value() const;
  [[nodiscard]] diag::FlowParams flow() const;
  [[nodiscard]] diag::RegularityLadder ladder() const;
};

void validate(const SolverConfig& c);
SolverConfig parse_config(const std::string& toml_text);
SolverConfig load_config(const std::string& path);
/// Fully resolved config, readable by parse_config.
std::string to_toml(const SolverConfig& c);
/// FNV-1a of to_toml(c).
std::uint64_t config_hash(const SolverConfig& c);

/// Random divergence-free (u, b) with the requested envelope, scaled so that
/// ||(u,b)||_{H^s} = epsilon, returned as Z^pm = u -+ b at t = 0.
ElsasserState initial_data(const Grid& grid, const InitSpec& spec, int norm_index);

class BlowUpError : public std::runtime_error {
 public:
  BlowUpError(const std::string& what, double time) : std::runtime_error(what), time(time) {}
  double time;
};

struct SolverOptions {
  bool lift_up = true;
  bool nonlinear = true;
  /// Adds f(t) to the right-hand side; f is written into `rhs`, which holds zeros.
  std::function<void(double t, ElsasserState& rhs)> forcing;
};

/// Lawson (integrating-factor) RK4 for
///   dZ/dt = P_t(-(T Z^mp) . grad_L Z^pm - (T Z^{mp,2}, 0, 0)) + k_t k Z^{pm,2}/|k_t|^2 + nu Delta_L Z^pm.
/// The k_t k Z^2 term keeps k_t . Z = 0 as k_t moves.
class Solver {
 public:
  Solver(const Grid& grid, const diag::FlowParams& p, SolverOptions opt = {});
  ~Solver();
  Solver(const Solver&) = delete;
  Solver& operator=(const Solver&) = delete;

  /// (T_{pm 2 alpha} Z^mp) . grad_L Z^pm, dealiased, not projected.
  void nonlinear_term(const ElsasserState& s, VectorField& np, VectorField& nm);
  /// Everything except the viscous term, evaluated at s.time.
  void rhs(const ElsasserState& s, ElsasserState& out);
  /// One step of size dt; projects onto k_t . Z = 0 at the new time.
  void step(ElsasserState& s, double dt);
  /// min(dt_max, cfl/(max |Z| max |k_t|), 0.1/(1 + 2 alpha)).
  double suggest_dt(const ElsasserState& s, double dt_max, double cfl);

  [[nodiscard]] const Grid& grid() const;

 private:
  struct Impl;
  std::unique_ptr<Impl> impl_;
};

enum class RunStatus { completed, blow_up, resolution_alarm };
std::string to_string(RunStatus s);

struct Checkpoint {
  ElsasserState state;
  std::uint64_t config_hash = 0;
  long long step = 0;
};

/// Little-endian container: magic "CMHDCKP1", u64 header length, JSON header
/// (grid, time, step, config hash, component order, layout), then the six
/// complex components as interleaved (re, im) float64.
void write_checkpoint(const std::string& path, const ElsasserState& s, std::uint64_t hash, long long step);
Checkpoint read_checkpoint(const std::string& path);

struct RunOptions {
  std::string out_dir;                  // empty: nothing written
  std::optional<Checkpoint> resume;     // continue from this state
  long long max_steps = -1;             // stop early (testing)
  bool verbose = false;
};

struct RunResult {
  RunStatus status = RunStatus::completed;
  std::vector<diag::DiagnosticsRecord> series;
  ElsasserState final_state;
  long long steps = 0;
  double t_stop = 0;
  std::string message;
};

RunResult run_simulation(const SolverConfig& config, const RunOptions& opt = {});

}  // namespace cmhd::solver
