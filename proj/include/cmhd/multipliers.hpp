#pragma once

#include <string>
#include <string_view>
#include <vector>

#include <json.hpp>

#include "cmhd/grid.hpp"

namespace cmhd::weights {

struct MultiplierParams {
  double nu = 1e-3;     // nu = mu in (0, 1]
  double delta = 0.01;  // rate in lambda = exp(delta nu^{1/3} t)
};

void validate(const MultiplierParams& p);

enum class WeightName { m, mtilde, mhalf, M1, M2, M3, M, lambda, A, Atilde, J, Jtilde, unit };

WeightName parse_weight(std::string_view name);
std::string_view to_string(WeightName w);

enum class Ghost { M1, M2, M3 };

// Log-space evaluators. All weights lie in (0, 1] except lambda >= 1.
double log_m(const MultiplierParams& p, double t, const ModeIndex& mode);
double log_mtilde(const MultiplierParams& p, double t, const ModeIndex& mode);
double log_ghost(const MultiplierParams& p, double t, const ModeIndex& mode, Ghost which);

double eval_m(const MultiplierParams& p, double t, const ModeIndex& mode);
double eval_mtilde(const MultiplierParams& p, double t, const ModeIndex& mode);
double eval_mhalf(const MultiplierParams& p, double t, const ModeIndex& mode);
double eval_ghost(const MultiplierParams& p, double t, const ModeIndex& mode, Ghost which);
double eval_lambda(const MultiplierParams& p, double t);

/// -dM_j/dt / M_j, the defining rate of a ghost multiplier (0 for k = 0).
double ghost_rate(const MultiplierParams& p, double t, const ModeIndex& mode, Ghost which);
/// d/dt log m and d/dt log mtilde (right derivative at branch points).
double m_rate(const MultiplierParams& p, double t, const ModeIndex& mode);
double mtilde_rate(const MultiplierParams& p, double t, const ModeIndex& mode);

/// Composite weights: A = m M lambda, Atilde = mtilde M lambda,
/// J = m^{1/2} M lambda, Jtilde = <t>^{-1/2} J.
double eval_weight(const MultiplierParams& p, double t, const ModeIndex& mode, WeightName w);
double eval_weight(const MultiplierParams& p, double t, const ModeIndex& mode, std::string_view w);

/// Every weight of one mode at one time, evaluated with shared work.
struct WeightSet {
  double m, mtilde, mhalf, M1, M2, M3, M, lambda;
  [[nodiscard]] double get(WeightName w, double t) const;
};
WeightSet eval_all(const MultiplierParams& p, double t, const ModeIndex& mode);

// ---------------------------------------------------------------------------
// Empirical checks of the multiplier lemmas.

struct SampleSpec {
  int k_max = 8;         // k in [-k_max, k_max] \ {0}
  int l_max = 8;         // l in [-l_max, l_max]
  double eta_max = 32;   // eta on an evenly spaced grid in [-eta_max, eta_max]
  int eta_points = 65;
  int t_points = 64;     // log-spaced in (0, t_factor nu^{-1/3}], plus t = 0
  double t_factor = 10.0;
  double t_min = 1e-2;

  [[nodiscard]] std::vector<double> etas() const;
  [[nodiscard]] std::vector<double> times(double nu) const;
};

struct SamplePoint {
  int k = 0;
  double eta = 0;
  int l = 0;
  double t = 0;
  double eta2 = 0;  // second frequency, used by the commutator check
  int l2 = 0;
};

struct InequalityResult {
  std::string name;
  std::string statement;
  double constant = 0;  // worst ratio found (lhs/rhs)
  SamplePoint extremal;
  bool passed = false;
  long long samples = 0;
};

struct StretchReport {
  MultiplierParams params;
  std::vector<InequalityResult> results;
  [[nodiscard]] bool passed() const;
};

StretchReport verify_lemma_stretch(const MultiplierParams& p, const SampleSpec& spec = {});

struct GhostNuResult {
  double nu = 0;
  double ratio_min = 0;  // min of (nu^{1/2}|k_t| + sqrt(-M3' M3)) / nu^{1/6}
  SamplePoint ratio_argmin;
  double m_min = 0;      // min of M = M1 M2 M3
  SamplePoint m_argmin;
  double m_max = 0;
};

struct GhostReport {
  std::vector<GhostNuResult> per_nu;
  double ratio_variation = 0;   // (max - min)/max of ratio_min across nu
  double m_floor = 0;           // e^{-3 pi}
  double ratio_tolerance = 0.10;
  bool ratio_stable = false;
  bool m_bounded = false;      // e^{-3 pi} <= M <= 1 on every sample
  [[nodiscard]] bool passed() const { return ratio_stable && m_bounded; }
};

/// nus must span at least three decades.
GhostReport verify_ghost_enhanced(const std::vector<double>& nus, const SampleSpec& spec = {},
                                  double delta = 0.01);

nlohmann::json to_json(const StretchReport& r);
nlohmann::json to_json(const GhostReport& r);

}  // namespace cmhd::weights
