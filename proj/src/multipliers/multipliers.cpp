#include "cmhd/multipliers.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "cmhd/symbols.hpp"

namespace cmhd::weights {

void validate(const MultiplierParams& p) {
  if (!(p.nu > 0.0 && p.nu <= 1.0)) {
    throw ConfigError("nu must lie in (0, 1], got " + std::to_string(p.nu));
  }
  if (!(p.delta > 0.0)) throw ConfigError("delta must be positive");
}

WeightName parse_weight(std::string_view name) {
  static constexpr std::pair<std::string_view, WeightName> table[] = {
      {"m", WeightName::m},           {"mtilde", WeightName::mtilde}, {"mhalf", WeightName::mhalf},
      {"M1", WeightName::M1},         {"M2", WeightName::M2},         {"M3", WeightName::M3},
      {"M", WeightName::M},           {"lambda", WeightName::lambda}, {"A", WeightName::A},
      {"Atilde", WeightName::Atilde}, {"J", WeightName::J},           {"Jtilde", WeightName::Jtilde},
      {"unit", WeightName::unit}};
  for (const auto& [key, value] : table) {
    if (key == name) return value;
  }
  throw ConfigError("unknown weight '" + std::string(name) + "'");
}

std::string_view to_string(WeightName w) {
  switch (w) {
    case WeightName::m: return "m";
    case WeightName::mtilde: return "mtilde";
    case WeightName::mhalf: return "mhalf";
    case WeightName::M1: return "M1";
    case WeightName::M2: return "M2";
    case WeightName::M3: return "M3";
    case WeightName::M: return "M";
    case WeightName::lambda: return "lambda";
    case WeightName::A: return "A";
    case WeightName::Atilde: return "Atilde";
    case WeightName::J: return "J";
    case WeightName::Jtilde: return "Jtilde";
    case WeightName::unit: return "unit";
  }
  return "?";
}

namespace {

double kt_sq(const ModeIndex& m, double t) { return moving_wave_vector(m, t).norm_sq; }

// Start of the growth window: the critical time eta/k clipped at 0. eta = 0
// puts the critical time at 0.
double window_start(const ModeIndex& m) { return std::max(0.0, m.eta / m.k); }

double japanese(double a) { return std::sqrt(1.0 + a * a); }

}  // namespace

double log_m(const MultiplierParams& p, double t, const ModeIndex& mode) {
  if (mode.k == 0) return 0.0;
  const double crit = mode.eta / mode.k;
  const double end = crit + 4.0 / std::cbrt(p.nu);
  const double start = window_start(mode);
  const double stop = std::min(t, end);
  if (end <= 0.0 || stop <= start) return 0.0;
  return std::log(kt_sq(mode, start)) - std::log(kt_sq(mode, stop));
}

double log_mtilde(const MultiplierParams& p, double t, const ModeIndex& mode) {
  (void)p;
  if (mode.k == 0) return 0.0;
  const double start = window_start(mode);
  if (t <= start) return 0.0;
  return std::log(kt_sq(mode, start)) - std::log(kt_sq(mode, t));
}

double log_ghost(const MultiplierParams& p, double t, const ModeIndex& mode, Ghost which) {
  if (mode.k == 0 || t == 0.0) return 0.0;
  const double k = mode.k, l = mode.l, eta = mode.eta;
  const double a = std::sqrt(k * k + l * l);
  const double sheared = eta - k * t;
  switch (which) {
    case Ghost::M1:
      return -(k / a) * (std::atan(eta / a) - std::atan(sheared / a));
    case Ghost::M2:
      return -(japanese(k * l) / (k * a)) * (std::atan(eta / a) - std::atan(sheared / a));
    case Ghost::M3: {
      const double c = std::cbrt(p.nu);
      return -(k / a) * (std::atan(c * eta / a) - std::atan(c * sheared / a));
    }
  }
  return 0.0;
}

double eval_m(const MultiplierParams& p, double t, const ModeIndex& mode) {
  return std::exp(log_m(p, t, mode));
}

double eval_mtilde(const MultiplierParams& p, double t, const ModeIndex& mode) {
  return std::exp(log_mtilde(p, t, mode));
}

double eval_mhalf(const MultiplierParams& p, double t, const ModeIndex& mode) {
  return std::exp(0.5 * log_m(p, t, mode));
}

double eval_ghost(const MultiplierParams& p, double t, const ModeIndex& mode, Ghost which) {
  return std::exp(log_ghost(p, t, mode, which));
}

double eval_lambda(const MultiplierParams& p, double t) {
  return std::exp(p.delta * std::cbrt(p.nu) * t);
}

double ghost_rate(const MultiplierParams& p, double t, const ModeIndex& mode, Ghost which) {
  if (mode.k == 0) return 0.0;
  const double k = mode.k, l = mode.l;
  const double sheared = mode.eta - k * t;
  const double a2 = k * k + l * l;
  switch (which) {
    case Ghost::M1: return k * k / (a2 + sheared * sheared);
    case Ghost::M2: return japanese(k * l) / (a2 + sheared * sheared);
    case Ghost::M3: {
      const double c = std::cbrt(p.nu);
      return c * k * k / (a2 + c * c * sheared * sheared);
    }
  }
  return 0.0;
}

double m_rate(const MultiplierParams& p, double t, const ModeIndex& mode) {
  if (mode.k == 0) return 0.0;
  const double crit = mode.eta / mode.k;
  const double end = crit + 4.0 / std::cbrt(p.nu);
  if (t < window_start(mode) || t >= end) return 0.0;
  const auto w = moving_wave_vector(mode, t);
  return 2.0 * mode.k * w.kt[1] / w.norm_sq;
}

double mtilde_rate(const MultiplierParams& p, double t, const ModeIndex& mode) {
  (void)p;
  if (mode.k == 0 || t < window_start(mode)) return 0.0;
  const auto w = moving_wave_vector(mode, t);
  return 2.0 * mode.k * w.kt[1] / w.norm_sq;
}

WeightSet eval_all(const MultiplierParams& p, double t, const ModeIndex& mode) {
  WeightSet s{};
  const double lm = log_m(p, t, mode);
  s.m = std::exp(lm);
  s.mtilde = std::exp(log_mtilde(p, t, mode));
  s.mhalf = std::exp(0.5 * lm);
  const double l1 = log_ghost(p, t, mode, Ghost::M1);
  const double l2 = log_ghost(p, t, mode, Ghost::M2);
  const double l3 = log_ghost(p, t, mode, Ghost::M3);
  s.M1 = std::exp(l1);
  s.M2 = std::exp(l2);
  s.M3 = std::exp(l3);
  s.M = std::exp(l1 + l2 + l3);
  s.lambda = eval_lambda(p, t);
  return s;
}

double WeightSet::get(WeightName w, double t) const {
  switch (w) {
    case WeightName::m: return m;
    case WeightName::mtilde: return mtilde;
    case WeightName::mhalf: return mhalf;
    case WeightName::M1: return M1;
    case WeightName::M2: return M2;
    case WeightName::M3: return M3;
    case WeightName::M: return M;
    case WeightName::lambda: return lambda;
    case WeightName::A: return m * M * lambda;
    case WeightName::Atilde: return mtilde * M * lambda;
    case WeightName::J: return mhalf * M * lambda;
    case WeightName::Jtilde: return mhalf * M * lambda / std::sqrt(japanese(t));
    case WeightName::unit: return 1.0;
  }
  return 1.0;
}

double eval_weight(const MultiplierParams& p, double t, const ModeIndex& mode, WeightName w) {
  return eval_all(p, t, mode).get(w, t);
}

double eval_weight(const MultiplierParams& p, double t, const ModeIndex& mode, std::string_view w) {
  return eval_weight(p, t, mode, parse_weight(w));
}

}  // namespace cmhd::weights
