#include <fstream>
#include <sstream>

#include <toml.hpp>

#include "cmhd/diophantine.hpp"
#include "cmhd/mhd_solver.hpp"

namespace cmhd::solver {

namespace {

constexpr int kSchemaVersion = 1;

template <class T>
T get(const toml::table& t, std::string_view section, std::string_view key, T fallback) {
  const auto node = t[section][key];
  if (!node) return fallback;
  if constexpr (std::is_same_v<T, double>) {
    if (auto v = node.value<double>()) return *v;
  } else if constexpr (std::is_same_v<T, std::uint64_t>) {
    if (auto v = node.value<int64_t>(); v && *v >= 0) return static_cast<std::uint64_t>(*v);
  } else {
    if (auto v = node.value<T>()) return *v;
  }
  throw ConfigError("config: [" + std::string(section) + "]." + std::string(key) + " has the wrong type");
}

}  // namespace

Grid SolverConfig::grid() const { return make_grid(nx, ny, nz, ly); }

double SolverConfig::sigma_value() const { return dioph::Sigma::parse(sigma).value(); }

diag::FlowParams SolverConfig::flow() const { return {nu, alpha, sigma_value(), delta}; }

diag::RegularityLadder SolverConfig::ladder() const { return diag::RegularityLadder::from_n(ladder_n, ladder_N); }

void validate(const SolverConfig& c) {
  (void)c.grid();
  if (!(c.nu >= 0.0)) throw ConfigError("config: nu must be >= 0");
  if (!(c.alpha >= 0.0)) throw ConfigError("config: alpha must be >= 0");
  if (!(c.cfl > 0.0 && c.cfl <= 1.0)) throw ConfigError("config: cfl must lie in (0, 1]");
  if (!(c.t_end > 0.0)) throw ConfigError("config: t_end must be > 0");
  if (!(c.dt_max > 0.0)) throw ConfigError("config: dt_max must be > 0");
  if (!(c.output_cadence > 0.0)) throw ConfigError("config: output_cadence must be > 0");
  if (!(c.tail_threshold > 0.0)) throw ConfigError("config: tail_threshold must be > 0");
  if (c.checkpoint_every < 0) throw ConfigError("config: checkpoint_every must be >= 0");
  (void)c.sigma_value();
  (void)c.ladder();
}

SolverConfig parse_config(const std::string& text) {
  toml::table t;
  try {
    t = toml::parse(text);
  } catch (const toml::parse_error& e) {
    throw ConfigError(std::string("config: ") + std::string(e.description()));
  }
  const int version = static_cast<int>(t["schema_version"].value_or(int64_t{kSchemaVersion}));
  if (version != kSchemaVersion) throw ConfigError("config: unsupported schema_version " + std::to_string(version));
  SolverConfig c;
  c.nx = get<int64_t>(t, "grid", "nx", c.nx);
  c.ny = get<int64_t>(t, "grid", "ny", c.ny);
  c.nz = get<int64_t>(t, "grid", "nz", c.nz);
  c.ly = get<double>(t, "grid", "ly", c.ly);
  c.nu = get<double>(t, "physics", "nu", c.nu);
  c.alpha = get<double>(t, "physics", "alpha", c.alpha);
  c.sigma = get<std::string>(t, "physics", "sigma", c.sigma);
  c.delta = get<double>(t, "physics", "delta", c.delta);
  c.t_end = get<double>(t, "time", "t_end", c.t_end);
  c.dt_max = get<double>(t, "time", "dt_max", c.dt_max);
  c.cfl = get<double>(t, "time", "cfl", c.cfl);
  c.output_cadence = get<double>(t, "time", "output_cadence", c.output_cadence);
  auto& in = c.init;
  in.epsilon = get<double>(t, "init", "epsilon", in.epsilon);
  in.shape = get<std::string>(t, "init", "shape", in.shape);
  in.kmax = get<int64_t>(t, "init", "kmax", in.kmax);
  in.eta_max = get<double>(t, "init", "eta_max", in.eta_max);
  in.lmax = get<int64_t>(t, "init", "lmax", in.lmax);
  in.width = get<double>(t, "init", "width", in.width);
  in.seed = get<std::uint64_t>(t, "init", "seed", in.seed);
  in.norm_index = get<int64_t>(t, "init", "norm_index", in.norm_index);
  in.b_fraction = get<double>(t, "init", "b_fraction", in.b_fraction);
  in.zero_mode_only = get<bool>(t, "init", "zero_mode_only", in.zero_mode_only);
  c.ladder_n = get<int64_t>(t, "run", "ladder_n", c.ladder_n);
  c.ladder_N = get<int64_t>(t, "run", "ladder_N", c.ladder_N);
  c.tail_threshold = get<double>(t, "run", "tail_threshold", c.tail_threshold);
  c.checkpoint_every = get<int64_t>(t, "run", "checkpoint_every", c.checkpoint_every);
  c.lift_up = get<bool>(t, "run", "lift_up", c.lift_up);
  c.nonlinear = get<bool>(t, "run", "nonlinear", c.nonlinear);
  validate(c);
  return c;
}

SolverConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read config " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_config(ss.str());
}

std::string to_toml(const SolverConfig& c) {
  toml::table t{
      {"schema_version", kSchemaVersion},
      {"grid", toml::table{{"nx", c.nx}, {"ny", c.ny}, {"nz", c.nz}, {"ly", c.ly}}},
      {"physics", toml::table{{"nu", c.nu}, {"alpha", c.alpha}, {"sigma", c.sigma}, {"delta", c.delta}}},
      {"time", toml::table{{"t_end", c.t_end},
                           {"dt_max", c.dt_max},
                           {"cfl", c.cfl},
                           {"output_cadence", c.output_cadence}}},
      {"init", toml::table{{"epsilon", c.init.epsilon},
                           {"shape", c.init.shape},
                           {"kmax", c.init.kmax},
                           {"eta_max", c.init.eta_max},
                           {"lmax", c.init.lmax},
                           {"width", c.init.width},
                           {"seed", static_cast<int64_t>(c.init.seed)},
                           {"norm_index", c.init.norm_index},
                           {"b_fraction", c.init.b_fraction},
                           {"zero_mode_only", c.init.zero_mode_only}}},
      {"run", toml::table{{"ladder_n", c.ladder_n},
                          {"ladder_N", c.ladder_N},
                          {"tail_threshold", c.tail_threshold},
                          {"checkpoint_every", c.checkpoint_every},
                          {"lift_up", c.lift_up},
                          {"nonlinear", c.nonlinear}}},
  };
  std::ostringstream os;
  os << t << '\n';
  return os.str();
}

std::uint64_t config_hash(const SolverConfig& c) {
  std::uint64_t h = 14695981039346656037ULL;
  for (unsigned char ch : to_toml(c)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  return h;
}

}  // namespace cmhd::solver
