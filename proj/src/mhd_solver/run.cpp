#include <bit>
#include <cmath>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <iostream>

#include <json.hpp>

#include "cmhd/mhd_solver.hpp"
#include "cmhd/version.hpp"

namespace cmhd::solver {

namespace {

constexpr char kMagic[8] = {'C', 'M', 'H', 'D', 'C', 'K', 'P', '1'};

void require_little_endian() {
  if constexpr (std::endian::native != std::endian::little) {
    throw std::runtime_error("checkpoint I/O requires a little-endian host");
  }
}

double next_output_time(double t, double cadence) {
  const double q = t / cadence;
  const double n = std::round(q);
  return (std::abs(q - n) < 1e-6 ? n + 1.0 : std::ceil(q)) * cadence;
}

}  // namespace

std::string to_string(RunStatus s) {
  switch (s) {
    case RunStatus::completed:
      return "completed";
    case RunStatus::blow_up:
      return "blow-up";
    case RunStatus::resolution_alarm:
      return "resolution-alarm";
  }
  return "unknown";
}

void write_checkpoint(const std::string& path, const ElsasserState& s, std::uint64_t hash, long long step) {
  require_little_endian();
  const Grid& g = s.grid();
  const nlohmann::json header{
      {"format_version", 1},
      {"grid", {{"nx", g.nx}, {"ny", g.ny}, {"nz", g.nz}, {"ly", g.ly}}},
      {"time", s.time},
      {"step", step},
      {"config_hash", hash},
      {"components", {"zp1", "zp2", "zp3", "zm1", "zm2", "zm3"}},
      {"layout", "[ix][iy][iz], iz < nz/2+1, flattened (ix*ny+iy)*(nz/2+1)+iz"},
      {"value_type", "complex float64, interleaved (re, im)"},
      {"endianness", "little"}};
  const std::string h = header.dump();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write checkpoint " + path);
  out.write(kMagic, sizeof kMagic);
  const std::uint64_t len = h.size();
  out.write(reinterpret_cast<const char*>(&len), sizeof len);
  out.write(h.data(), static_cast<std::streamsize>(h.size()));
  for (const VectorField* v : {&s.zp, &s.zm})
    for (const auto& c : *v) {
      out.write(reinterpret_cast<const char*>(c.coeffs().data()),
                static_cast<std::streamsize>(c.size() * sizeof(Complex)));
    }
  if (!out) throw std::runtime_error("short write on checkpoint " + path);
}

Checkpoint read_checkpoint(const std::string& path) {
  require_little_endian();
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read checkpoint " + path);
  char magic[8];
  in.read(magic, sizeof magic);
  if (!in || std::memcmp(magic, kMagic, sizeof magic) != 0) throw ConfigError(path + ": not a checkpoint file");
  std::uint64_t len = 0;
  in.read(reinterpret_cast<char*>(&len), sizeof len);
  if (!in || len > (1u << 20)) throw ConfigError(path + ": corrupt checkpoint header");
  std::string h(len, '\0');
  in.read(h.data(), static_cast<std::streamsize>(len));
  const auto header = nlohmann::json::parse(h);
  if (header.at("format_version") != 1) throw ConfigError(path + ": unsupported checkpoint version");
  const auto& gj = header.at("grid");
  const Grid g = make_grid(gj.at("nx"), gj.at("ny"), gj.at("nz"), gj.at("ly"));
  Checkpoint cp;
  cp.state = make_zero_state(g, header.at("time").get<double>());
  cp.config_hash = header.at("config_hash").get<std::uint64_t>();
  cp.step = header.at("step").get<long long>();
  for (VectorField* v : {&cp.state.zp, &cp.state.zm})
    for (auto& c : *v) {
      in.read(reinterpret_cast<char*>(c.coeffs().data()), static_cast<std::streamsize>(c.size() * sizeof(Complex)));
      c.time = cp.state.time;
    }
  if (!in) throw ConfigError(path + ": truncated checkpoint");
  return cp;
}

RunResult run_simulation(const SolverConfig& config, const RunOptions& opt) {
  validate(config);
  const Grid grid = config.grid();
  const auto flow = config.flow();
  const auto ladder = config.ladder();
  const std::uint64_t hash = config_hash(config);
  namespace fs = std::filesystem;
  if (!opt.out_dir.empty()) {
    fs::create_directories(opt.out_dir);
    std::ofstream(fs::path(opt.out_dir) / "resolved_config.toml") << to_toml(config);
    std::ofstream(fs::path(opt.out_dir) / "version.json") << version_stamp().dump(2) << '\n';
  }

  RunResult res;
  ElsasserState s;
  if (opt.resume) {
    if (!(opt.resume->state.grid() == grid)) throw ConfigError("resume: checkpoint grid does not match config");
    if (opt.resume->config_hash != hash) throw ConfigError("resume: checkpoint was written by a different config");
    s = opt.resume->state;
    res.steps = opt.resume->step;
  } else {
    const int norm_index = config.init.norm_index < 0 ? ladder.N + 2 : config.init.norm_index;
    s = initial_data(grid, config.init, norm_index);
    res.series.push_back(diag::record(s, ladder, flow));
  }

  Solver solver(grid, flow, {config.lift_up, config.nonlinear, {}});
  double next_out = next_output_time(s.time, config.output_cadence);
  const double t_end = config.t_end;
  int records_since_ckpt = 0;
  auto checkpoint = [&](const std::string& name) {
    if (!opt.out_dir.empty()) write_checkpoint((fs::path(opt.out_dir) / name).string(), s, hash, res.steps);
  };

  while (s.time < t_end * (1.0 - 1e-12)) {
    if (opt.max_steps >= 0 && res.steps >= opt.max_steps) {
      res.message = "stopped after max_steps = " + std::to_string(opt.max_steps);
      break;
    }
    double dt = solver.suggest_dt(s, config.dt_max, config.cfl);
    dt = std::min({dt, next_out - s.time, t_end - s.time});
    try {
      solver.step(s, dt);
    } catch (const BlowUpError& e) {
      res.status = RunStatus::blow_up;
      res.message = e.what();
      res.t_stop = e.time;
      break;
    }
    ++res.steps;
    if (s.time >= next_out - 1e-9 * std::max(1.0, next_out) || s.time >= t_end * (1.0 - 1e-12)) {
      const auto r = diag::record(s, ladder, flow);
      res.series.push_back(r);
      next_out = next_output_time(s.time, config.output_cadence);
      if (opt.verbose) {
        std::cerr << "t=" << r.t << " ub_low=" << r.ub_low << " ed_lap=" << r.ed_lap << " tail=" << r.tail << '\n';
      }
      if (config.checkpoint_every > 0 && ++records_since_ckpt == config.checkpoint_every) {
        records_since_ckpt = 0;
        checkpoint("checkpoint_" + std::to_string(res.steps) + ".ckpt");
      }
      if (!(r.tail <= config.tail_threshold)) {
        res.status = RunStatus::resolution_alarm;
        res.message = "spectral tail fraction " + std::to_string(r.tail) + " exceeds threshold";
        break;
      }
    }
  }
  if (res.status != RunStatus::blow_up) res.t_stop = s.time;
  res.final_state = s;
  if (!opt.out_dir.empty()) {
    checkpoint("checkpoint_final.ckpt");
    diag::write_csv(res.series, (fs::path(opt.out_dir) / "diagnostics.csv").string());
    auto j = diag::summary_json(res.series);
    j["status"] = to_string(res.status);
    j["message"] = res.message;
    j["steps"] = res.steps;
    j["t_stop"] = res.t_stop;
    j["config_hash"] = hash;
    std::ofstream(fs::path(opt.out_dir) / "summary.json") << j.dump(2) << '\n';
  }
  return res;
}

}  // namespace cmhd::solver
