#include <atomic>
#include <chrono>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>
#include <thread>

#include <toml.hpp>

#include "cmhd/diophantine.hpp"
#include "cmhd/experiment.hpp"

namespace cmhd::experiment {

namespace {

template <class T>
std::vector<T> array_or(const toml::table& t, std::string_view key, std::vector<T> fallback) {
  const auto node = t[key];
  if (!node) return fallback;
  const auto* arr = node.as_array();
  if (!arr) throw ConfigError("scan: '" + std::string(key) + "' must be an array");
  std::vector<T> out;
  for (const auto& e : *arr) {
    const std::optional<T> v = e.template value<T>();
    if (!v) throw ConfigError("scan: '" + std::string(key) + "' has an entry of the wrong type");
    out.push_back(*v);
  }
  return out;
}

template <class T>
T scalar_or(const toml::table& t, std::string_view key, T fallback) {
  const auto node = t[key];
  if (!node) return fallback;
  if (auto v = node.value<T>()) return *v;
  throw ConfigError("scan: '" + std::string(key) + "' has the wrong type");
}

double ratio(double v, double first) {
  if (first > 0.0) return v / first;
  return v > 0.0 ? std::numeric_limits<double>::infinity() : 0.0;
}

double peak_ratio(const std::vector<diag::DiagnosticsRecord>& series, double diag::DiagnosticsRecord::*field) {
  if (series.empty()) return 0.0;
  double m = 0.0;
  for (const auto& r : series) m = std::max(m, ratio(r.*field, series.front().*field));
  return m;
}

}  // namespace

std::string to_string(CellStatus s) {
  switch (s) {
    case CellStatus::stable:
      return "stable";
    case CellStatus::transitioned:
      return "transitioned";
    case CellStatus::blow_up:
      return "blow-up";
    case CellStatus::resolution_alarm:
      return "resolution-alarm";
  }
  return "unknown";
}

Classification classify_transition(const std::vector<diag::DiagnosticsRecord>& series, double rmax,
                                   solver::RunStatus run_status) {
  if (series.empty()) throw ConfigError("classify_transition: empty series");
  if (!(rmax > 1.0)) throw ConfigError("classify_transition: rmax must exceed 1");
  Classification c;
  for (const auto& r : series)
    for (double v : r.values())
      if (std::isnan(v)) {
        c.status = CellStatus::blow_up;
        return c;
      }
  const double first = series.front().ub_low;
  for (size_t i = 0; i < series.size(); ++i) {
    if (i > 0 && !(series[i].t > series[i - 1].t)) throw ConfigError("classify_transition: times must increase");
    const double r = ratio(series[i].ub_low, first);
    c.peak_ratio = std::max(c.peak_ratio, r);
    if (r >= rmax && c.status == CellStatus::stable) {
      c.status = CellStatus::transitioned;
      c.crossing_time = series[i].t;
    }
  }
  if (c.status == CellStatus::transitioned) return c;
  if (run_status == solver::RunStatus::blow_up) c.status = CellStatus::blow_up;
  if (run_status == solver::RunStatus::resolution_alarm) c.status = CellStatus::resolution_alarm;
  return c;
}

size_t ScanSpec::cells() const {
  return nus.size() * gammas.size() * alpha_multiples.size() * sigmas.size() * size_t(std::max(repetitions, 0));
}

void validate(const ScanSpec& s) {
  solver::validate(s.base);
  if (s.nus.empty() || s.gammas.empty() || s.alpha_multiples.empty() || s.sigmas.empty() || s.repetitions < 1) {
    throw ConfigError("scan: every list must be nonempty and repetitions >= 1");
  }
  for (double nu : s.nus)
    if (!(nu > 0.0 && nu <= 1.0)) throw ConfigError("scan: nu must lie in (0, 1]");
  for (double m : s.alpha_multiples)
    if (!(m >= 0.0)) throw ConfigError("scan: alpha multiples must be >= 0");
  if (!(s.rmax > 1.0)) throw ConfigError("scan: rmax must exceed 1");
  if (!(s.a_eps >= 0.0)) throw ConfigError("scan: a_eps must be >= 0");
  if (!(s.tend_factor > 0.0) && !(s.tend > 0.0)) throw ConfigError("scan: need tend_factor > 0 or tend > 0");
  if (s.alpha_rule != "certificate" && s.alpha_rule != "absolute") {
    throw ConfigError("scan: alpha_rule must be 'certificate' or 'absolute'");
  }
  if (!(s.c0 > 0.0)) throw ConfigError("scan: c0 must be > 0");
  for (const auto& d : s.sigmas) (void)dioph::Sigma::parse(d);
}

ScanSpec smoke_preset() {
  ScanSpec s;
  s.base.nx = 16;
  s.base.ny = 32;
  s.base.nz = 16;
  s.base.init.eta_max = 1.0;
  s.nus = {1e-3};
  s.gammas = {1.0};
  s.alpha_multiples = {1.0, 0.0};
  s.sigmas = {"sqrt2"};
  return s;
}

ScanSpec parse_scan_spec(const std::string& text) {
  ScanSpec s;
  s.base = solver::parse_config(text);
  const toml::table root = toml::parse(text);
  if (const auto* t = root["scan"].as_table()) {
    s.nus = array_or<double>(*t, "nu", s.nus);
    s.gammas = array_or<double>(*t, "gamma", s.gammas);
    s.a_eps = scalar_or<double>(*t, "a_eps", s.a_eps);
    s.alpha_multiples = array_or<double>(*t, "alpha_multiples", s.alpha_multiples);
    s.alpha_rule = scalar_or<std::string>(*t, "alpha_rule", s.alpha_rule);
    s.c0 = scalar_or<double>(*t, "c0", s.c0);
    s.dioph_n = int(scalar_or<int64_t>(*t, "dioph_n", s.dioph_n));
    s.dioph_bound = scalar_or<int64_t>(*t, "dioph_bound", s.dioph_bound);
    s.sigmas = array_or<std::string>(*t, "sigma", s.sigmas);
    s.repetitions = int(scalar_or<int64_t>(*t, "repetitions", s.repetitions));
    s.base_seed = std::uint64_t(scalar_or<int64_t>(*t, "base_seed", int64_t(s.base_seed)));
    s.rmax = scalar_or<double>(*t, "rmax", s.rmax);
    s.tend_factor = scalar_or<double>(*t, "tend_factor", s.tend_factor);
    s.tend = scalar_or<double>(*t, "tend", s.tend);
  }
  validate(s);
  return s;
}

ScanSpec load_scan_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot read scan spec " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_scan_spec(ss.str());
}

std::string to_toml(const ScanSpec& s) {
  auto arr = [](const auto& v) {
    toml::array a;
    for (const auto& x : v) a.push_back(x);
    return a;
  };
  toml::table scan{{"nu", arr(s.nus)},
                   {"gamma", arr(s.gammas)},
                   {"a_eps", s.a_eps},
                   {"alpha_multiples", arr(s.alpha_multiples)},
                   {"alpha_rule", s.alpha_rule},
                   {"c0", s.c0},
                   {"dioph_n", s.dioph_n},
                   {"dioph_bound", s.dioph_bound},
                   {"sigma", arr(s.sigmas)},
                   {"repetitions", s.repetitions},
                   {"base_seed", static_cast<int64_t>(s.base_seed)},
                   {"rmax", s.rmax},
                   {"tend_factor", s.tend_factor},
                   {"tend", s.tend}};
  std::ostringstream os;
  os << solver::to_toml(s.base) << '\n' << toml::table{{"scan", scan}} << '\n';
  return os.str();
}

std::vector<Cell> expand(const ScanSpec& s) {
  validate(s);
  std::map<std::string, double> certs;
  if (s.alpha_rule == "certificate") {
    for (const auto& d : s.sigmas)
      if (!certs.count(d)) certs[d] = dioph::dioph_constant(dioph::Sigma::parse(d), s.dioph_n, s.dioph_bound).c;
  }
  std::vector<Cell> out;
  for (double nu : s.nus)
    for (double gamma : s.gammas)
      for (double mult : s.alpha_multiples)
        for (const auto& sig : s.sigmas)
          for (int rep = 0; rep < s.repetitions; ++rep) {
            Cell c;
            c.index = out.size();
            c.nu = nu;
            c.gamma = gamma;
            c.epsilon = s.a_eps * std::pow(nu, gamma);
            c.alpha_multiple = mult;
            c.sigma = sig;
            c.seed = s.base_seed + std::uint64_t(rep);
            if (s.alpha_rule == "certificate") {
              c.dioph_c = certs.at(sig);
              c.alpha = c.dioph_c > 0.0 ? mult * s.c0 / c.dioph_c : mult * s.c0;
            } else {
              c.alpha = mult;
            }
            out.push_back(c);
          }
  return out;
}

solver::SolverConfig cell_config(const ScanSpec& s, const Cell& c) {
  solver::SolverConfig cfg = s.base;
  cfg.nu = c.nu;
  cfg.alpha = c.alpha;
  cfg.sigma = c.sigma;
  cfg.init.epsilon = c.epsilon;
  cfg.init.seed = c.seed;
  cfg.t_end = s.tend > 0.0 ? s.tend : s.tend_factor * std::cbrt(1.0 / c.nu);
  return cfg;
}

ScanResult run_scan(const ScanSpec& s, int threads) {
  const auto cells = expand(s);
  ScanResult res;
  res.rows.resize(cells.size());
  std::atomic<size_t> next{0};
  auto worker = [&] {
    for (size_t i = next++; i < cells.size(); i = next++) {
      CellResult& row = res.rows[i];
      row.cell = cells[i];
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const auto run = solver::run_simulation(cell_config(s, cells[i]));
        row.cls = classify_transition(run.series, s.rmax, run.status);
        row.peak_zero_ub_ratio = peak_ratio(run.series, &diag::DiagnosticsRecord::zero_ub);
        row.peak_ub_low_orig_ratio = peak_ratio(run.series, &diag::DiagnosticsRecord::ub_low_orig);
        row.peak_ed_lap_ratio = peak_ratio(run.series, &diag::DiagnosticsRecord::ed_lap);
        row.t_stop = run.t_stop;
        row.steps = run.steps;
        row.message = run.message;
      } catch (const std::exception& e) {
        row.cls.status = CellStatus::blow_up;
        row.message = std::string("cell failed: ") + e.what();
      }
      row.runtime = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    }
  };
  const int n = std::max(1, std::min<int>(threads, int(cells.size())));
  std::vector<std::thread> pool;
  for (int i = 1; i < n; ++i) pool.emplace_back(worker);
  worker();
  for (auto& t : pool) t.join();
  return res;
}

std::string scan_csv(const ScanResult& r, bool include_runtime) {
  std::ostringstream os;
  os << std::setprecision(17);
  os << "cell,nu,gamma,epsilon,alpha,alpha_multiple,sigma_id,dioph_c,seed,status,peak_ub_low_ratio,"
        "peak_ub_low_orig_ratio,peak_zero_ub_ratio,peak_ed_lap_ratio,crossing_time,t_stop,steps,runtime,message\n";
  for (const auto& row : r.rows) {
    const auto& c = row.cell;
    std::string msg = row.message;
    for (char& ch : msg)
      if (ch == ',' || ch == '\n' || ch == '"') ch = ';';
    os << c.index << ',' << c.nu << ',' << c.gamma << ',' << c.epsilon << ',' << c.alpha << ',' << c.alpha_multiple
       << ',' << c.sigma << ',' << c.dioph_c << ',' << c.seed << ',' << to_string(row.cls.status) << ','
       << row.cls.peak_ratio << ',' << row.peak_ub_low_orig_ratio << ',' << row.peak_zero_ub_ratio << ','
       << row.peak_ed_lap_ratio << ',' << row.cls.crossing_time << ',' << row.t_stop << ',' << row.steps << ',';
    if (include_runtime) os << row.runtime;
    os << ',' << msg << '\n';
  }
  return os.str();
}

void write_scan_csv(const ScanResult& r, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << scan_csv(r);
}

}  // namespace cmhd::experiment
