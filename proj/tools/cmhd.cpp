#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>

#include <CLI11.hpp>
#include <json.hpp>
#include <toml.hpp>

#include "cmhd/diophantine.hpp"
#include "cmhd/experiment.hpp"
#include "cmhd/linear_modes.hpp"
#include "cmhd/multipliers.hpp"
#include "cmhd/version.hpp"

namespace fs = std::filesystem;
using namespace cmhd;

namespace {

struct Globals {
  int threads = 1;
  std::optional<std::uint64_t> seed;
  std::string out;
};

void write_text(const fs::path& p, const std::string& text) {
  if (p.has_parent_path()) fs::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw std::runtime_error("cannot write " + p.string());
  out << text;
}

std::string dump_toml(const toml::table& t) {
  std::ostringstream os;
  os << t << '\n';
  return os.str();
}

// Directory outputs get resolved_config.toml and version.json; file outputs
// get <stem>.config.toml and <stem>.version.json beside them.
void stamp_dir(const fs::path& dir, const std::string& config) {
  fs::create_directories(dir);
  write_text(dir / "resolved_config.toml", config);
  write_text(dir / "version.json", version_stamp().dump(2) + "\n");
}

void stamp_file(const fs::path& file, const std::string& config) {
  const fs::path base = file.parent_path() / file.stem();
  write_text(base.string() + ".config.toml", config);
  write_text(base.string() + ".version.json", version_stamp().dump(2) + "\n");
}

int verify_multipliers(const Globals& g, const std::vector<double>& nus, const std::vector<double>& ghost_nus,
                       double delta, const std::string& report) {
  nlohmann::json j;
  bool ok = true;
  for (double nu : nus) {
    const auto r = weights::verify_lemma_stretch({nu, delta});
    j["stretch"].push_back(weights::to_json(r));
    ok = ok && r.passed();
    std::cout << "stretch nu=" << nu << ": " << (r.passed() ? "pass" : "FAIL") << '\n';
    for (const auto& x : r.results) std::cout << "  " << x.name << " C=" << x.constant << (x.passed ? "" : " FAIL") << '\n';
  }
  const auto gr = weights::verify_ghost_enhanced(ghost_nus, {}, delta);
  j["ghost_enhanced"] = weights::to_json(gr);
  std::cout << "ghost enhanced: variation " << gr.ratio_variation << " (tolerance " << gr.ratio_tolerance << "), "
            << (gr.passed() ? "pass" : "FAIL") << '\n';
  ok = ok && gr.passed();
  j["passed"] = ok;
  const std::string path = !report.empty() ? report : (g.out.empty() ? "multipliers.json" : g.out);
  write_text(path, j.dump(2) + "\n");
  toml::array nu_arr, gh_arr;
  for (double v : nus) nu_arr.push_back(v);
  for (double v : ghost_nus) gh_arr.push_back(v);
  stamp_file(path, dump_toml(toml::table{{"verify_multipliers", toml::table{{"nu", nu_arr}, {"ghost_nu", gh_arr}, {"delta", delta}}}}));
  return ok ? 0 : 1;
}

int verify_linear(const Globals& g, std::vector<std::string> suites, double dt) {
  if (suites.empty()) suites = linear::suite_names();
  const fs::path dir = g.out.empty() ? fs::path("linear_out") : fs::path(g.out);
  linear::SuiteOptions opt;
  opt.dt = dt;
  nlohmann::json summary;
  bool ok = true;
  for (const auto& s : suites) {
    const auto r = linear::run_linear_suite(s, opt);
    fs::create_directories(dir);
    linear::write_csv(r, (dir / (s + ".csv")).string());
    summary["suites"][s] = linear::to_json(r);
    ok = ok && r.passed();
    std::cout << s << ": " << (r.passed() ? "pass" : "FAIL") << '\n';
    for (const auto& c : r.checks)
      std::cout << "  " << c.name << " value=" << c.value << " tol=" << c.tolerance << (c.passed ? "" : " FAIL") << '\n';
  }
  summary["passed"] = ok;
  write_text(dir / "summary.json", summary.dump(2) + "\n");
  toml::array arr;
  for (const auto& s : suites) arr.push_back(s);
  stamp_dir(dir, dump_toml(toml::table{{"verify_linear", toml::table{{"suites", arr}, {"dt", dt}}}}));
  return ok ? 0 : 1;
}

int dioph_cmd(const Globals& g, const std::string& sigma, int n, std::int64_t bound) {
  const auto cert = dioph::dioph_constant(dioph::Sigma::parse(sigma), n, bound);
  const auto j = dioph::to_json(cert);
  std::cout << j.dump(2) << '\n';
  if (!g.out.empty()) {
    write_text(g.out, j.dump(2) + "\n");
    stamp_file(g.out, dump_toml(toml::table{{"dioph", toml::table{{"sigma", sigma}, {"n", n}, {"bound", bound}}}}));
  }
  return 0;
}

int simulate(const Globals& g, const std::string& config, const std::string& resume, long long max_steps, bool verbose) {
  auto cfg = solver::load_config(config);
  if (g.seed) cfg.init.seed = *g.seed;
  solver::RunOptions opt;
  opt.out_dir = g.out.empty() ? "run_out" : g.out;
  opt.max_steps = max_steps;
  opt.verbose = verbose;
  if (!resume.empty()) opt.resume = solver::read_checkpoint(resume);
  const auto r = solver::run_simulation(cfg, opt);
  std::cout << "status " << solver::to_string(r.status) << ", t = " << r.t_stop << ", steps " << r.steps;
  if (!r.message.empty()) std::cout << " (" << r.message << ")";
  std::cout << '\n';
  return r.status == solver::RunStatus::completed ? 0 : 2;
}

int scan(const Globals& g, const std::string& spec_path, const std::string& preset) {
  experiment::ScanSpec spec;
  if (!spec_path.empty()) {
    spec = experiment::load_scan_spec(spec_path);
  } else if (preset == "smoke") {
    spec = experiment::smoke_preset();
  } else {
    throw ConfigError("scan: give --spec or --preset smoke");
  }
  if (g.seed) spec.base_seed = *g.seed;
  experiment::validate(spec);
  const fs::path dir = g.out.empty() ? fs::path("scan_out") : fs::path(g.out);
  stamp_dir(dir, experiment::to_toml(spec));
  std::cout << spec.cells() << " cells on " << g.threads << " thread(s)\n";
  const auto r = experiment::run_scan(spec, g.threads);
  experiment::write_scan_csv(r, (dir / "scan.csv").string());
  std::map<std::string, int> counts;
  for (const auto& row : r.rows) ++counts[experiment::to_string(row.cls.status)];
  for (const auto& [k, v] : counts) std::cout << k << ": " << v << '\n';
  return 0;
}

int report(const Globals& g, const std::string& input) {
  const fs::path in(input);
  nlohmann::json j;
  if (fs::is_directory(in) && fs::exists(in / "diagnostics.csv")) {
    j = diag::summary_json(diag::read_csv((in / "diagnostics.csv").string()));
    j["source"] = (in / "diagnostics.csv").string();
  } else if (fs::is_directory(in) && fs::exists(in / "scan.csv")) {
    std::ifstream f(in / "scan.csv");
    std::string line;
    std::getline(f, line);
    std::map<std::string, int> counts;
    int rows = 0;
    while (std::getline(f, line)) {
      std::stringstream ss(line);
      std::string field;
      for (int i = 0; i < 10 && std::getline(ss, field, ','); ++i) {
      }
      ++counts[field];
      ++rows;
    }
    j["source"] = (in / "scan.csv").string();
    j["rows"] = rows;
    j["status_counts"] = counts;
  } else {
    throw ConfigError("report: " + input + " holds neither diagnostics.csv nor scan.csv");
  }
  const std::string text = j.dump(2) + "\n";
  if (g.out.empty()) {
    std::cout << text;
  } else {
    write_text(g.out, text);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Couette MHD spectral laboratory"};
  app.set_version_flag("--version", version());
  app.require_subcommand(1);
  app.fallthrough();
  Globals g;
  std::uint64_t seed = 0;
  app.add_option("--threads", g.threads, "worker threads for scans")->check(CLI::PositiveNumber);
  auto* seed_opt = app.add_option("--seed", seed, "override the random seed");
  app.add_option("--out", g.out, "output file or directory");

  auto* vm = app.add_subcommand("verify-multipliers", "check the multiplier lemma inequalities");
  std::vector<double> nus{1e-2, 1e-4, 1e-6}, ghost_nus{1e-2, 1e-4, 1e-6};
  double delta = 0.01;
  std::string report_path;
  vm->add_option("--nu", nus, "viscosities for the stretch lemma")->expected(1, -1);
  vm->add_option("--ghost-nu", ghost_nus, "viscosities for the ghost ratio")->expected(3, -1);
  vm->add_option("--delta", delta, "lambda rate");
  vm->add_option("--report", report_path, "JSON report path");

  auto* vl = app.add_subcommand("verify-linear", "run the per-mode linear suites");
  std::vector<std::string> suites;
  double dt = 1e-3;
  vl->add_option("--suite", suites, "suite name (repeatable)")->check(CLI::IsMember(linear::suite_names()));
  vl->add_option("--dt", dt, "step size");

  auto* dp = app.add_subcommand("dioph", "Diophantine certificate for sigma");
  std::string sigma = "sqrt2";
  int n = 1;
  std::int64_t bound = 100000;
  dp->add_option("--sigma", sigma, "sigma descriptor");
  dp->add_option("--n", n, "exponent");
  dp->add_option("--bound", bound, "brute-force search bound");

  auto* sim = app.add_subcommand("simulate", "nonlinear run from a TOML config");
  std::string config, resume;
  long long max_steps = -1;
  bool verbose = false;
  sim->add_option("--config", config, "run config (TOML)")->required()->check(CLI::ExistingFile);
  sim->add_option("--resume", resume, "checkpoint to continue from")->check(CLI::ExistingFile);
  sim->add_option("--max-steps", max_steps, "stop after this many steps");
  sim->add_flag("--verbose", verbose, "log each record");

  auto* sc = app.add_subcommand("scan", "threshold scan over (epsilon, nu, alpha, sigma)");
  std::string spec_path, preset;
  sc->add_option("--spec", spec_path, "scan spec (TOML)")->check(CLI::ExistingFile);
  sc->add_option("--preset", preset, "built-in spec")->check(CLI::IsMember({"smoke"}));

  auto* rp = app.add_subcommand("report", "summarise a run or scan directory");
  std::string input;
  rp->add_option("--input", input, "run or scan output directory")->required()->check(CLI::ExistingDirectory);

  CLI11_PARSE(app, argc, argv);
  if (seed_opt->count() > 0) g.seed = seed;
  try {
    if (*vm) return verify_multipliers(g, nus, ghost_nus, delta, report_path);
    if (*vl) return verify_linear(g, suites, dt);
    if (*dp) return dioph_cmd(g, sigma, n, bound);
    if (*sim) return simulate(g, config, resume, max_steps, verbose);
    if (*sc) return scan(g, spec_path, preset);
    if (*rp) return report(g, input);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 3;
  }
  return 0;
}
