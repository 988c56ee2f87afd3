#include <CLI11.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>

#ifdef _OPENMP
#include <omp.h>
#endif

#include "gvlab/runner.hpp"

namespace {

using namespace gvlab;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitCheckFailed = 2;
constexpr int kExitInternal = 3;

void apply_thread_cap() {
#ifdef _OPENMP
  if (const char* env = std::getenv("GVLAB_THREADS")) {
    const int n = std::atoi(env);
    if (n > 0) omp_set_num_threads(n);
  }
#endif
}

std::array<int, 3> parse_grid(const std::string& s) {
  std::array<int, 3> g{0, 0, 0};
  std::stringstream ss(s);
  std::string tok;
  int i = 0;
  while (std::getline(ss, tok, ',') && i < 3) g[i++] = std::stoi(tok);
  if (i == 1) g[1] = g[2] = g[0];
  if (i == 2) throw CLI::ValidationError("--grid", "expects N or N1,N2,N3");
  return g;
}

std::vector<double> parse_values(const std::string& s) {
  std::vector<double> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) out.push_back(std::stod(tok));
  return out;
}

std::vector<std::string> parse_list(const std::string& s) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ','))
    if (!tok.empty()) out.push_back(tok);
  return out;
}

// Flat key = value config file; '#' starts a comment.
std::map<std::string, std::string> load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  std::map<std::string, std::string> kv;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    const auto eq = line.find('=');
    if (eq == std::string::npos) continue;
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t\r");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = trim(line.substr(0, eq));
    const std::string val = trim(line.substr(eq + 1));
    if (!key.empty()) kv[key] = val;
  }
  return kv;
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream out(out_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot open output file: " + out_path);
    out << text;
  }
}

std::vector<std::string> verb_checks(const std::string& verb,
                                     const Scenario& sc) {
  const auto defaults = default_checks(sc);
  auto filter = [&](std::initializer_list<const char*> wanted) {
    std::vector<std::string> out;
    for (const char* w : wanted)
      for (const auto& d : defaults)
        if (d == w) out.push_back(d);
    return out;
  };
  if (verb == "gv") return filter({"eta", "gv"});
  if (verb == "critical")
    return filter({"lt3", "geo_el", "metric_el", "umbilic", "rectifying"});
  if (verb == "variation") return filter({"variation", "transform", "saddle"});
  if (verb == "jacobi") return filter({"jacobi"});
  if (verb == "frenet") return filter({"frenet"});
  return defaults;
}

struct CommonArgs {
  std::string scenario;
  std::string grid_spec;
  std::string checks_spec;
  std::string config_path;
  std::string out_path;
  double tol_scale = 1.0;
  double dt = 1e-3;
  bool no_timestamp = false;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--scenario", a.scenario, "scenario name");
  cmd->add_option("--grid", a.grid_spec, "grid points: N or N1,N2,N3");
  cmd->add_option("--checks", a.checks_spec, "comma-separated check list");
  cmd->add_option("--tol-scale", a.tol_scale, "tolerance scale factor");
  cmd->add_option("--dt", a.dt, "finite-difference step");
  cmd->add_option("--out", a.out_path, "write the report to a file");
  cmd->add_option("--config", a.config_path, "flat key = value config file");
  cmd->add_flag("--no-timestamp", a.no_timestamp,
                "omit the timestamp field (byte-reproducible output)");
}

void merge_config(CommonArgs& a) {
  if (a.config_path.empty()) return;
  const auto kv = load_config(a.config_path);
  auto pick = [&](const char* key, std::string& dst) {
    if (dst.empty() && kv.count(key)) dst = kv.at(key);
  };
  pick("scenario", a.scenario);
  pick("grid", a.grid_spec);
  pick("checks", a.checks_spec);
  pick("out", a.out_path);
  if (kv.count("tol_scale")) a.tol_scale = std::stod(kv.at("tol_scale"));
  if (kv.count("dt")) a.dt = std::stod(kv.at("dt"));
  if (kv.count("no_timestamp"))
    a.no_timestamp = kv.at("no_timestamp") == "true" ||
                     kv.at("no_timestamp") == "1";
}

int run_verb(const std::string& verb, CommonArgs& a) {
  merge_config(a);
  if (a.scenario.empty()) {
    std::cerr << "error: --scenario is required\n";
    return kExitUsage;
  }
  RunOptions opt;
  opt.scenario = a.scenario;
  if (!a.grid_spec.empty()) opt.grid = parse_grid(a.grid_spec);
  opt.tol_scale = a.tol_scale;
  opt.dt = a.dt;
  opt.timestamp = !a.no_timestamp;
  if (!a.checks_spec.empty()) {
    opt.checks = parse_list(a.checks_spec);
  } else if (verb != "run") {
    opt.checks = verb_checks(verb, find_scenario(a.scenario));
    if (opt.checks.empty()) {
      std::cerr << "error: no '" << verb << "' checks apply to scenario '"
                << a.scenario << "'\n";
      return kExitUsage;
    }
  }
  RunReport rep = run(opt);
  emit(to_json(rep), a.out_path);
  return rep.all_pass ? kExitOk : kExitCheckFailed;
}

}  // namespace

int main(int argc, char** argv) {
  apply_thread_cap();
  CLI::App app{
      "gvlab: Godbillon-Vey type invariants of plane fields with a "
      "transverse direction, on structured 3D grids"};
  app.require_subcommand(1);

  CommonArgs run_args, gv_args, crit_args, var_args, jac_args, fre_args;
  CLI::App* cmd_run = app.add_subcommand("run", "run a custom check list");
  add_common(cmd_run, run_args);
  CLI::App* cmd_gv =
      app.add_subcommand("gv", "both evaluations of the invariant");
  add_common(cmd_gv, gv_args);
  CLI::App* cmd_crit = app.add_subcommand(
      "critical", "Euler-Lagrange and criticality residuals");
  add_common(cmd_crit, crit_args);
  CLI::App* cmd_var = app.add_subcommand(
      "variation", "first/second variations against the FD oracle");
  add_common(cmd_var, var_args);
  CLI::App* cmd_jac =
      app.add_subcommand("jacobi", "Jacobi operator and eigen relations");
  add_common(cmd_jac, jac_args);
  CLI::App* cmd_fre =
      app.add_subcommand("frenet", "Frenet frame residuals");
  add_common(cmd_fre, fre_args);

  CommonArgs sweep_args;
  std::string sweep_axis, sweep_values, sweep_check;
  CLI::App* cmd_sweep =
      app.add_subcommand("sweep", "convergence table over grid/dt/amplitude");
  add_common(cmd_sweep, sweep_args);
  cmd_sweep->add_option("--axis", sweep_axis, "grid | dt | amplitude")
      ->required();
  cmd_sweep->add_option("--values", sweep_values, "comma-separated values")
      ->required();
  cmd_sweep->add_option("--check", sweep_check,
                        "gv_gap | rwood_pointwise | ddalpha | stokes | "
                        "variation_fd | confoliation_margin")
      ->required();

  CLI::App* cmd_list =
      app.add_subcommand("list-scenarios", "print the scenario catalog");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (cmd_list->parsed()) {
      for (const auto& sc : scenario_catalog()) {
        std::cout << sc.name << "  [" << (sc.periodic ? "periodic" : "bounded")
                  << ", default " << sc.default_grid[0] << "x"
                  << sc.default_grid[1] << "x" << sc.default_grid[2] << "]\n  "
                  << sc.description << "\n  checks:";
        for (const auto& c : default_checks(sc)) std::cout << ' ' << c;
        std::cout << "\n";
      }
      return kExitOk;
    }
    if (cmd_sweep->parsed()) {
      merge_config(sweep_args);
      if (sweep_args.scenario.empty()) {
        std::cerr << "error: --scenario is required\n";
        return kExitUsage;
      }
      SweepOptions opt;
      opt.scenario = sweep_args.scenario;
      opt.check = sweep_check;
      opt.axis = sweep_axis;
      opt.values = parse_values(sweep_values);
      if (!sweep_args.grid_spec.empty())
        opt.grid = parse_grid(sweep_args.grid_spec);
      opt.dt = sweep_args.dt;
      emit(to_csv(sweep(opt)), sweep_args.out_path);
      return kExitOk;
    }
    if (cmd_run->parsed()) return run_verb("run", run_args);
    if (cmd_gv->parsed()) return run_verb("gv", gv_args);
    if (cmd_crit->parsed()) return run_verb("critical", crit_args);
    if (cmd_var->parsed()) return run_verb("variation", var_args);
    if (cmd_jac->parsed()) return run_verb("jacobi", jac_args);
    if (cmd_fre->parsed()) return run_verb("frenet", fre_args);
    return kExitUsage;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}
