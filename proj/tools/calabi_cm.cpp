// calabi-cm: continuity-method laboratory for Calabi-symmetric metrics on
// P(O + O(-k)) -> CP^{n-1}. Subcommands: classify, run, report, sweep, check.

#include <atomic>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <mutex>
#include <sstream>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "calabi/errors.hpp"
#include "calabi/run_io.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;        // checks/verdict failed
constexpr int kExitInvalid = 2;     // invalid surface parameters
constexpr int kExitStalled = 3;     // continuation stalled (partial artifacts kept)
constexpr int kExitUnwritable = 4;  // output directory not writable
constexpr int kExitBadRun = 5;      // missing or corrupt run directory
constexpr int kExitUsage = 64;

struct ParamArgs {
  int n = 0;
  int k = 0;
  std::string a0, b0;
};

calabi::SurfaceParams parse_params(const ParamArgs& args) {
  const auto a0r = calabi::Rational::parse(args.a0);
  const auto b0r = calabi::Rational::parse(args.b0);
  if (a0r && b0r) return calabi::SurfaceParams::make_exact(args.n, args.k, *a0r, *b0r);
  // fall back to binary floating point for non-rational text
  calabi::SurfaceParams p;
  p.n = args.n;
  p.k = args.k;
  p.a0 = std::strtod(args.a0.c_str(), nullptr);
  p.b0 = std::strtod(args.b0.c_str(), nullptr);
  p.validate();
  return p;
}

std::string compact(double v, const std::optional<calabi::Rational>& exact) {
  if (exact) return exact->str();
  std::ostringstream s;
  s << v;
  return s.str();
}

int cmd_classify(const ParamArgs& args, bool as_json) {
  const auto params = parse_params(args);
  const auto rep = calabi::classify(params);
  if (as_json) {
    nlohmann::json j;
    j["case"] = calabi::to_string(rep.case_label);
    j["T"] = rep.T;
    j["aT"] = rep.aT;
    j["bT"] = rep.bT;
    if (rep.T_exact) j["T_exact"] = rep.T_exact->str();
    if (rep.aT_exact) j["aT_exact"] = rep.aT_exact->str();
    if (rep.bT_exact) j["bT_exact"] = rep.bT_exact->str();
    std::cout << j.dump(2) << "\n";
  } else {
    std::cout << "Case " << calabi::to_string(rep.case_label) << ", T="
              << compact(rep.T, rep.T_exact) << ", aT=" << compact(rep.aT, rep.aT_exact)
              << ", bT=" << compact(rep.bT, rep.bT_exact) << "\n";
  }
  return kExitOk;
}

int run_one(calabi::RunConfig config, bool dry_run, bool quiet) {
  if (dry_run) {
    config.apply_case_override();
    const auto schedule = calabi::planned_schedule(config);
    const auto rep = calabi::classify(config.params);
    std::cout << "case " << calabi::to_string(rep.case_label) << ", T = " << rep.T << "\n";
    std::cout << "schedule (" << schedule.size() << " times):";
    for (double t : schedule) std::cout << ' ' << t;
    std::cout << "\n(dry run, nothing written)\n";
    return kExitOk;
  }
  const auto art = calabi::run_pipeline(config, quiet ? nullptr : &std::cout);
  if (art.stalled) {
    std::cerr << "continuation stalled at t = " << art.continuation.stalled_at
              << "; partial artifacts in " << art.dir << "\n";
    return kExitStalled;
  }
  return kExitOk;
}

int cmd_sweep(const std::string& config_path, int jobs) {
  std::ifstream in(config_path);
  if (!in) throw calabi::run_dir_error("cannot open sweep config " + config_path);
  nlohmann::json j;
  in >> j;
  if (!j.contains("runs") || !j["runs"].is_array())
    throw std::invalid_argument("sweep config needs a \"runs\" array");

  std::vector<calabi::RunConfig> configs;
  for (const auto& rj : j["runs"]) {
    // each entry is a full flat run config document
    const auto tmp = std::filesystem::temp_directory_path() /
                     ("sweep_cfg_" + std::to_string(configs.size()) + ".json");
    std::ofstream tmpout(tmp);
    tmpout << rj.dump();
    tmpout.close();
    configs.push_back(calabi::RunConfig::from_json_file(tmp));
    std::filesystem::remove(tmp);
  }
  if (j.contains("jobs") && jobs <= 0) jobs = j["jobs"].get<int>();
  if (jobs <= 0) jobs = 1;

  std::atomic<std::size_t> next{0};
  std::atomic<int> worst{kExitOk};
  std::mutex io;
  auto worker = [&] {
    while (true) {
      const std::size_t i = next.fetch_add(1);
      if (i >= configs.size()) return;
      int code = kExitOk;
      std::string note;
      try {
        code = run_one(configs[i], false, true);
      } catch (const calabi::invalid_params& e) {
        code = kExitInvalid;
        note = e.what();
      } catch (const calabi::output_error& e) {
        code = kExitUnwritable;
        note = e.what();
      } catch (const std::exception& e) {
        code = kExitFail;
        note = e.what();
      }
      {
        std::lock_guard<std::mutex> lock(io);
        std::cout << "[" << i << "] " << configs[i].out_dir << " -> "
                  << (code == kExitOk ? "ok" : ("exit " + std::to_string(code)))
                  << (note.empty() ? "" : (": " + note)) << "\n";
      }
      int cur = worst.load();
      while (code > cur && !worst.compare_exchange_weak(cur, code)) {
      }
    }
  };
  std::vector<std::thread> pool;
  const int nthreads = std::min<int>(jobs, static_cast<int>(configs.size()));
  for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
  for (auto& th : pool) th.join();
  return worst.load();
}

int cmd_check(const std::string& path, int step) {
  namespace fs = std::filesystem;
  calabi::CheckResult res;
  if (fs::is_directory(path)) {
    res = calabi::check_run_step(path, step);
  } else {
    res = calabi::check_profile(path);
  }
  std::cout << "calabi conditions: min u' = " << res.calabi.min_u1 << " at node "
            << res.calabi.min_u1_node << ", min u'' (interior) = " << res.calabi.min_u2_interior
            << " at node " << res.calabi.min_u2_node
            << ", |u(0)| = " << res.calabi.normalization_residual << "\n";
  std::cout << "  admissible=" << res.calabi.admissible << " normalized=" << res.calabi.normalized
            << " divisor_smooth=" << res.calabi.divisor_smooth << "\n";
  if (res.cross) {
    std::cout << "scalar curvature routes: |direct-trace| = " << res.cross->max_rel_12
              << ", |direct-v| = " << res.cross->max_rel_13
              << ", |trace-v| = " << res.cross->max_rel_23 << " (tol " << res.cross->tolerance
              << ", worst node " << res.cross->worst_node << ")\n";
  }
  std::cout << (res.pass ? "PASS" : "FAIL") << "\n";
  return res.pass ? kExitOk : kExitFail;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"continuity-method laboratory on P(O + O(-k)) -> CP^{n-1}"};
  app.require_subcommand(1);

  // classify
  ParamArgs cargs;
  bool cjson = false;
  auto* classify = app.add_subcommand("classify", "case split and singular time for (n,k,a0,b0)");
  classify->add_option("-n", cargs.n, "complex dimension")->required();
  classify->add_option("-k", cargs.k, "bundle twist")->required();
  classify->add_option("--a0", cargs.a0, "initial [D_H] coefficient (fractions accepted)")->required();
  classify->add_option("--b0", cargs.b0, "initial coefficient with b0 > a0 (fractions accepted)")->required();
  classify->add_flag("--json", cjson, "machine-readable output");

  // run
  std::string run_config_path;
  ParamArgs rargs;
  std::string out_dir, case_flag, profile_format, initial_profile;
  int grid_n = 0, halvings = 0, steps_per_halving = 0, max_iters = 0;
  double newton_tol = 0;
  bool dry_run = false, quiet = false;
  auto* run = app.add_subcommand("run", "solve the continuation and write run artifacts");
  run->add_option("--config", run_config_path, "flat JSON run config; flags override");
  run->add_option("-n", rargs.n, "complex dimension");
  run->add_option("-k", rargs.k, "bundle twist");
  run->add_option("--a0", rargs.a0, "initial [D_H] coefficient");
  run->add_option("--b0", rargs.b0, "initial coefficient, b0 > a0");
  run->add_option("--out", out_dir, "output directory");
  run->add_option("--grid-n", grid_n, "grid nodes (odd, >= 65)");
  run->add_option("--halvings", halvings, "geometric schedule depth J");
  run->add_option("--steps-per-halving", steps_per_halving, "schedule densification");
  run->add_option("--newton-tol", newton_tol, "Newton residual tolerance");
  run->add_option("--max-newton-iters", max_iters, "Newton iteration cap");
  run->add_option("--case", case_flag, "'ii' rebuilds b0 = a0 (n+k)/(n-k) exactly");
  run->add_option("--profile-format", profile_format, "'bin' or 'json'");
  run->add_option("--initial-profile", initial_profile, "psi0 from a stored profile");
  run->add_flag("--dry-run", dry_run, "print the schedule and write nothing");
  run->add_flag("--quiet", quiet, "suppress progress output");

  // report
  std::string report_dir, report_out;
  auto* report = app.add_subcommand("report", "emit plot-ready CSVs and the exponent table");
  report->add_option("run_dir", report_dir, "completed or partial run directory")->required();
  report->add_option("--out", report_out, "bundle directory (default <run_dir>/report)");

  // sweep
  std::string sweep_config;
  int sweep_jobs = 0;
  auto* sweep = app.add_subcommand("sweep", "run several configs, one worker per run");
  sweep->add_option("config", sweep_config, "JSON with a \"runs\" array of run configs")->required();
  sweep->add_option("--jobs", sweep_jobs, "parallel workers (default: config or 1)");

  // check
  std::string check_path;
  int check_step = -1;
  auto* check = app.add_subcommand("check", "validate a stored profile or a run step");
  check->add_option("path", check_path, "profile file or run directory")->required();
  check->add_option("--step", check_step, "step index inside a run directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*classify) return cmd_classify(cargs, cjson);

    if (*run) {
      calabi::RunConfig config;
      if (!run_config_path.empty()) config = calabi::RunConfig::from_json_file(run_config_path);
      if (rargs.n || rargs.k || !rargs.a0.empty() || !rargs.b0.empty()) {
        ParamArgs merged = rargs;
        if (!run_config_path.empty()) {  // partial override of file params
          if (!merged.n) merged.n = config.params.n;
          if (!merged.k) merged.k = config.params.k;
          if (merged.a0.empty())
            merged.a0 = config.params.a0_exact ? config.params.a0_exact->str()
                                               : std::to_string(config.params.a0);
          if (merged.b0.empty())
            merged.b0 = config.params.b0_exact ? config.params.b0_exact->str()
                                               : std::to_string(config.params.b0);
        }
        config.params = parse_params(merged);
      }
      if (!out_dir.empty()) config.out_dir = out_dir;
      if (grid_n) config.N = grid_n;
      if (halvings) config.schedule_halvings = halvings;
      if (steps_per_halving) config.steps_per_halving = steps_per_halving;
      if (newton_tol > 0) config.newton_tol = newton_tol;
      if (max_iters) config.max_newton_iters = max_iters;
      if (!profile_format.empty()) config.profile_format = profile_format;
      if (!initial_profile.empty()) config.initial_profile = initial_profile;
      if (!case_flag.empty()) {
        if (case_flag == "ii" || case_flag == "II") config.case_override = calabi::Case::II;
        else if (case_flag != "auto") throw std::invalid_argument("--case accepts 'auto' or 'ii'");
      }
      if (config.out_dir.empty() && !dry_run)
        throw std::invalid_argument("run needs --out or an out_dir in the config");
      return run_one(std::move(config), dry_run, quiet);
    }

    if (*report) {
      const std::filesystem::path rd(report_dir);
      const std::filesystem::path od = report_out.empty() ? rd / "report" : std::filesystem::path(report_out);
      const auto res = calabi::write_report_bundle(rd, od);
      std::cout << res.exponents_table;
      if (res.partial) std::cout << "note: partial run (continuation stalled)\n";
      std::cout << "bundle written to " << od << "\n";
      return kExitOk;
    }

    if (*sweep) return cmd_sweep(sweep_config, sweep_jobs);

    if (*check) return cmd_check(check_path, check_step);
  } catch (const calabi::invalid_params& e) {
    std::cerr << "invalid parameters: " << e.what() << "\n";
    return kExitInvalid;
  } catch (const calabi::output_error& e) {
    std::cerr << e.what() << "\n";
    return kExitUnwritable;
  } catch (const calabi::run_dir_error& e) {
    std::cerr << e.what() << "\n";
    return kExitBadRun;
  } catch (const std::invalid_argument& e) {
    std::cerr << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  }
  return kExitUsage;
}
