#include "calabi/run_io.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <fstream>
#include <iostream>
#include <sstream>

#include <nlohmann/json.hpp>

#include "calabi/errors.hpp"

namespace calabi {

namespace {

using nlohmann::json;

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw output_error("cannot write " + path.string());
  out << text;
  if (!out) throw output_error("short write to " + path.string());
}

json params_to_json(const SurfaceParams& p) {
  json j;
  j["n"] = p.n;
  j["k"] = p.k;
  if (p.a0_exact) j["a0"] = p.a0_exact->str();
  else j["a0"] = p.a0;
  if (p.b0_exact) j["b0"] = p.b0_exact->str();
  else j["b0"] = p.b0;
  return j;
}

SurfaceParams params_from_json(const json& j) {
  SurfaceParams p;
  p.n = j.at("n").get<int>();
  p.k = j.at("k").get<int>();
  auto coeff = [](const json& v, double& out_d, std::optional<Rational>& out_r) {
    if (v.is_string()) {
      auto r = Rational::parse(v.get<std::string>());
      if (!r) throw std::invalid_argument("unparsable coefficient: " + v.get<std::string>());
      out_r = *r;
      out_d = r->value();
    } else if (v.is_number_integer()) {
      out_r = Rational(v.get<std::int64_t>());
      out_d = static_cast<double>(v.get<std::int64_t>());
    } else {
      out_d = v.get<double>();
    }
  };
  coeff(j.at("a0"), p.a0, p.a0_exact);
  coeff(j.at("b0"), p.b0, p.b0_exact);
  return p;
}

json windows_to_json(const VerdictWindows& w) {
  return json{{"rm_lo", w.rm_lo},
              {"rm_hi", w.rm_hi},
              {"R_lo", w.R_lo},
              {"R_hi", w.R_hi},
              {"fiber_lo", w.fiber_lo},
              {"fiber_hi", w.fiber_hi},
              {"case3_rm_max", w.case3_rm_max},
              {"case3_R_max", w.case3_R_max},
              {"fit_gap_hi_rel", w.fit_gap_hi_rel},
              {"fit_gap_lo_rel", w.fit_gap_lo_rel},
              {"essential_span", w.essential_span},
              {"min_r_squared", w.min_r_squared}};
}

VerdictWindows windows_from_json(const json& j) {
  VerdictWindows w;
  if (j.contains("rm_lo")) w.rm_lo = j["rm_lo"].get<double>();
  if (j.contains("rm_hi")) w.rm_hi = j["rm_hi"].get<double>();
  if (j.contains("R_lo")) w.R_lo = j["R_lo"].get<double>();
  if (j.contains("R_hi")) w.R_hi = j["R_hi"].get<double>();
  if (j.contains("fiber_lo")) w.fiber_lo = j["fiber_lo"].get<double>();
  if (j.contains("fiber_hi")) w.fiber_hi = j["fiber_hi"].get<double>();
  if (j.contains("case3_rm_max")) w.case3_rm_max = j["case3_rm_max"].get<double>();
  if (j.contains("case3_R_max")) w.case3_R_max = j["case3_R_max"].get<double>();
  if (j.contains("fit_gap_hi_rel")) w.fit_gap_hi_rel = j["fit_gap_hi_rel"].get<double>();
  if (j.contains("fit_gap_lo_rel")) w.fit_gap_lo_rel = j["fit_gap_lo_rel"].get<double>();
  if (j.contains("essential_span")) w.essential_span = j["essential_span"].get<double>();
  if (j.contains("min_r_squared")) w.min_r_squared = j["min_r_squared"].get<double>();
  return w;
}

}  // namespace

RunConfig RunConfig::from_json_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw run_dir_error("cannot open config " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw run_dir_error("config parse error in " + path.string() + ": " + e.what());
  }
  RunConfig c;
  c.params = params_from_json(j);
  if (j.contains("N")) c.N = j["N"].get<int>();
  if (j.contains("newton_tol")) c.newton_tol = j["newton_tol"].get<double>();
  if (j.contains("max_newton_iters")) c.max_newton_iters = j["max_newton_iters"].get<int>();
  if (j.contains("damping")) c.damping = j["damping"].get<double>();
  if (j.contains("min_gap_rel")) c.min_gap_rel = j["min_gap_rel"].get<double>();
  if (j.contains("schedule_halvings")) c.schedule_halvings = j["schedule_halvings"].get<int>();
  if (j.contains("steps_per_halving")) c.steps_per_halving = j["steps_per_halving"].get<int>();
  if (j.contains("ramp_rel")) c.ramp_rel = j["ramp_rel"].get<std::vector<double>>();
  if (j.contains("explicit_schedule"))
    c.explicit_schedule = j["explicit_schedule"].get<std::vector<double>>();
  if (j.contains("out_dir")) c.out_dir = j["out_dir"].get<std::string>();
  if (j.contains("profile_format")) c.profile_format = j["profile_format"].get<std::string>();
  if (j.contains("samples_stride")) c.samples_stride = j["samples_stride"].get<int>();
  if (j.contains("write_samples")) c.write_samples = j["write_samples"].get<bool>();
  if (j.contains("seed")) c.seed = j["seed"].get<std::uint64_t>();
  if (j.contains("tmin_rel")) c.tmin_rel = j["tmin_rel"].get<double>();
  if (j.contains("windows")) c.windows = windows_from_json(j["windows"]);
  if (j.contains("initial_profile")) c.initial_profile = j["initial_profile"].get<std::string>();
  if (j.contains("case")) {
    const std::string s = j["case"].get<std::string>();
    if (s == "ii" || s == "II") c.case_override = Case::II;
    else if (s != "auto") throw std::invalid_argument("config case must be \"auto\" or \"ii\"");
  }
  return c;
}

std::string RunConfig::to_json() const {
  json j = params_to_json(params);
  j["N"] = N;
  j["newton_tol"] = newton_tol;
  j["max_newton_iters"] = max_newton_iters;
  j["damping"] = damping;
  j["min_gap_rel"] = min_gap_rel;
  j["schedule_halvings"] = schedule_halvings;
  j["steps_per_halving"] = steps_per_halving;
  if (!ramp_rel.empty()) j["ramp_rel"] = ramp_rel;
  if (!explicit_schedule.empty()) j["explicit_schedule"] = explicit_schedule;
  j["out_dir"] = out_dir;
  j["profile_format"] = profile_format;
  j["samples_stride"] = samples_stride;
  j["write_samples"] = write_samples;
  j["seed"] = seed;
  j["tmin_rel"] = tmin_rel;
  j["windows"] = windows_to_json(windows);
  if (initial_profile) j["initial_profile"] = *initial_profile;
  if (case_override) j["case"] = "ii";
  return j.dump(2);
}

void RunConfig::apply_case_override() {
  if (!case_override || *case_override != Case::II) return;
  const int n = params.n, k = params.k;
  if (k >= n) throw invalid_params("case II override needs k < n");
  if (params.a0_exact) {
    params.b0_exact = *params.a0_exact * Rational(n + k) / Rational(n - k);
    params.b0 = params.b0_exact->value();
  } else {
    params.b0 = params.a0 * (n + k) / (n - k);
  }
}

std::vector<double> planned_schedule(const RunConfig& config) {
  const CaseReport rep = classify(config.params);
  std::vector<double> s = config.explicit_schedule;
  if (s.empty())
    s = geometric_schedule(rep.T, config.schedule_halvings, config.steps_per_halving,
                           config.ramp_rel);
  // mirror the solver's min-gap clamp so dry runs print what will execute
  const double cutoff = rep.T * (1.0 - config.min_gap_rel * (1.0 - 1e-12));
  std::erase_if(s, [cutoff](double t) { return t > cutoff; });
  return s;
}

std::string series_csv(const RunSeries& series) {
  std::ostringstream out;
  std::vector<std::string> ratio_names;
  if (!series.entries.empty())
    for (const auto& [name, v] : series.entries.front().bound_ratios) ratio_names.push_back(name);

  out << "t,gap,sup_rm,sup_r,sup_r_v,inf_r,r_mid,fiber_diam,base_scale,sup_h,sup_abs_u,min_u1,"
         "max_u1,norm_cauchy,window_ok";
  for (const auto& name : ratio_names) out << ",ratio_" << name;
  out << "\n";
  for (const auto& e : series.entries) {
    out << fmt(e.t) << ',' << fmt(e.gap) << ',' << fmt(e.sup_rm) << ',' << fmt(e.sup_R) << ','
        << fmt(e.sup_R_v) << ',' << fmt(e.inf_R) << ',' << fmt(e.R_mid) << ','
        << fmt(e.fiber_diam) << ',' << fmt(e.base_scale) << ',' << fmt(e.sup_H) << ','
        << fmt(e.sup_abs_u) << ',' << fmt(e.min_u1) << ',' << fmt(e.max_u1) << ','
        << fmt(e.norm_cauchy) << ',' << (e.window_ok ? 1 : 0);
    for (const auto& name : ratio_names) {
      const auto it = e.bound_ratios.find(name);
      out << ',' << fmt(it == e.bound_ratios.end() ? std::nan("") : it->second);
    }
    out << "\n";
  }
  return out.str();
}

namespace {

std::string samples_csv(const std::vector<ContinuationStep>& steps, const RadialProfile& u0, int n,
                        int stride) {
  std::ostringstream out;
  out << "t,sigma,rho,rm_norm,r,v_p,v_pp,tr_chi,tr_g0_g\n";
  for (const auto& step : steps) {
    const auto samples = curvature_profile(step.profile, u0, n);
    const int N = static_cast<int>(samples.size());
    auto row = [&](int j) {
      const auto& s = samples[j];
      out << fmt(step.t) << ',' << fmt(s.sigma) << ',' << fmt(s.rho) << ',' << fmt(s.rm_norm)
          << ',' << fmt(s.R) << ',' << fmt(s.ric_vp) << ',' << fmt(s.ric_vpp) << ','
          << fmt(s.tr_chi) << ',' << fmt(s.tr_g0_g) << "\n";
    };
    int j = 0;
    for (; j < N; j += stride) row(j);
    if (j - stride != N - 1) row(N - 1);  // keep the sigma = 1 node under any stride
  }
  return out.str();
}

json verdict_to_json(const Verdict& v, const BoundReport& bounds,
                     const std::vector<double>& normalized_cauchy) {
  json jv;
  jv["case"] = to_string(v.case_label);
  jv["pass"] = v.pass;
  jv["inconclusive"] = v.inconclusive;
  jv["reasons"] = v.reasons;
  json checks = json::array();
  for (const auto& c : v.checks)
    checks.push_back(json{{"name", c.name},
                          {"value", c.value},
                          {"lo", c.lo},
                          {"hi", c.hi},
                          {"pass", c.pass}});
  jv["checks"] = checks;
  json fits;
  for (const auto& [name, f] : v.fits)
    fits[name] = json{{"exponent", f.exponent},
                      {"log_constant", f.log_constant},
                      {"r_squared", f.r_squared},
                      {"gap_window", json::array({f.gap_min, f.gap_max})},
                      {"n_samples", f.n_samples}};
  jv["fits"] = fits;
  json jb;
  jb["windows_ok"] = bounds.windows_ok;
  jb["pass"] = bounds.pass;
  json bchecks = json::array();
  for (const auto& c : bounds.checks)
    bchecks.push_back(json{{"name", c.name},
                           {"worst", c.worst},
                           {"first_decade_max", c.first_decade_max},
                           {"last_decade_max", c.last_decade_max},
                           {"trend", c.trend},
                           {"pass", c.pass}});
  jb["checks"] = bchecks;
  jv["bounds"] = jb;
  if (!normalized_cauchy.empty()) jv["normalized_cauchy"] = normalized_cauchy;
  return jv;
}

}  // namespace

RunArtifacts run_pipeline(const RunConfig& config_in, std::ostream* log) {
  RunConfig config = config_in;
  config.apply_case_override();
  config.params.validate();

  const CaseReport rep = classify(config.params);
  const auto schedule = planned_schedule(config);

  if (config.out_dir.empty()) throw output_error("run: empty output directory");
  const std::filesystem::path dir(config.out_dir);
  std::error_code ec;
  std::filesystem::create_directories(dir / "profiles", ec);
  if (ec) throw output_error("cannot create " + (dir / "profiles").string() + ": " + ec.message());
  {  // probe writability early; create_directories succeeds on existing dirs
    std::ofstream probe(dir / ".write_probe");
    if (!probe) throw output_error("output directory not writable: " + dir.string());
  }
  std::filesystem::remove(dir / ".write_probe", ec);

  auto grid = Grid::make(config.N, config.params.k);
  RadialProfile u0 = [&]() -> RadialProfile {
    if (config.initial_profile) {
      StoredProfile sp = load_profile(*config.initial_profile);
      if (sp.profile.grid().N() != config.N || sp.profile.grid().k() != config.params.k)
        throw std::invalid_argument("initial profile grid does not match the run config");
      const double tol = 1e-9 * std::max(1.0, config.params.b0);
      if (std::abs(sp.profile.a() - config.params.a0) > tol ||
          std::abs(sp.profile.b() - config.params.b0) > tol)
        throw std::invalid_argument("initial profile coefficients do not match (a0, b0)");
      return RadialProfile(grid, config.params.a0, config.params.b0, sp.profile.psi());
    }
    return reference_profile(config.params.a0, config.params.b0, grid);
  }();

  SolverConfig sc;
  sc.newton_tol = config.newton_tol;
  sc.max_newton_iters = config.max_newton_iters;
  sc.damping = config.damping;
  sc.min_gap_rel = config.min_gap_rel;
  sc.schedule = schedule;

  if (log) *log << "case " << to_string(rep.case_label) << ", T = " << rep.T << ", "
                << schedule.size() << " scheduled times\n";

  RunArtifacts art;
  art.case_report = rep;
  art.dir = dir;
  art.continuation = continuation(u0, config.params, sc);
  art.stalled = art.continuation.stalled;

  // Summaries; Case II additionally tracks the Cauchy differences of the
  // rescaled potentials, reported descriptively in the verdict file.
  std::vector<double> normalized_cauchy;
  std::optional<RadialProfile> prev_normalized;
  for (const auto& step : art.continuation.steps) {
    SeriesEntry e = summarize_step(step.profile, u0, step.t, rep, config.params.n);
    if (rep.case_label == Case::II) {
      RadialProfile scaled = normalize_profile(step.profile, step.t, rep.T);
      if (prev_normalized) {
        double d = 0;
        for (int j = 1; j < scaled.grid().N() - 1; ++j)
          d = std::max(d, std::abs(scaled.u(j) - prev_normalized->u(j)));
        e.norm_cauchy = d;
        normalized_cauchy.push_back(d);
      }
      prev_normalized = std::move(scaled);
    }
    art.series.entries.push_back(std::move(e));
  }

  art.bounds = verify_bounds(art.series, rep);
  art.verdict = case_verdict(config.params, rep, art.series, art.bounds, config.windows);
  if (art.stalled) {
    art.verdict.inconclusive = true;
    art.verdict.pass = false;
    art.verdict.reasons.push_back("continuation stalled at t = " + fmt(art.continuation.stalled_at));
  }

  // ---- artifacts on disk ----
  const bool binary = config.profile_format != "json";
  json steps = json::array();
  for (std::size_t i = 0; i < art.continuation.steps.size(); ++i) {
    const auto& step = art.continuation.steps[i];
    char name[64];
    std::snprintf(name, sizeof name, "profiles/step_%04zu.%s", i, binary ? "bin" : "json");
    if (binary) save_profile_calu(dir / name, step.profile, config.params.n);
    else save_profile_json(dir / name, step.profile, config.params.n);
    steps.push_back(json{{"t", step.t},
                         {"gap", rep.T - step.t},
                         {"newton_iters", step.newton_iters},
                         {"residual", step.residual_norm},
                         {"c", step.c},
                         {"profile", name}});
  }

  json index;
  index["format"] = "continuity-run-index";
  index["version"] = 1;
  index["params"] = params_to_json(config.params);
  index["case"] = json{{"label", to_string(rep.case_label)},
                       {"T", rep.T},
                       {"aT", rep.aT},
                       {"bT", rep.bT}};
  if (rep.T_exact) index["case"]["T_exact"] = rep.T_exact->str();
  index["grid"] = json{{"N", config.N}};
  index["solver"] = json{{"newton_tol", config.newton_tol},
                         {"max_newton_iters", config.max_newton_iters},
                         {"damping", config.damping},
                         {"min_gap_rel", config.min_gap_rel}};
  index["schedule"] = schedule;
  index["steps"] = steps;
  index["stalled"] = art.stalled;
  if (art.stalled) index["stalled_at"] = art.continuation.stalled_at;
  index["total_solves"] = art.continuation.total_solves;
  write_text_file(dir / "index.json", index.dump(2) + "\n");

  write_text_file(dir / "series.csv", series_csv(art.series));
  if (config.write_samples) {
    const int stride = config.samples_stride > 0
                           ? config.samples_stride
                           : std::max(1, (config.N - 1) / 2048);
    write_text_file(dir / "samples.csv",
                    samples_csv(art.continuation.steps, u0, config.params.n, stride));
  }
  write_text_file(dir / "verdict.json",
                  verdict_to_json(art.verdict, art.bounds, normalized_cauchy).dump(2) + "\n");

  {  // timestamps only here; the data files above are byte-reproducible
    const auto now = std::chrono::system_clock::now();
    const auto t_c = std::chrono::system_clock::to_time_t(now);
    char buf[64];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t_c));
    json meta{{"created_utc", buf}, {"tool", "calabi-cm"}, {"config", json::parse(config.to_json())}};
    write_text_file(dir / "meta.json", meta.dump(2) + "\n");
  }

  if (log) {
    *log << "emitted " << art.continuation.steps.size() << " profiles, verdict "
         << (art.verdict.pass ? "pass" : (art.verdict.inconclusive ? "inconclusive" : "fail"))
         << (art.stalled ? " (stalled)" : "") << "\n";
  }
  return art;
}

namespace {

json load_index(const std::filesystem::path& run_dir) {
  const auto path = run_dir / "index.json";
  std::ifstream in(path);
  if (!in) throw run_dir_error("missing index: " + path.string());
  json j;
  try {
    in >> j;
  } catch (const json::exception& e) {
    throw run_dir_error("corrupt index " + path.string() + ": " + e.what());
  }
  if (j.value("format", "") != "continuity-run-index")
    throw run_dir_error("not a run index: " + path.string());
  return j;
}

std::vector<std::vector<double>> read_csv_columns(const std::filesystem::path& path,
                                                  std::vector<std::string>& header) {
  std::ifstream in(path);
  if (!in) throw run_dir_error("missing " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw run_dir_error("empty csv " + path.string());
  header.clear();
  std::stringstream hs(line);
  std::string cell;
  while (std::getline(hs, cell, ',')) header.push_back(cell);
  std::vector<std::vector<double>> cols(header.size());
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::size_t c = 0;
    while (std::getline(ls, cell, ',') && c < cols.size()) cols[c++].push_back(std::strtod(cell.c_str(), nullptr));
  }
  return cols;
}

}  // namespace

ReportResult write_report_bundle(const std::filesystem::path& run_dir,
                                 const std::filesystem::path& out_dir) {
  const json index = load_index(run_dir);
  std::error_code ec;
  std::filesystem::create_directories(out_dir, ec);
  if (ec) throw output_error("cannot create " + out_dir.string());

  std::vector<std::string> header;
  const auto cols = read_csv_columns(run_dir / "series.csv", header);
  auto col = [&](const std::string& name) -> const std::vector<double>& {
    for (std::size_t i = 0; i < header.size(); ++i)
      if (header[i] == name) return cols[i];
    throw run_dir_error("series.csv lacks column " + name);
  };

  const auto& gap = col("gap");
  const auto& sup_rm = col("sup_rm");
  const auto& fiber = col("fiber_diam");

  std::ostringstream rm_csv, fiber_csv;
  rm_csv << "log_gap,log_sup_rm\n";
  fiber_csv << "log_gap,log_fiber_diam\n";
  for (std::size_t i = 0; i < gap.size(); ++i) {
    if (gap[i] > 0 && sup_rm[i] > 0) rm_csv << fmt(std::log(gap[i])) << ',' << fmt(std::log(sup_rm[i])) << "\n";
    if (gap[i] > 0 && fiber[i] > 0) fiber_csv << fmt(std::log(gap[i])) << ',' << fmt(std::log(fiber[i])) << "\n";
  }
  write_text_file(out_dir / "loglog_rm.csv", rm_csv.str());
  write_text_file(out_dir / "loglog_fiber.csv", fiber_csv.str());

  // Profile snapshots: u', u'', R against sigma for every emitted time.
  const int n = index.at("params").at("n").get<int>();
  const auto steps = index.at("steps");
  if (steps.empty()) throw run_dir_error("run has no steps");
  StoredProfile u0 = load_profile(run_dir / steps.at(0).at("profile").get<std::string>());
  std::ostringstream snap;
  snap << "t,sigma,u1,u2,r\n";
  for (const auto& s : steps) {
    StoredProfile sp = load_profile(run_dir / s.at("profile").get<std::string>());
    const double t = s.at("t").get<double>();
    const auto samples = curvature_profile(sp.profile, u0.profile, n);
    const int N = sp.profile.grid().N();
    const int stride = std::max(1, (N - 1) / 512);
    for (int j = 0; j < N; j += stride) {
      snap << fmt(t) << ',' << fmt(sp.profile.grid().sigma(j)) << ',' << fmt(sp.profile.u1(j))
           << ',' << fmt(sp.profile.u2(j)) << ',' << fmt(samples[j].R) << "\n";
    }
  }
  write_text_file(out_dir / "snapshots.csv", snap.str());

  // Exponent table over the verdict window clamped to the available range.
  RunSeries series;
  for (std::size_t i = 0; i < gap.size(); ++i) {
    SeriesEntry e;
    e.t = col("t")[i];
    e.gap = gap[i];
    e.sup_rm = sup_rm[i];
    e.sup_R = col("sup_r")[i];
    e.fiber_diam = fiber[i];
    e.sup_H = col("sup_h")[i];
    e.sup_abs_u = col("sup_abs_u")[i];
    series.entries.push_back(e);
  }
  const double T = index.at("case").at("T").get<double>();
  double gmin = T, gmax = 0;
  for (double gv : gap)
    if (gv > 0) {
      gmin = std::min(gmin, gv);
      gmax = std::max(gmax, gv);
    }
  const double lo = std::max(gmin * (1 - 1e-9), 1e-3 * T);
  const double hi = std::min(gmax * (1 + 1e-9), 0.1 * T);

  std::ostringstream table;
  table << "quantity        alpha      r^2        window\n";
  for (const char* q : {"sup_rm", "sup_R", "fiber_diam", "sup_H"}) {
    table << std::left;
    char line[160];
    try {
      const RateFit f = fit_rate(series, q, hi, lo);
      std::snprintf(line, sizeof line, "%-15s %-10.4g %-10.6g [%.3g, %.3g] (%d pts)\n", q,
                    f.exponent, f.r_squared, f.gap_min, f.gap_max, f.n_samples);
    } catch (const insufficient_samples&) {
      std::snprintf(line, sizeof line, "%-15s insufficient samples in [%.3g, %.3g]\n", q, lo, hi);
    }
    table << line;
  }

  ReportResult res;
  res.partial = index.value("stalled", false);
  res.exponents_table = table.str();
  return res;
}

CheckResult check_profile(const std::filesystem::path& path) {
  StoredProfile sp = load_profile(path);
  CheckResult r;
  r.calabi = validate_calabi(sp.profile);
  r.pass = r.calabi.pass();
  return r;
}

CheckResult check_run_step(const std::filesystem::path& run_dir, int step) {
  const json index = load_index(run_dir);
  const auto steps = index.at("steps");
  if (step < 0) step = static_cast<int>(steps.size()) - 1;  // default: latest profile
  if (steps.empty() || step >= static_cast<int>(steps.size()))
    throw run_dir_error("step index out of range");
  StoredProfile u0 = load_profile(run_dir / steps.at(0).at("profile").get<std::string>());
  StoredProfile u = load_profile(run_dir / steps.at(step).at("profile").get<std::string>());
  const double t = steps.at(step).at("t").get<double>();
  const double T = index.at("case").at("T").get<double>();
  const int n = index.at("params").at("n").get<int>();

  CheckResult r;
  r.calabi = validate_calabi(u.profile);
  r.pass = r.calabi.pass();
  const double t_min = 1e-3 * T;
  if (t > t_min) {
    r.cross = scalar_cross_checks(u.profile, u0.profile, t, n, t_min);
    r.pass = r.pass && r.cross->pass;
  }
  return r;
}

}  // namespace calabi
