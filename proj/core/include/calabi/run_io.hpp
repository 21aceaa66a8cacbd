#pragma once

#include <filesystem>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "calabi/analysis.hpp"
#include "calabi/solver.hpp"

namespace calabi {

/// Full description of one run. Serializes to a flat JSON document; CLI
/// flags override file values. Identical configs produce byte-identical
/// data files (timestamps live in a separate meta file).
struct RunConfig {
  SurfaceParams params;
  int N = 2049;
  double newton_tol = 1e-10;
  int max_newton_iters = 50;
  double damping = 1.0;
  double min_gap_rel = 1e-6;
  int schedule_halvings = 24;
  int steps_per_halving = 1;
  std::vector<double> ramp_rel;          // optional warm-up times, relative to T
  std::vector<double> explicit_schedule; // overrides the geometric schedule when set
  std::string out_dir;
  std::string profile_format = "bin";    // "bin" (CALU) or "json"
  int samples_stride = 0;                // 0 = thin to ~2048 rows per time
  bool write_samples = true;
  std::uint64_t seed = 0;                // property tests only; runs are deterministic
  double tmin_rel = 1e-3;                // cross-check guard, relative to T
  VerdictWindows windows;
  std::optional<std::string> initial_profile;  // psi0 from file instead of psi0 = 0
  std::optional<Case> case_override;           // "ii" rebuilds b0 from a0 exactly

  static RunConfig from_json_file(const std::filesystem::path& path);
  std::string to_json() const;
  void apply_case_override();  // b0 = a0 (n+k)/(n-k), exact
};

struct RunArtifacts {
  CaseReport case_report;
  ContinuationResult continuation;
  RunSeries series;
  BoundReport bounds;
  Verdict verdict;
  std::filesystem::path dir;
  bool stalled = false;
};

/// Executes classify -> continuation -> summaries -> bounds -> verdict and
/// writes index.json, profiles/, series.csv, samples.csv, verdict.json and
/// meta.json under config.out_dir. Throws output_error when the directory
/// cannot be created or written. On a continuation stall the partial
/// artifacts are written and flagged.
RunArtifacts run_pipeline(const RunConfig& config, std::ostream* log = nullptr);

/// Schedule the pipeline would use (dry runs print this and write nothing).
std::vector<double> planned_schedule(const RunConfig& config);

struct ReportResult {
  bool partial = false;
  std::string exponents_table;  // printable fitted-exponent summary
};

/// Reads a finished (or partial) run directory and emits tidy plot data:
/// loglog_rm.csv, loglog_fiber.csv, snapshots.csv. Throws run_dir_error on a
/// missing or corrupt index.
ReportResult write_report_bundle(const std::filesystem::path& run_dir,
                                 const std::filesystem::path& out_dir);

struct CheckResult {
  CalabiReport calabi;
  std::optional<CrossCheckReport> cross;
  bool pass = false;
};

/// validate_calabi on a stored profile; when the run context (u0, t, n) is
/// available the scalar-curvature cross-checks run too. step < 0 picks the
/// last emitted profile.
CheckResult check_profile(const std::filesystem::path& path);
CheckResult check_run_step(const std::filesystem::path& run_dir, int step = -1);

/// series.csv column layout shared by writer and report reader.
std::string series_csv(const RunSeries& series);

}  // namespace calabi
