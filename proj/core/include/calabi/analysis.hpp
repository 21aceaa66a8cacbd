#pragma once

#include <map>
#include <string>
#include <string_view>
#include <vector>

#include "calabi/cohomology.hpp"
#include "calabi/curvature.hpp"
#include "calabi/profile.hpp"

namespace calabi {

/// Per-time summary of a continuation step.
struct SeriesEntry {
  double t = 0;
  double gap = 0;  // T - t
  double sup_rm = 0;
  double sup_R = 0;
  double sup_R_v = 0;  // sup of the v-route scalar curvature (resolution guard)
  double inf_R = 0;
  double R_mid = 0;  // scalar curvature at sigma = 1/2, the essentiality probe
  double fiber_diam = 0;
  double base_scale = 0;
  double sup_H = 0;
  double sup_abs_u = 0;  // over interior nodes; u is linear in rho at the ends
  double min_u1 = 0;
  double max_u1 = 0;
  double norm_cauchy = -1.0;  // sup |u/(T-t) - previous u/(T-t)|; < 0 when absent
  // Lemma-check ratios, oriented so that bounded-above means the bound holds.
  std::map<std::string, double> bound_ratios;
  // Strict per-node window checks (interior strict, endpoint equality).
  bool window_ok = true;
};

struct RunSeries {
  std::vector<SeriesEntry> entries;  // gaps strictly decreasing
};

/// Curvature, collapse, and lemma-ratio summary for one solved profile.
SeriesEntry summarize_step(const RadialProfile& u, const RadialProfile& u0, double t,
                           const CaseReport& rep, int n);

struct RateFit {
  double exponent;      // alpha in q ~ C gap^{-alpha}
  double log_constant;  // log C
  double r_squared;
  double gap_max;
  double gap_min;
  int n_samples;
};

/// Least squares of log q against log gap over entries with gap in
/// [gap_min, gap_max]. Throws insufficient_samples below 8 usable points.
RateFit fit_rate(const RunSeries& series, std::string_view quantity, double gap_max,
                 double gap_min);

double series_quantity(const SeriesEntry& e, std::string_view quantity);

struct BoundCheck {
  std::string name;
  double worst = 0;              // max over all nodes and times
  double first_decade_max = 0;   // gaps within 10x of the largest
  double last_decade_max = 0;    // gaps within 10x of the smallest
  double trend = 0;              // last/first; growth beyond 10x fails
  bool pass = false;
};

struct BoundReport {
  Case case_label;
  std::vector<BoundCheck> checks;
  bool windows_ok = true;  // per-node strict inequalities from the lemma
  bool pass = false;
};

/// Aggregates the per-entry lemma ratios across the run: each named ratio
/// must stay finite with no growth beyond 10x between the first and last
/// decade of gaps, and the strict u' windows must hold at every node/time.
BoundReport verify_bounds(const RunSeries& series, const CaseReport& rep);

/// Acceptance windows for the fitted exponents. The statements being checked
/// are asymptotic with unknown constants; the windows absorb discretization
/// and finite-window effects at the reference resolution.
struct VerdictWindows {
  double rm_lo = 0.85, rm_hi = 1.15;        // Cases I, II
  double R_lo = 0.85, R_hi = 1.15;          // Cases I, II
  double fiber_lo = 0.40, fiber_hi = 0.60;  // Case I collapse decay
  double case3_rm_max = 2.1;
  double case3_R_max = 1.15;
  double fit_gap_hi_rel = 0.1;    // fit window, relative to T
  double fit_gap_lo_rel = 1e-3;
  double essential_span = 0.2;    // min >= span * max over the last decade
  double min_r_squared = 0.8;
};

struct VerdictCheck {
  std::string name;
  double value = 0;
  double lo = 0;
  double hi = 0;
  bool pass = false;
};

struct Verdict {
  Case case_label;
  bool pass = false;
  bool inconclusive = false;
  std::vector<VerdictCheck> checks;
  std::vector<std::string> reasons;
  std::map<std::string, RateFit> fits;
};

/// Per-case pass/fail against the fitted blow-up and collapse exponents plus
/// the lemma-bound report. Case III lower-rate behavior is reported, not
/// gated: only the upper bounds are claimed there.
Verdict case_verdict(const SurfaceParams& params, const CaseReport& rep, const RunSeries& series,
                     const BoundReport& bounds, const VerdictWindows& windows = {});

}  // namespace calabi
