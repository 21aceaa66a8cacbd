#include "calabi/analysis.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "calabi/errors.hpp"

namespace calabi {

SeriesEntry summarize_step(const RadialProfile& u, const RadialProfile& u0, double t,
                           const CaseReport& rep, int n) {
  const Grid& g = u.grid();
  const int N = g.N();
  const double gap = rep.T - t;
  const double k = g.k();

  SeriesEntry e;
  e.t = t;
  e.gap = gap;

  const auto samples = curvature_profile(u, u0, n);
  e.sup_rm = 0;
  e.sup_R = -std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    e.sup_rm = std::max(e.sup_rm, s.rm_norm);
    e.sup_R = std::max(e.sup_R, s.R);
  }
  // inf R probes the lower bound R >= -n/t, which the u''''-based route
  // cannot resolve at fine grids; read it from the flat-noise v route. The
  // v-route sup doubles as a resolution guard against the direct route.
  const auto vroute = scalar_curvature_vroute(u, n);
  double inf_R = std::numeric_limits<double>::infinity();
  double sup_R_v = -std::numeric_limits<double>::infinity();
  for (double r : vroute) {
    inf_R = std::min(inf_R, r);
    sup_R_v = std::max(sup_R_v, r);
  }
  e.inf_R = inf_R;
  e.sup_R_v = sup_R_v;
  e.R_mid = samples[g.mid()].R;

  const auto col = collapse_diagnostics(u);
  e.fiber_diam = col.fiber_diameter;
  e.base_scale = col.base_scale;
  e.sup_H = col.sup_H;

  e.sup_abs_u = 0;
  for (int j = 1; j < N - 1; ++j) e.sup_abs_u = std::max(e.sup_abs_u, std::abs(u.u(j)));

  e.min_u1 = std::numeric_limits<double>::infinity();
  e.max_u1 = 0;
  double max_u3_ratio = 0, max_env = 0, min_env = std::numeric_limits<double>::infinity();
  double min_kW = std::numeric_limits<double>::infinity();
  double max_H_gap = 0, max_u3_gap = 0;
  for (int j = 0; j < N; ++j) {
    const double u1 = u.u1(j);
    e.min_u1 = std::min(e.min_u1, u1);
    e.max_u1 = std::max(e.max_u1, u1);
    const double kW = k * u.W(j);
    const double u3_over_u2 = std::abs(g.mp(j) + g.m(j) * u.Ws(j) / u.W(j));
    max_u3_ratio = std::max(max_u3_ratio, u3_over_u2);
    max_env = std::max(max_env, kW / gap);
    min_env = std::min(min_env, kW / gap);
    min_kW = std::min(min_kW, kW);
    max_H_gap = std::max(max_H_gap, (u.u2(j) / u1) * gap);
    max_u3_gap = std::max(max_u3_gap, u3_over_u2 * gap);
  }

  // Convexity window a_t <= u' <= b_t, which carries the per-case lemma
  // windows (in case II the coefficients are exactly (n-k)(T-t), (n+k)(T-t)).
  const double a_t = u.a(), b_t = u.b();
  const double slack = 1e-9 * std::max(1.0, b_t);
  e.window_ok = e.min_u1 >= a_t - slack && e.max_u1 <= b_t + slack;

  auto& r = e.bound_ratios;
  switch (rep.case_label) {
    case Case::I:
      r["u1_lower"] = a_t / e.min_u1;
      r["u1_upper"] = e.max_u1 / b_t;
      r["u2_env_upper"] = max_env;
      r["u2_env_lower"] = 1.0 / min_env;
      r["u3_over_u2"] = max_u3_ratio;
      break;
    case Case::II:
      // a_t = (n-k)(T-t) and b_t = (n+k)(T-t) exactly in this case.
      r["u1_lower"] = ((n - k) * gap) / e.min_u1;
      r["u1_upper"] = e.max_u1 / ((n + k) * gap);
      r["u2_env_upper"] = max_env;
      r["u2_env_lower"] = 1.0 / min_env;
      r["u3_over_u2"] = max_u3_ratio;
      break;
    case Case::III:
      r["u1_lower"] = ((n - k) * gap) / e.min_u1;
      r["u1_upper"] = e.max_u1 / ((n + k) * gap + u0.b());
      r["u2_lower"] = 1.0 / min_kW;
      r["H_gap"] = max_H_gap;
      r["u3_over_u2_gap"] = max_u3_gap;
      break;
  }
  return e;
}

RateFit fit_rate(const RunSeries& series, std::string_view quantity, double gap_max,
                 double gap_min) {
  std::vector<double> xs, ys;
  for (const auto& e : series.entries) {
    if (e.gap < gap_min * (1.0 - 1e-12) || e.gap > gap_max * (1.0 + 1e-12)) continue;
    const double q = series_quantity(e, quantity);
    if (!(q > 0.0) || !std::isfinite(q)) continue;
    xs.push_back(std::log(e.gap));
    ys.push_back(std::log(q));
  }
  const int m = static_cast<int>(xs.size());
  if (m < 8) {
    std::ostringstream msg;
    msg << "fit_rate(" << quantity << "): " << m << " samples in window [" << gap_min << ", "
        << gap_max << "], need 8";
    throw insufficient_samples(msg.str());
  }
  double xbar = 0, ybar = 0;
  for (int i = 0; i < m; ++i) {
    xbar += xs[i];
    ybar += ys[i];
  }
  xbar /= m;
  ybar /= m;
  double sxx = 0, sxy = 0;
  for (int i = 0; i < m; ++i) {
    sxx += (xs[i] - xbar) * (xs[i] - xbar);
    sxy += (xs[i] - xbar) * (ys[i] - ybar);
  }
  const double slope = sxy / sxx;
  double ss_res = 0, ss_tot = 0;
  for (int i = 0; i < m; ++i) {
    const double fit = ybar + slope * (xs[i] - xbar);
    ss_res += (ys[i] - fit) * (ys[i] - fit);
    ss_tot += (ys[i] - ybar) * (ys[i] - ybar);
  }
  RateFit f;
  f.exponent = -slope;
  f.log_constant = ybar - slope * xbar;
  f.r_squared = ss_tot > 0 ? std::max(0.0, 1.0 - ss_res / ss_tot) : 1.0;
  f.gap_max = gap_max;
  f.gap_min = gap_min;
  f.n_samples = m;
  return f;
}

double series_quantity(const SeriesEntry& e, std::string_view quantity) {
  if (quantity == "sup_rm") return e.sup_rm;
  if (quantity == "sup_R") return e.sup_R;
  if (quantity == "R_mid") return e.R_mid;
  if (quantity == "fiber_diam") return e.fiber_diam;
  if (quantity == "base_scale") return e.base_scale;
  if (quantity == "sup_H") return e.sup_H;
  if (quantity == "sup_abs_u") return e.sup_abs_u;
  throw std::invalid_argument("unknown series quantity: " + std::string(quantity));
}

BoundReport verify_bounds(const RunSeries& series, const CaseReport& rep) {
  BoundReport report;
  report.case_label = rep.case_label;
  if (series.entries.empty()) {
    report.pass = false;
    return report;
  }
  double gmax = 0, gmin = std::numeric_limits<double>::infinity();
  for (const auto& e : series.entries) {
    gmax = std::max(gmax, e.gap);
    gmin = std::min(gmin, e.gap);
    report.windows_ok = report.windows_ok && e.window_ok;
  }

  std::vector<std::string> names;
  for (const auto& [name, v] : series.entries.front().bound_ratios) names.push_back(name);

  bool all_pass = true;
  for (const auto& name : names) {
    BoundCheck c;
    c.name = name;
    c.first_decade_max = 0;
    c.last_decade_max = 0;
    for (const auto& e : series.entries) {
      const auto it = e.bound_ratios.find(name);
      if (it == e.bound_ratios.end()) continue;
      const double v = it->second;
      c.worst = std::max(c.worst, v);
      if (e.gap >= gmax / 10.0) c.first_decade_max = std::max(c.first_decade_max, v);
      if (e.gap <= gmin * 10.0) c.last_decade_max = std::max(c.last_decade_max, v);
    }
    c.trend = c.first_decade_max > 0 ? c.last_decade_max / c.first_decade_max
                                     : std::numeric_limits<double>::infinity();
    c.pass = std::isfinite(c.worst) && c.trend <= 10.0 * (1.0 + 1e-9);
    all_pass = all_pass && c.pass;
    report.checks.push_back(std::move(c));
  }
  report.pass = all_pass && report.windows_ok;
  return report;
}

namespace {

void push_window_check(Verdict& v, const std::string& name, double value, double lo, double hi) {
  VerdictCheck c{name, value, lo, hi, value >= lo && value <= hi};
  v.pass = v.pass && c.pass;
  v.checks.push_back(std::move(c));
}

const RateFit* try_fit(Verdict& v, const RunSeries& series, const std::string& quantity,
                       double gap_hi, double gap_lo, const VerdictWindows& w) {
  try {
    RateFit f = fit_rate(series, quantity, gap_hi, gap_lo);
    auto [it, inserted] = v.fits.emplace(quantity, f);
    if (f.r_squared < w.min_r_squared) {
      v.inconclusive = true;
      v.reasons.push_back("fit of " + quantity + " has r^2 = " + std::to_string(f.r_squared));
    }
    return &it->second;
  } catch (const insufficient_samples& e) {
    v.inconclusive = true;
    v.reasons.push_back(e.what());
    return nullptr;
  }
}

}  // namespace

Verdict case_verdict(const SurfaceParams& params, const CaseReport& rep, const RunSeries& series,
                     const BoundReport& bounds, const VerdictWindows& w) {
  Verdict v;
  v.case_label = rep.case_label;
  v.pass = true;

  const double T = rep.T;
  const double gap_hi = w.fit_gap_hi_rel * T;
  const double gap_lo = w.fit_gap_lo_rel * T;

  double gmin = std::numeric_limits<double>::infinity();
  for (const auto& e : series.entries) gmin = std::min(gmin, e.gap);

  // Last-decade probes.
  double ess_min = std::numeric_limits<double>::infinity(), ess_max = 0;
  double u_mono_worst = 0;  // max ratio of consecutive sup|u| (decreasing gap)
  const SeriesEntry* prev = nullptr;
  double r_gap_first = 0, r_gap_last = 0, rm_gap2_first = 0, rm_gap2_last = 0;
  double gmax = 0;
  for (const auto& e : series.entries) gmax = std::max(gmax, e.gap);
  double ricci_lower_worst = 0;
  for (const auto& e : series.entries) {
    const double r_gap = e.sup_R * e.gap;
    const double rm_gap2 = e.sup_rm * e.gap * e.gap;
    if (e.gap >= gmax / 10.0) {
      r_gap_first = std::max(r_gap_first, r_gap);
      rm_gap2_first = std::max(rm_gap2_first, rm_gap2);
    }
    if (e.gap <= gmin * 10.0) {
      r_gap_last = std::max(r_gap_last, r_gap);
      rm_gap2_last = std::max(rm_gap2_last, rm_gap2);
      if (prev) u_mono_worst = std::max(u_mono_worst, e.sup_abs_u / prev->sup_abs_u);
      prev = &e;
    }
    // essentiality probes the last two decades; one decade cannot separate a
    // positive limit from slow decay
    if (e.gap <= gmin * 100.0 && e.t > 0) {
      const double ess = e.R_mid * e.gap;
      ess_min = std::min(ess_min, ess);
      ess_max = std::max(ess_max, ess);
    }
    if (e.t > 0) ricci_lower_worst = std::max(ricci_lower_worst, std::max(0.0, -e.inf_R) * e.t);
  }

  const auto essential_checks = [&] {
    push_window_check(v, "essential_R_gap_min", ess_min, 1e-300,
                      std::numeric_limits<double>::infinity());
    push_window_check(v, "essential_R_gap_span", ess_max > 0 ? ess_min / ess_max : 0,
                      w.essential_span, std::numeric_limits<double>::infinity());
  };

  switch (rep.case_label) {
    case Case::I: {
      if (const RateFit* f = try_fit(v, series, "sup_rm", gap_hi, gap_lo, w))
        push_window_check(v, "alpha_sup_rm", f->exponent, w.rm_lo, w.rm_hi);
      if (const RateFit* f = try_fit(v, series, "sup_R", gap_hi, gap_lo, w))
        push_window_check(v, "alpha_sup_R", f->exponent, w.R_lo, w.R_hi);
      if (const RateFit* f = try_fit(v, series, "fiber_diam", gap_hi, gap_lo, w))
        push_window_check(v, "fiber_decay_exponent", -f->exponent, w.fiber_lo, w.fiber_hi);
      essential_checks();
      break;
    }
    case Case::II: {
      if (const RateFit* f = try_fit(v, series, "sup_rm", gap_hi, gap_lo, w))
        push_window_check(v, "alpha_sup_rm", f->exponent, w.rm_lo, w.rm_hi);
      if (const RateFit* f = try_fit(v, series, "sup_R", gap_hi, gap_lo, w))
        push_window_check(v, "alpha_sup_R", f->exponent, w.R_lo, w.R_hi);
      essential_checks();
      push_window_check(v, "sup_u_monotone_decay", u_mono_worst, 0.0, 1.0 + 1e-12);
      break;
    }
    case Case::III: {
      if (const RateFit* f = try_fit(v, series, "sup_rm", gap_hi, gap_lo, w))
        push_window_check(v, "alpha_sup_rm", f->exponent,
                          -std::numeric_limits<double>::infinity(), w.case3_rm_max);
      if (const RateFit* f = try_fit(v, series, "sup_R", gap_hi, gap_lo, w))
        push_window_check(v, "alpha_sup_R", f->exponent,
                          -std::numeric_limits<double>::infinity(), w.case3_R_max);
      push_window_check(v, "rm_gap2_trend",
                        rm_gap2_first > 0 ? rm_gap2_last / rm_gap2_first
                                          : std::numeric_limits<double>::infinity(),
                        0.0, 10.0);
      break;
    }
  }

  // The two scalar-curvature routes must agree at the sup level inside the
  // fit window; a large factor means the grid no longer resolves the layer
  // and the fitted rates cannot be trusted.
  double route_factor = 1.0;
  for (const auto& e : series.entries) {
    if (e.gap < gap_lo || e.gap > gap_hi) continue;
    if (e.sup_R > 0 && e.sup_R_v > 0)
      route_factor = std::max(route_factor, std::max(e.sup_R / e.sup_R_v, e.sup_R_v / e.sup_R));
  }
  if (route_factor > 5.0) {
    v.inconclusive = true;
    v.reasons.push_back("scalar-curvature routes disagree by " + std::to_string(route_factor) +
                        " in the fit window; the grid under-resolves the profile");
  }

  // Scalar curvature stays below C/(T-t) in every case, and the Ricci lower
  // bound forces R >= -n/t.
  push_window_check(v, "R_gap_trend",
                    r_gap_first > 0 ? r_gap_last / r_gap_first
                                    : std::numeric_limits<double>::infinity(),
                    0.0, 10.0);
  push_window_check(v, "ricci_lower_Rt", ricci_lower_worst, 0.0,
                    params.n * (1.0 + 1e-6) + 1e-9);
  push_window_check(v, "lemma_bounds", bounds.pass ? 1.0 : 0.0, 1.0, 1.0);

  if (v.inconclusive) v.pass = false;
  return v;
}

}  // namespace calabi
