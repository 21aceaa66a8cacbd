#include <doctest.h>

#include <cmath>

#include "calabi/analysis.hpp"
#include "calabi/errors.hpp"
#include "calabi/solver.hpp"

using namespace calabi;

namespace {

RunSeries synthetic_series(int count, double T, double (*q)(double gap), double SeriesEntry::*field) {
  RunSeries s;
  for (int j = 0; j <= count; ++j) {
    SeriesEntry e;
    e.gap = T * std::exp2(-j);
    e.t = T - e.gap;
    e.*field = q(e.gap);
    s.entries.push_back(e);
  }
  return s;
}

}  // namespace

TEST_CASE("fit_rate recovers exact power laws") {
  auto s = synthetic_series(14, 1.0, [](double g) { return 5.0 / g; }, &SeriesEntry::sup_rm);
  const auto f = fit_rate(s, "sup_rm", 1.0, std::exp2(-14));
  CHECK(f.exponent == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.log_constant == doctest::Approx(std::log(5.0)).epsilon(1e-12));
  CHECK(f.r_squared == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(f.n_samples == 15);

  auto s2 = synthetic_series(14, 1.0, [](double g) { return 3.0 / (g * g); }, &SeriesEntry::sup_R);
  const auto f2 = fit_rate(s2, "sup_R", 1.0, std::exp2(-14));
  CHECK(f2.exponent == doctest::Approx(2.0).epsilon(1e-12));

  // decay laws fit with negative exponent
  auto s3 = synthetic_series(14, 1.0, [](double g) { return std::sqrt(g); }, &SeriesEntry::fiber_diam);
  const auto f3 = fit_rate(s3, "fiber_diam", 1.0, std::exp2(-14));
  CHECK(f3.exponent == doctest::Approx(-0.5).epsilon(1e-12));
}

TEST_CASE("fit_rate is shift equivariant under quantity scaling") {
  auto s = synthetic_series(12, 1.0, [](double g) { return 2.0 / g; }, &SeriesEntry::sup_rm);
  auto scaled = s;
  for (auto& e : scaled.entries) e.sup_rm *= 7.5;
  const auto f = fit_rate(s, "sup_rm", 1.0, std::exp2(-12));
  const auto fs = fit_rate(scaled, "sup_rm", 1.0, std::exp2(-12));
  CHECK(fs.exponent == doctest::Approx(f.exponent).epsilon(1e-12));
  CHECK(fs.log_constant - f.log_constant == doctest::Approx(std::log(7.5)).epsilon(1e-12));
}

TEST_CASE("fit_rate needs eight samples and a known quantity") {
  auto s = synthetic_series(5, 1.0, [](double g) { return 1.0 / g; }, &SeriesEntry::sup_rm);
  CHECK_THROWS_AS(fit_rate(s, "sup_rm", 1.0, std::exp2(-5)), insufficient_samples);
  auto big = synthetic_series(12, 1.0, [](double g) { return 1.0 / g; }, &SeriesEntry::sup_rm);
  CHECK_THROWS_AS(fit_rate(big, "no_such_quantity", 1.0, 1e-4), std::invalid_argument);
  // window filtering: only 4 of 12 points inside
  CHECK_THROWS_AS(fit_rate(big, "sup_rm", std::exp2(-9), std::exp2(-12)), insufficient_samples);
}

TEST_CASE("verify_bounds passes constant ratios and rejects drifting ones") {
  CaseReport rep{Case::I, 1.0, 0.5, 0.5, {}, {}, {}};
  RunSeries s;
  for (int j = 0; j <= 12; ++j) {
    SeriesEntry e;
    e.gap = std::exp2(-j);
    e.t = 1.0 - e.gap;
    e.window_ok = true;
    e.bound_ratios["steady"] = 2.0 + 0.1 * std::sin(j);
    e.bound_ratios["drifting"] = std::pow(e.gap, -0.5);  // grows 64x over 12 halvings
    s.entries.push_back(e);
  }
  const auto rep_out = verify_bounds(s, rep);
  REQUIRE(rep_out.checks.size() == 2);
  for (const auto& c : rep_out.checks) {
    if (c.name == "steady") CHECK(c.pass);
    if (c.name == "drifting") {
      CHECK(!c.pass);
      CHECK(c.trend > 10.0);
    }
  }
  CHECK(!rep_out.pass);

  // window violations fail the report even with steady ratios
  RunSeries s2 = s;
  for (auto& e : s2.entries) e.bound_ratios.erase("drifting");
  s2.entries[3].window_ok = false;
  const auto rep2 = verify_bounds(s2, rep);
  CHECK(!rep2.windows_ok);
  CHECK(!rep2.pass);
}

TEST_CASE("case_verdict gates the fitted exponents per case") {
  const auto params = SurfaceParams::make(3, 1, 2.0, 3.0);
  CaseReport rep{Case::I, 0.5, 1.0, 1.0, {}, {}, {}};

  auto make_series = [&](double alpha_rm) {
    RunSeries s;
    for (int j = 0; j <= 24; ++j) {
      SeriesEntry e;
      e.gap = 0.5 * std::exp2(-j / 2.0);
      e.t = 0.5 - e.gap;
      e.sup_rm = std::pow(e.gap, -alpha_rm);
      e.sup_R = 2.0 / e.gap;
      e.sup_R_v = e.sup_R;
      e.inf_R = e.t > 0 ? -1.0 / e.t : -1.0;
      e.R_mid = 1.5 / e.gap;
      e.fiber_diam = std::sqrt(e.gap);
      e.sup_abs_u = 3.0 * e.gap;
      e.window_ok = true;
      e.bound_ratios["steady"] = 1.0;
      s.entries.push_back(e);
    }
    return s;
  };

  SUBCASE("clean type-I run passes") {
    const auto series = make_series(1.0);
    const auto bounds = verify_bounds(series, rep);
    const auto v = case_verdict(params, rep, series, bounds);
    CHECK(v.pass);
    CHECK(!v.inconclusive);
  }
  SUBCASE("too-fast blow-up fails the window") {
    const auto series = make_series(1.4);
    const auto bounds = verify_bounds(series, rep);
    const auto v = case_verdict(params, rep, series, bounds);
    CHECK(!v.pass);
  }
  SUBCASE("lost essentiality fails") {
    auto series = make_series(1.0);
    for (auto& e : series.entries) e.R_mid = 1.0 / std::sqrt(e.gap);  // R_mid*gap -> 0
    const auto bounds = verify_bounds(series, rep);
    const auto v = case_verdict(params, rep, series, bounds);
    CHECK(!v.pass);
  }
  SUBCASE("short series is inconclusive, not failed-silent") {
    auto series = make_series(1.0);
    series.entries.resize(5);
    const auto bounds = verify_bounds(series, rep);
    const auto v = case_verdict(params, rep, series, bounds);
    CHECK(v.inconclusive);
    CHECK(!v.pass);
    CHECK(!v.reasons.empty());
  }
  SUBCASE("diverging scalar-curvature routes flag an untrusted grid") {
    auto series = make_series(1.0);
    for (auto& e : series.entries)
      if (e.gap < 0.01) e.sup_R = 50.0 * e.sup_R_v;  // direct route blows up late
    const auto bounds = verify_bounds(series, rep);
    const auto v = case_verdict(params, rep, series, bounds);
    CHECK(v.inconclusive);
    CHECK(!v.pass);
    bool found = false;
    for (const auto& r : v.reasons)
      if (r.find("routes disagree") != std::string::npos) found = true;
    CHECK(found);
  }
  SUBCASE("case III gates only the upper bounds") {
    const auto p3 = SurfaceParams::make(2, 1, 1.0, 4.0);
    CaseReport rep3{Case::III, 1.0, 0.0, 1.0, {}, {}, {}};
    auto series = make_series(1.9);
    for (auto& e : series.entries) {
      e.gap *= 2;  // T = 1
      e.t = 1.0 - e.gap;
      e.sup_rm = std::pow(e.gap, -1.9);
      e.inf_R = e.t > 0 ? -1.0 / e.t : -1.0;
    }
    const auto bounds = verify_bounds(series, rep3);
    const auto v = case_verdict(p3, rep3, series, bounds);
    CHECK(v.pass);  // alpha 1.9 <= 2.1

    for (auto& e : series.entries) e.sup_rm = std::pow(e.gap, -2.5);
    const auto v2 = case_verdict(p3, rep3, series, verify_bounds(series, rep3));
    CHECK(!v2.pass);
  }
}

TEST_CASE("mismatched lemma suite fails on real profiles") {
  // Case I data checked against the case II windows: u'/(T-t) explodes.
  const auto g = Grid::make(129, 1);
  const auto params = SurfaceParams::make(3, 1, 2.0, 3.0);
  const auto rep = classify(params);
  const auto u0 = reference_profile(2.0, 3.0, g);
  SolverConfig cfg;
  cfg.schedule = geometric_schedule(rep.T, 8);
  const auto run = continuation(u0, params, cfg);
  REQUIRE(!run.stalled);

  CaseReport forged = rep;
  forged.case_label = Case::II;
  RunSeries honest, mismatched;
  for (const auto& st : run.steps) {
    honest.entries.push_back(summarize_step(st.profile, u0, st.t, rep, params.n));
    mismatched.entries.push_back(summarize_step(st.profile, u0, st.t, forged, params.n));
  }
  CHECK(verify_bounds(honest, rep).pass);
  const auto bad = verify_bounds(mismatched, forged);
  CHECK(!bad.pass);
  bool u1_upper_failed = false;
  for (const auto& c : bad.checks)
    if (c.name == "u1_upper" && !c.pass) u1_upper_failed = true;
  CHECK(u1_upper_failed);
}
