#include <doctest.h>

#include <cmath>
#include <random>

#include "calabi/analysis.hpp"
#include "calabi/errors.hpp"
#include "calabi/solver.hpp"
#include "oracles.hpp"

using namespace calabi;

namespace {

SolverConfig basic_config(double T, int halvings, int sph = 1) {
  SolverConfig c;
  c.schedule = geometric_schedule(T, halvings, sph);
  return c;
}

}  // namespace

TEST_CASE("geometric schedule approaches T by halving the gap") {
  const auto s = geometric_schedule(1.0, 3);
  REQUIRE(s.size() == 3);
  CHECK(s[0] == doctest::Approx(0.5));
  CHECK(s[1] == doctest::Approx(0.75));
  CHECK(s[2] == doctest::Approx(0.875));
  const auto dense = geometric_schedule(2.0, 4, 2, {0.05, 0.1});
  CHECK(dense.size() == 10);
  for (std::size_t i = 1; i < dense.size(); ++i) CHECK(dense[i] > dense[i - 1]);
  CHECK(dense.front() == doctest::Approx(0.1));
  CHECK_THROWS_AS(geometric_schedule(-1.0, 3), std::invalid_argument);
  CHECK_THROWS_AS(geometric_schedule(1.0, 0), std::invalid_argument);
  CHECK_THROWS_AS(geometric_schedule(1.0, 3, 1, {1.5}), std::invalid_argument);
}

TEST_CASE("residual vanishes identically at t = 0") {
  const auto g = Grid::make(129, 1);
  const auto u0 = reference_profile(2.0, 3.0, g);
  for (int n : {2, 3, 5}) {
    const auto res = residual(u0, u0, 0.0, n);
    CHECK(res.norm_inf == 0.0);
    CHECK(res.c == 0.0);
  }
}

TEST_CASE("residual normalization matches c = -t(n-1)log u'(0) - t log u''(0)") {
  const auto g = Grid::make(129, 1);
  const int n = 3;
  const auto p = SurfaceParams::make(n, 1, 2.0, 3.0);
  const auto u0 = reference_profile(2.0, 3.0, g);
  const double t = 0.1;
  const auto cs = class_at(p, t);
  const auto ut = reference_profile(cs.a, cs.b, g);  // reference of the evolved class, not a solution
  const auto res = residual(ut, u0, t, n);
  CHECK(res.F[g->mid()] == 0.0);
  const double c_closed = -t * (n - 1) * std::log(ut.u1(g->mid())) - t * std::log(ut.u2(g->mid()));
  CHECK(res.c == doctest::Approx(c_closed).epsilon(1e-12));
  CHECK(res.norm_inf > 1e-4);  // the reference is not the solution away from rho = 0
}

TEST_CASE("residual rejects inconsistent inputs") {
  const auto g = Grid::make(129, 1);
  const auto u0 = reference_profile(2.0, 3.0, g);
  // coefficients not matching the class at t
  const auto wrong = reference_profile(2.0, 2.9, g);
  CHECK_THROWS_AS(residual(wrong, u0, 0.1, 3), std::invalid_argument);
  // non-admissible profile
  std::vector<double> psi(g->N());
  for (int j = 0; j < g->N(); ++j) psi[j] = -10.0 * g->sigma(j);
  const RadialProfile bad(g, 2.0, 3.0, psi);
  CHECK_THROWS_AS(residual(bad, u0, 0.0, 3), non_admissible_profile);
}

TEST_CASE("picard fixed point solves the equation independently of newton") {
  const auto g = Grid::make(129, 1);
  const auto p = SurfaceParams::make(3, 1, 2.0, 3.0);
  const auto u0 = reference_profile(2.0, 3.0, g);
  const auto pic = oracles::picard_solve(u0, p, 0.05, 3e-9, 300000);
  REQUIRE(pic.delta <= 3e-9);
  const auto res = residual(pic.profile, u0, 0.05, p.n);
  CHECK(res.norm_inf < 1e-8);
}

TEST_CASE("newton agrees with the picard oracle") {
  const auto g = Grid::make(129, 1);
  const auto p = SurfaceParams::make(3, 1, 2.0, 3.0);
  const auto u0 = reference_profile(2.0, 3.0, g);
  const double t = 0.05;
  const auto pic = oracles::picard_solve(u0, p, t, 1e-9, 400000);
  const auto cs = class_at(p, t);
  SolverConfig cfg;
  auto run = newton_solve(reference_profile(cs.a, cs.b, g), u0, t, p.n, cfg);
  REQUIRE(run.converged);
  double d = 0;
  for (int j = 0; j < g->N(); ++j)
    d = std::max(d, std::abs(run.profile.psi()[j] - pic.profile.psi()[j]));
  CHECK(d < 1e-8);
}

TEST_CASE("jacobian matches a central finite difference of the residual") {
  const auto g = Grid::make(257, 1);
  const auto p = SurfaceParams::make(3, 1, 2.0, 3.0);
  const auto u0 = reference_profile(2.0, 3.0, g);
  const double t = 0.1;
  const auto cs = class_at(p, t);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> uc(-1.0, 1.0);
  // smooth admissible base point near the evolved reference
  std::vector<double> psi(g->N());
  for (int j = 0; j < g->N(); ++j) {
    const double s = g->sigma(j);
    psi[j] = 0.02 * std::sin(M_PI * s) - 0.01 * std::sin(2 * M_PI * s);
  }
  const RadialProfile base(g, cs.a, cs.b, psi);
  REQUIRE(base.admissible());

  std::vector<double> v(g->N(), 0.0);
  for (int mode = 1; mode <= 4; ++mode) {
    const double cm = uc(rng);
    for (int j = 0; j < g->N(); ++j)
      v[j] += cm * std::sin(mode * M_PI * g->sigma(j)) / (mode * mode);
  }

  const auto av = apply_residual_jacobian(base, u0, t, p.n, v);
  const double eps = 1e-6;
  std::vector<double> pp(psi), pm(psi);
  for (int j = 0; j < g->N(); ++j) {
    pp[j] += eps * v[j];
    pm[j] -= eps * v[j];
  }
  const auto rp = residual(RadialProfile(g, cs.a, cs.b, pp), u0, t, p.n);
  const auto rm = residual(RadialProfile(g, cs.a, cs.b, pm), u0, t, p.n);

  // residual() subtracts its own c; reduce the linearization the same way
  const double av_mid = av[g->mid()];
  double num = 0, den = 0;
  for (int j = 0; j < g->N(); ++j) {
    const double fd = (rp.F[j] - rm.F[j]) / (2 * eps);
    const double lin = av[j] - av_mid;
    num = std::max(num, std::abs(fd - lin));
    den = std::max(den, std::abs(lin));
  }
  CHECK(num / den <= 1e-6);

  // linearity: zero direction maps to zero
  const auto zero = apply_residual_jacobian(base, u0, t, p.n, std::vector<double>(g->N(), 0.0));
  for (double x : zero) CHECK(x == 0.0);
}

TEST_CASE("newton converges quadratically from the evolved reference") {
  const auto g = Grid::make(257, 1);
  const auto p = SurfaceParams::make(3, 1, 2.0, 3.0);
  const auto u0 = reference_profile(2.0, 3.0, g);
  const double t = 0.1;
  const auto cs = class_at(p, t);
  SolverConfig cfg;
  const auto run = newton_solve(reference_profile(cs.a, cs.b, g), u0, t, p.n, cfg);
  REQUIRE(run.converged);
  CHECK(run.iterations <= 8);
  for (std::size_t i = 0; i + 1 < run.history.size(); ++i) {
    const double r0 = run.history[i], r1 = run.history[i + 1];
    if (r1 < 1e-13) continue;  // roundoff floor
    CHECK(r1 <= 1e3 * r0 * r0);
    CHECK(r1 < r0);
  }
}

TEST_CASE("continuation on the case I reference parameters") {
  const auto g = Grid::make(257, 1);
  const auto p = SurfaceParams::make(3, 1, 2.0, 3.0);
  const auto u0 = reference_profile(2.0, 3.0, g);
  auto cfg = basic_config(0.5, 10);
  const auto result = continuation(u0, p, cfg);
  REQUIRE(!result.stalled);
  REQUIRE(result.steps.size() == 11);  // t = 0 plus the schedule
  CHECK(result.total_solves == 10);    // no bisection retries on the reference run
  double prev = -1;
  for (const auto& step : result.steps) {
    CHECK(step.t > prev);
    prev = step.t;
    CHECK(step.newton_iters <= 8);
    CHECK(step.profile.admissible());
  }

  SUBCASE("solution varies continuously from the initial data") {
    SolverConfig tiny;
    for (double t : {1e-3, 1e-4}) {
      tiny.schedule = {t};
      const auto r = continuation(u0, p, tiny);
      REQUIRE(!r.stalled);
      double d = 0;
      for (int j = 0; j < g->N(); ++j)
        d = std::max(d, std::abs(r.steps[1].profile.psi()[j] - u0.psi()[j]));
      if (t == 1e-3) CHECK(d < 5e-3);
      else CHECK(d < 5e-4);
    }
  }
}

TEST_CASE("solved profiles satisfy the differentiated identities") {
  const auto g = Grid::make(513, 1);
  const auto p = SurfaceParams::make(3, 1, 2.0, 3.0);
  const auto u0 = reference_profile(2.0, 3.0, g);
  auto cfg = basic_config(0.5, 8);
  const auto result = continuation(u0, p, cfg);
  REQUIRE(!result.stalled);
  for (std::size_t i = 1; i < result.steps.size(); ++i) {
    const auto& st = result.steps[i];
    const auto r1 = u1_identity_residual(st.profile, u0, st.t, p.n);
    double m1 = 0;
    for (double v : r1) m1 = std::max(m1, std::abs(v));
    CHECK(m1 <= 1e-4);

    const auto rc = ricci_consistency(st.profile, u0, st.t, p.n);
    CHECK(rc.max_err_vp <= 1e-4);
    CHECK(rc.max_err_vpp <= 1e-4);

    // second differentiated identity: reduced tolerance (uses u'''')
    const auto r2 = u2_identity_residual(st.profile, u0, st.t, p.n);
    double m2 = 0;
    for (double v : r2) m2 = std::max(m2, std::abs(v));
    CHECK(m2 <= 1e-2);
  }
}

TEST_CASE("k > n runs through the same machinery") {
  // a_t grows toward a_T = b_T when k > n; distinct sign path in the class
  const auto g = Grid::make(129, 3);
  const auto p = SurfaceParams::make(2, 3, 1.0, 5.0);
  const auto rep = classify(p);
  REQUIRE(rep.case_label == Case::I);
  const auto u0 = reference_profile(1.0, 5.0, g);
  SolverConfig cfg;
  cfg.schedule = geometric_schedule(rep.T, 6);
  const auto run = continuation(u0, p, cfg);
  REQUIRE(!run.stalled);
  RunSeries series;
  for (const auto& st : run.steps) {
    series.entries.push_back(summarize_step(st.profile, u0, st.t, rep, p.n));
    if (st.t > 0) {
      double worst = 0;
      for (double r : u1_identity_residual(st.profile, u0, st.t, p.n))
        worst = std::max(worst, std::abs(r));
      CHECK(worst <= 1e-4);
      CHECK(st.profile.a() > p.a0);  // the class coefficient grows here
    }
  }
  CHECK(verify_bounds(series, rep).pass);
}

TEST_CASE("continuation is robust to admissible non-reference initial data") {
  const auto g = Grid::make(129, 1);
  const auto p = SurfaceParams::make(3, 1, 2.0, 3.0);
  const auto rep = classify(p);
  std::mt19937_64 rng(314159);
  std::uniform_real_distribution<double> uc(-1.0, 1.0);
  for (int trial = 0; trial < 3; ++trial) {
    std::vector<double> psi0(g->N());
    for (int mode = 1; mode <= 3; ++mode) {
      const double cm = 0.05 * uc(rng) / (mode * mode);
      for (int j = 0; j < g->N(); ++j) {
        const double s = g->sigma(j);
        psi0[j] += cm * (std::sin(mode * M_PI * s) - std::sin(mode * M_PI * 0.5));
      }
    }
    const RadialProfile u0(g, 2.0, 3.0, psi0);
    REQUIRE(u0.admissible());
    SolverConfig cfg;
    cfg.schedule = geometric_schedule(rep.T, 8);
    const auto run = continuation(u0, p, cfg);
    REQUIRE(!run.stalled);
    RunSeries series;
    for (const auto& st : run.steps)
      series.entries.push_back(summarize_step(st.profile, u0, st.t, rep, p.n));
    CHECK(verify_bounds(series, rep).pass);
    // the singular behaviour does not depend on the admissible seed
    const auto& last = series.entries.back();
    CHECK(last.R_mid * last.gap > 0.1);
  }
}

TEST_CASE("case III short continuation stays admissible") {
  const auto g = Grid::make(257, 1);
  const auto p = SurfaceParams::make(2, 1, 1.0, 4.0);
  const auto u0 = reference_profile(1.0, 4.0, g);
  auto cfg = basic_config(1.0, 6);
  const auto result = continuation(u0, p, cfg);
  REQUIRE(!result.stalled);
  for (const auto& step : result.steps) {
    CHECK(step.profile.admissible());
    double min_u1 = 1e300, min_W = 1e300;
    for (int j = 0; j < g->N(); ++j) {
      min_u1 = std::min(min_u1, step.profile.u1(j));
      min_W = std::min(min_W, step.profile.W(j));
    }
    CHECK(min_u1 > 0.0);
    CHECK(min_W > 0.0);
  }
}

TEST_CASE("normalize_profile rescales class and potential together") {
  const auto g = Grid::make(129, 1);
  const auto p = SurfaceParams::make(2, 1, 1.0, 3.0);  // case II
  const auto rep = classify(p);
  REQUIRE(rep.case_label == Case::II);
  const auto u0 = reference_profile(1.0, 3.0, g);
  SolverConfig cfg;
  cfg.schedule = {0.5};
  const auto result = continuation(u0, p, cfg);
  REQUIRE(!result.stalled);
  const auto& u = result.steps[1].profile;
  const auto scaled = normalize_profile(u, 0.5, rep.T);
  CHECK(scaled.a() == doctest::Approx(p.n - p.k).epsilon(1e-14));
  CHECK(scaled.b() == doctest::Approx(p.n + p.k).epsilon(1e-14));

  // scaling back by (T - t) is the identity up to roundoff
  for (int j = 0; j < g->N(); ++j) {
    const double twice = scaled.psi()[j] * (rep.T - 0.5);
    CHECK(twice == doctest::Approx(u.psi()[j]).epsilon(1e-14));
  }

  // t = 0 divides by T
  const auto z = normalize_profile(u0, 0.0, rep.T);
  CHECK(z.a() == doctest::Approx(1.0 / rep.T).epsilon(1e-15));
  CHECK_THROWS_AS(normalize_profile(u, 1.5, rep.T), std::invalid_argument);
}

TEST_CASE("solution differences under refinement stay below C N^-3.5") {
  auto diff = [](const RadialProfile& coarse, const RadialProfile& fine) {
    double d = 0;
    for (int j = 1; j < coarse.grid().N() - 1; ++j)
      d = std::max(d, std::abs(coarse.u(j) - fine.u(2 * j)));
    return d;
  };

  SUBCASE("smooth case I at t = T/2 sits at the roundoff floor already") {
    const auto p = SurfaceParams::make(3, 1, 2.0, 3.0);
    auto solve_at = [&](int N) {
      SolverConfig cfg;
      cfg.schedule = {0.1, 0.25};
      const auto run = continuation(reference_profile(2.0, 3.0, Grid::make(N, 1)), p, cfg);
      REQUIRE(!run.stalled);
      return run.steps.back().profile;
    };
    CHECK(diff(solve_at(257), solve_at(513)) < 1e-10);
  }

  SUBCASE("case III with a visible layer refines within the N^-3.5 envelope") {
    const auto p = SurfaceParams::make(2, 1, 1.0, 4.0);
    auto solve_at = [&](int N) {
      SolverConfig cfg;
      cfg.schedule = {0.5, 0.75, 0.9};
      const auto run = continuation(reference_profile(1.0, 4.0, Grid::make(N, 1)), p, cfg);
      REQUIRE(!run.stalled);
      return run.steps.back().profile;
    };
    const auto u65 = solve_at(65), u129 = solve_at(129), u257 = solve_at(257),
               u513 = solve_at(513);
    const double d1 = diff(u65, u129), d2 = diff(u129, u257), d3 = diff(u257, u513);
    CHECK(d2 < d1);
    CHECK(d3 < d2);
    // measured constants sit near 3e3 for this configuration
    for (auto [N, d] : {std::pair<int, double>{65, d1}, {129, d2}, {257, d3}})
      CHECK(d <= 6000.0 * std::pow(N, -3.5));
  }
}

TEST_CASE("continuation rejects malformed schedules and reports stalls") {
  const auto g = Grid::make(65, 1);
  const auto p = SurfaceParams::make(3, 1, 2.0, 3.0);
  const auto u0 = reference_profile(2.0, 3.0, g);
  SolverConfig cfg;
  CHECK_THROWS_AS(continuation(u0, p, cfg), std::invalid_argument);  // empty
  cfg.schedule = {0.3, 0.2};
  CHECK_THROWS_AS(continuation(u0, p, cfg), std::invalid_argument);  // not increasing
  cfg.schedule = {0.5 - 1e-9};
  CHECK_THROWS_AS(continuation(u0, p, cfg), std::invalid_argument);  // all inside min-gap band

  // times inside the guard band are dropped, the rest still run
  cfg.schedule = {0.25, 0.5 - 1e-9};
  const auto clamped = continuation(u0, p, cfg);
  CHECK(!clamped.stalled);
  CHECK(clamped.steps.size() == 2);  // t = 0 and t = 0.25 only

  // an impossible solve budget must stall, keeping the partial prefix
  cfg.schedule = {0.4};
  cfg.max_newton_iters = 0;
  const auto result = continuation(u0, p, cfg);
  CHECK(result.stalled);
  CHECK(result.steps.size() == 1);  // only t = 0
  CHECK(result.stalled_at == 0.0);
}
