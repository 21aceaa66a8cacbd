#include "calabi/solver.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "calabi/banded.hpp"
#include "calabi/errors.hpp"

namespace calabi {

namespace {

constexpr int kBand = 5;  // widest stencil reach (one-sided second derivative)

void check_pair(const RadialProfile& u, const RadialProfile& u0, double t, int n) {
  if (u.grid().N() != u0.grid().N() || u.grid().k() != u0.grid().k())
    throw std::invalid_argument("profiles live on different grids");
  if (n < 1) throw std::invalid_argument("dimension n must be >= 1");
  if (t < 0.0) throw std::invalid_argument("negative time");
  const int k = u.grid().k();
  const double a_t = u0.a() + (k - n) * t;
  const double b_t = u0.b() - (k + n) * t;
  const double tol = 1e-9;
  if (std::abs(u.a() - a_t) > tol * std::max(1.0, std::abs(a_t)) ||
      std::abs(u.b() - b_t) > tol * std::max(1.0, std::abs(b_t))) {
    std::ostringstream msg;
    msg << "profile coefficients (" << u.a() << ", " << u.b()
        << ") inconsistent with the class at t = " << t << " (expected " << a_t << ", " << b_t
        << ")";
    throw std::invalid_argument(msg.str());
  }
}

void require_admissible(const RadialProfile& u, const char* who) {
  int bad = -1;
  if (!u.admissible(&bad)) {
    std::ostringstream msg;
    msg << who << ": profile not admissible (u' or u'' nonpositive) at node " << bad;
    throw non_admissible_profile(msg.str());
  }
}

}  // namespace

std::vector<double> geometric_schedule(double T, int halvings, int steps_per_halving,
                                       const std::vector<double>& ramp_rel) {
  if (!(T > 0.0)) throw std::invalid_argument("geometric_schedule: T must be positive");
  if (halvings < 1 || steps_per_halving < 1)
    throw std::invalid_argument("geometric_schedule: counts must be >= 1");
  std::vector<double> out;
  for (double r : ramp_rel) {
    if (!(r > 0.0) || !(r < 1.0))
      throw std::invalid_argument("geometric_schedule: ramp entries must lie in (0, 1)");
    out.push_back(r * T);
  }
  for (int i = 1; i <= halvings * steps_per_halving; ++i)
    out.push_back(T * (1.0 - std::exp2(-static_cast<double>(i) / steps_per_halving)));
  std::sort(out.begin(), out.end());
  out.erase(std::unique(out.begin(), out.end(),
                        [T](double x, double y) { return std::abs(x - y) <= 1e-15 * T; }),
            out.end());
  return out;
}

Residual residual(const RadialProfile& u, const RadialProfile& u0, double t, int n) {
  check_pair(u, u0, t, n);
  require_admissible(u, "residual");

  const Grid& g = u.grid();
  const int N = g.N();
  const double k = g.k();
  const double log2 = std::log(2.0);

  Residual res;
  res.F.resize(N);
  // Non-constant part of F; c is then pinned by F(mid) = 0.
  for (int j = 0; j < N; ++j) {
    res.F[j] = (u.psi()[j] - u0.psi()[j]) - t * (n - 1) * std::log(u.u1(j)) -
               t * std::log(k * u.W(j)) + 2.0 * t * log2;
  }
  res.c = res.F[g.mid()];
  res.norm_inf = 0.0;
  for (int j = 0; j < N; ++j) {
    res.F[j] -= res.c;
    res.norm_inf = std::max(res.norm_inf, std::abs(res.F[j]));
  }
  return res;
}

std::vector<double> apply_residual_jacobian(const RadialProfile& u, const RadialProfile& u0,
                                            double t, int n, const std::vector<double>& dpsi) {
  check_pair(u, u0, t, n);
  require_admissible(u, "apply_residual_jacobian");
  const Grid& g = u.grid();
  const int N = g.N();
  const auto d1 = g.diff(dpsi, 1);
  const auto d2 = g.diff(dpsi, 2);
  std::vector<double> out(N);
  for (int j = 0; j < N; ++j) {
    out[j] = dpsi[j] - t * (n - 1) / u.u1(j) * g.m(j) * d1[j] -
             t / u.W(j) * (g.mp(j) * d1[j] + g.m(j) * d2[j]);
  }
  return out;
}

std::pair<RadialProfile, NewtonDiagnostics> newton_step(const RadialProfile& u,
                                                        const RadialProfile& u0, double t, int n,
                                                        const SolverConfig& config) {
  const Grid& g = u.grid();
  const int N = g.N();
  const int mid = g.mid();

  const Residual res = residual(u, u0, t, n);

  // Bordered system: A dpsi - dc = -F with dpsi(mid) = 0. Two banded solves
  // (x1 = A^{-1}(-F), x2 = A^{-1} 1) eliminate the border.
  BandedMatrix A(N, kBand, kBand);
  for (int j = 0; j < N; ++j) {
    A.add(j, j, 1.0);
    const double c1 = -t * (n - 1) * g.m(j) / u.u1(j) - t * g.mp(j) / u.W(j);
    const double c2 = -t * g.m(j) / u.W(j);
    const Grid::Row& r1 = g.row(1, j);
    for (int i = 0; i < r1.len; ++i) A.add(j, r1.lo + i, c1 * r1.w[i]);
    const Grid::Row& r2 = g.row(2, j);
    for (int i = 0; i < r2.len; ++i) A.add(j, r2.lo + i, c2 * r2.w[i]);
  }

  std::vector<double> B(2 * N);
  for (int j = 0; j < N; ++j) {
    B[j] = -res.F[j];
    B[N + j] = 1.0;
  }
  A.solve(B, 2);

  const double x2mid = B[N + mid];
  if (std::abs(x2mid) < 1e-300) throw linear_solve_failure("degenerate normalization column");
  const double dc = -B[mid] / x2mid;

  std::vector<double> dpsi(N);
  double dpsi_norm = 0.0;
  for (int j = 0; j < N; ++j) {
    dpsi[j] = B[j] + dc * B[N + j];
    dpsi_norm = std::max(dpsi_norm, std::abs(dpsi[j]));
  }

  // Admissibility-preserving backtracking; the log terms are undefined on
  // the other side of u' = 0 or u'' = 0.
  const double lambda_min = config.damping * std::exp2(-20.0);
  double lambda = config.damping;
  int backtracks = 0;
  while (true) {
    std::vector<double> trial_psi(N);
    for (int j = 0; j < N; ++j) trial_psi[j] = u.psi()[j] + lambda * dpsi[j];
    trial_psi[mid] = 0.0;  // keep the u(0) = 0 gauge exact
    RadialProfile trial(u.grid_ptr(), u.a(), u.b(), std::move(trial_psi));
    if (trial.admissible()) {
      const Residual rnew = residual(trial, u0, t, n);
      if (rnew.norm_inf <= res.norm_inf * (1.0 - 0.25 * lambda) ||
          rnew.norm_inf <= config.newton_tol) {
        NewtonDiagnostics diag;
        diag.step_norm = lambda * dpsi_norm;
        diag.residual_before = res.norm_inf;
        diag.residual_after = rnew.norm_inf;
        diag.backtracks = backtracks;
        diag.lambda = lambda;
        return {std::move(trial), diag};
      }
    }
    lambda *= 0.5;
    ++backtracks;
    if (lambda < lambda_min)
      throw line_search_failure("no admissible decreasing step above 2^-20 of the damping");
  }
}

NewtonRun newton_solve(RadialProfile u, const RadialProfile& u0, double t, int n,
                       const SolverConfig& config) {
  NewtonRun run{std::move(u), false, 0, 0.0, 0.0, {}, {}};
  try {
    Residual res = residual(run.profile, u0, t, n);
    run.residual_norm = res.norm_inf;
    run.c = res.c;
    run.history.push_back(res.norm_inf);
    while (run.residual_norm > config.newton_tol && run.iterations < config.max_newton_iters) {
      auto [next, diag] = newton_step(run.profile, u0, t, n, config);
      run.profile = std::move(next);
      run.residual_norm = diag.residual_after;
      ++run.iterations;
      run.history.push_back(run.residual_norm);
    }
    run.converged = run.residual_norm <= config.newton_tol;
    if (run.converged) run.c = residual(run.profile, u0, t, n).c;
    else run.failure = "newton iteration limit reached";
  } catch (const line_search_failure& e) {
    run.failure = e.what();
  } catch (const linear_solve_failure& e) {
    run.failure = e.what();
  } catch (const non_admissible_profile& e) {
    run.failure = e.what();
  }
  return run;
}

ContinuationResult continuation(const RadialProfile& u0, const SurfaceParams& params,
                                const SolverConfig& config) {
  params.validate();
  const CaseReport rep = classify(params);
  const double T = rep.T;
  const double min_gap = config.min_gap_rel * T;

  if (config.schedule.empty()) throw std::invalid_argument("continuation: empty schedule");
  // times inside the min-gap guard band are dropped: T - t never goes below
  // min_gap, matching the stall threshold for the bisection increments
  std::vector<double> schedule;
  double prev = 0.0;
  for (double t : config.schedule) {
    if (!(t > prev)) throw std::invalid_argument("continuation: schedule must be strictly increasing");
    prev = t;
    if (t <= T - min_gap * (1.0 - 1e-12)) schedule.push_back(t);
  }
  if (schedule.empty())
    throw std::invalid_argument("continuation: no schedule times outside the min-gap band");
  const double tol_ab = 1e-12 * std::max(1.0, params.b0);
  if (std::abs(u0.a() - params.a0) > tol_ab || std::abs(u0.b() - params.b0) > tol_ab)
    throw std::invalid_argument("continuation: initial profile does not carry (a0, b0)");
  require_admissible(u0, "continuation");

  ContinuationResult result;
  result.steps.push_back({0.0, u0, 0, 0.0, 0.0});

  std::vector<double> psi_cur = u0.psi();
  double t_cur = 0.0;
  const int solve_cap = 64 * static_cast<int>(schedule.size()) + 4096;

  for (double target : schedule) {
    while (t_cur < target) {
      double t_try = target;
      while (true) {
        if (++result.total_solves > solve_cap) {
          result.stalled = true;
          result.stalled_at = t_cur;
          return result;
        }
        bool ok = false;
        const ClassState cs = class_at(params, t_try);
        RadialProfile warm(u0.grid_ptr(), cs.a, cs.b, psi_cur);
        NewtonRun run = newton_solve(std::move(warm), u0, t_try, params.n, config);
        if (run.converged) {
          psi_cur = run.profile.psi();
          t_cur = t_try;
          if (t_try == target)
            result.steps.push_back(
                {t_try, std::move(run.profile), run.iterations, run.residual_norm, run.c});
          ok = true;
        }
        if (ok) break;
        const double inc = t_try - t_cur;
        if (0.5 * inc < min_gap) {
          result.stalled = true;
          result.stalled_at = t_cur;
          return result;
        }
        t_try = t_cur + 0.5 * inc;
      }
    }
  }
  return result;
}

RadialProfile normalize_profile(const RadialProfile& u, double t, double T) {
  if (!(t < T)) throw std::invalid_argument("normalize_profile needs t < T");
  const double s = 1.0 / (T - t);
  std::vector<double> psi = u.psi();
  for (double& v : psi) v *= s;
  return RadialProfile(u.grid_ptr(), u.a() * s, u.b() * s, std::move(psi));
}

std::vector<double> u1_identity_residual(const RadialProfile& u, const RadialProfile& u0, double t,
                                         int n) {
  check_pair(u, u0, t, n);
  require_admissible(u, "u1_identity_residual");
  const Grid& g = u.grid();
  const int N = g.N();
  std::vector<double> r(N - 2);
  for (int j = 1; j < N - 1; ++j) {
    const double u3_over_u2 = g.mp(j) + g.m(j) * u.Ws(j) / u.W(j);
    r[j - 1] = u.u1(j) - u0.u1(j) - t * (n - 1) * u.u2(j) / u.u1(j) - t * u3_over_u2 + t * n;
  }
  return r;
}

std::vector<double> u2_identity_residual(const RadialProfile& u, const RadialProfile& u0, double t,
                                         int n) {
  check_pair(u, u0, t, n);
  require_admissible(u, "u2_identity_residual");
  const Grid& g = u.grid();
  const int N = g.N();
  std::vector<double> r(N);
  for (int j = 0; j < N; ++j) {
    const double m = g.m(j), mp = g.mp(j);
    const double Wj = u.W(j);
    const double u3_over_u2 = mp + m * u.Ws(j) / Wj;
    const double u4_over_u2 =
        (mp * mp - 2.0 * g.k() * m) + 3.0 * m * mp * u.Ws(j) / Wj + m * m * u.Wss(j) / Wj;
    const double ratio2 = u.u2(j) / u.u1(j);
    r[j] = u.u2(j) - u0.u2(j) - t * (n - 1) * u.u3(j) / u.u1(j) + t * (n - 1) * ratio2 * ratio2 +
           t * u3_over_u2 * u3_over_u2 - t * u4_over_u2;
  }
  return r;
}

RicciConsistency ricci_consistency(const RadialProfile& u, const RadialProfile& u0, double t,
                                   int n) {
  check_pair(u, u0, t, n);
  require_admissible(u, "ricci_consistency");
  if (!(t > 0.0)) throw std::invalid_argument("ricci_consistency needs t > 0");
  const Grid& g = u.grid();
  const int N = g.N();
  const double k = g.k();

  // Bounded part of v; the n rho - log(sigma(1-sigma)) piece differentiates
  // analytically to (n-k)(1-sigma) + (n+k) sigma.
  std::vector<double> vb(N);
  for (int j = 0; j < N; ++j)
    vb[j] = -(n - 1) * std::log(u.u1(j)) - std::log(k * u.W(j));
  const auto vb_s = g.diff(vb, 1);
  const auto vb_ss = g.diff(vb, 2);

  RicciConsistency out{0.0, 0.0};
  for (int j = 0; j < N; ++j) {
    const double m = g.m(j), mp = g.mp(j);
    const double vp = (n - k) * g.omsigma(j) + (n + k) * g.sigma(j) + m * vb_s[j];
    const double vpp = 2.0 * k * m + m * mp * vb_s[j] + m * m * vb_ss[j];
    const double vp_target = (u0.u1(j) - u.u1(j)) / t;
    const double vpp_target = (u0.u2(j) - u.u2(j)) / t;
    const double s1 = std::max(1.0, std::abs(vp_target));
    const double s2 = std::max(1.0, std::abs(vpp_target));
    out.max_err_vp = std::max(out.max_err_vp, std::abs(vp - vp_target) / s1);
    out.max_err_vpp = std::max(out.max_err_vpp, std::abs(vpp - vpp_target) / s2);
  }
  return out;
}

}  // namespace calabi
