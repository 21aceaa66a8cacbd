#pragma once

#include <utility>
#include <vector>

#include "calabi/cohomology.hpp"
#include "calabi/profile.hpp"

namespace calabi {

struct SolverConfig {
  double newton_tol = 1e-10;     // max-norm residual target
  int max_newton_iters = 50;
  double damping = 1.0;          // initial line-search step in (0, 1]
  std::vector<double> schedule;  // strictly increasing times, all < T
  // Smallest allowed T - t, relative to T: schedule times beyond it are
  // dropped, and a retry increment falling below it stalls the run.
  double min_gap_rel = 1e-6;
};

/// t_i = T (1 - 2^{-i/s}) for i = 1 .. halvings*s, optionally preceded by
/// ramp_rel*T points. The solution varies on scale T - t, so uniform steps
/// stall near T while this spacing samples every decade of the gap.
std::vector<double> geometric_schedule(double T, int halvings, int steps_per_halving = 1,
                                       const std::vector<double>& ramp_rel = {});

struct Residual {
  std::vector<double> F;
  double c;         // normalization constant pinned by u(0) = 0
  double norm_inf;  // max_j |F_j|
};

/// Pointwise residual of the potential-form continuity equation
///   u = u0 + t (n-1) log u' + t log u'' - t n rho + c,
/// the primitive of omega = omega_0 - t Ric(omega) under the symmetry ansatz
/// (its rho-derivative is the u' identity below; the scalar-curvature trace
/// identity pins the signs). Assembled in sigma so the endpoint-divergent
/// pieces (t n rho, the log(sigma(1-sigma)) part of log u'', and the linear
/// growth of u - u0) cancel analytically:
///   F = (psi - psi0) - t (n-1) log u' - t log(k W) + 2 t log 2 - c.
/// Requires u to carry the class coefficients of time t over u0's class.
/// c is the value making F vanish at the middle node (u(0) = 0 gauge).
Residual residual(const RadialProfile& u, const RadialProfile& u0, double t, int n);

/// Directional derivative of the residual field in the psi direction dpsi
/// (c held fixed): dF = dpsi - t (n-1) u'^{-1} m dpsi_s - t W^{-1} (m' dpsi_s + m dpsi_ss).
std::vector<double> apply_residual_jacobian(const RadialProfile& u, const RadialProfile& u0,
                                            double t, int n, const std::vector<double>& dpsi);

struct NewtonDiagnostics {
  double step_norm;
  double residual_before;
  double residual_after;
  int backtracks;
  double lambda;
};

/// One damped Newton step: solves the banded system bordered by the scalar
/// unknown dc and the constraint dpsi(mid) = 0, then backtracks until the
/// update keeps u' > 0 and W > 0 and does not increase the residual.
std::pair<RadialProfile, NewtonDiagnostics> newton_step(const RadialProfile& u,
                                                        const RadialProfile& u0, double t, int n,
                                                        const SolverConfig& config);

struct NewtonRun {
  RadialProfile profile;
  bool converged;
  int iterations;
  double residual_norm;
  double c;
  std::vector<double> history;  // residual norm before each step, then final
  std::string failure;
};

NewtonRun newton_solve(RadialProfile u, const RadialProfile& u0, double t, int n,
                       const SolverConfig& config);

struct ContinuationStep {
  double t;
  RadialProfile profile;
  int newton_iters;
  double residual_norm;
  double c;
};

struct ContinuationResult {
  std::vector<ContinuationStep> steps;  // monotone in t, starting with (0, u0)
  bool stalled = false;
  double stalled_at = 0.0;  // last converged t when stalled
  int total_solves = 0;
};

/// Warm-started continuation along config.schedule with the boundary
/// coefficients from class_at. On a Newton failure the t-increment is halved
/// and retried; the run stalls (partial result, stalled flag) once the
/// increment underflows min_gap.
ContinuationResult continuation(const RadialProfile& u0, const SurfaceParams& params,
                                const SolverConfig& config);

/// u / (T - t): coefficients and psi scale together, so the result is again
/// a valid profile. Case II diagnostics use this rescaling.
RadialProfile normalize_profile(const RadialProfile& u, double t, double T);

/// Residual of the once-differentiated equation
///   u' = u0' + t (n-1) u''/u' + t u'''/u'' - t n
/// at the interior nodes. The solver never uses this identity, so it is an
/// independent consistency check on solved profiles.
std::vector<double> u1_identity_residual(const RadialProfile& u, const RadialProfile& u0, double t,
                                         int n);

/// Residual of the twice-differentiated equation (uses u''''; stencil error
/// is amplified, treat as a reduced-tolerance diagnostic).
std::vector<double> u2_identity_residual(const RadialProfile& u, const RadialProfile& u0, double t,
                                         int n);

struct RicciConsistency {
  double max_err_vp;   // |v' - (u0' - u')/t| / scale, max over interior
  double max_err_vpp;  // |v'' - (u0'' - u'')/t| / scale
};

/// v = n rho - (n-1) log u' - log u'' differentiated numerically against the
/// finite-difference form of the continuity equation Ric = (omega_0 - omega)/t.
RicciConsistency ricci_consistency(const RadialProfile& u, const RadialProfile& u0, double t,
                                   int n);

}  // namespace calabi
