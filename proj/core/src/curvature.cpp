#include "calabi/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "calabi/errors.hpp"

namespace calabi {

namespace {

void require_admissible(const RadialProfile& u, const char* who) {
  int bad = -1;
  if (!u.admissible(&bad))
    throw non_admissible_profile(std::string(who) + ": u' or u'' nonpositive at node " +
                                 std::to_string(bad));
}

// A = -u''''/u''^2 + u'''^2/u''^3 in the endpoint-regular W variables.
double curvature_A(const Grid& g, const RadialProfile& u, int j) {
  const double m = g.m(j), mp = g.mp(j);
  const double W = u.W(j), Ws = u.Ws(j), Wss = u.Wss(j);
  return 2.0 * g.k() / W - mp * Ws / (W * W) - m * Wss / (W * W) + m * Ws * Ws / (W * W * W);
}

}  // namespace

std::vector<CurvatureSample> curvature_profile(const RadialProfile& u, const RadialProfile& u0,
                                               int n) {
  if (u.grid().N() != u0.grid().N() || u.grid().k() != u0.grid().k())
    throw std::invalid_argument("curvature_profile: profiles on different grids");
  require_admissible(u, "curvature_profile");
  const Grid& g = u.grid();
  const int N = g.N();
  const double a0 = u0.a(), b0 = u0.b();

  std::vector<CurvatureSample> out(N);
  for (int j = 0; j < N; ++j) {
    const double m = g.m(j), mp = g.mp(j);
    const double u1 = u.u1(j), W = u.W(j), Ws = u.Ws(j);
    const double u2 = m * W;
    const double u3_over_u2 = mp + m * Ws / W;

    const double A = curvature_A(g, u, j);
    const double B = 1.0 / u1 - u2 / (u1 * u1);
    const double C = -u3_over_u2 / u1 + u2 / (u1 * u1);

    CurvatureSample s;
    s.sigma = g.sigma(j);
    s.rho = g.rho(j);
    s.rm_norm = std::sqrt(A * A + (n - 1) * (n + 2) * B * B + 2.0 * (n - 1) * C * C);
    s.R = -2.0 * (n - 1) * u3_over_u2 / u1 + n * (n - 1) / u1 - (n - 1) * (n - 2) * u2 / (u1 * u1) +
          A;
    s.ric_vp = n - (n - 1) * u2 / u1 - u3_over_u2;
    // v'' = -(n-1)(u'''/u' - (u''/u')^2) - (u''''/u'' - (u'''/u'')^2); the
    // second bracket is -A u'' by the same identity that defines A.
    s.ric_vpp = -(n - 1) * (u.u3(j) / u1 - (u2 / u1) * (u2 / u1)) + u2 * A;
    s.tr_chi = (n - 1) / u1;
    s.tr_g0_g = W / (b0 - a0) + (n - 1) * u1 / (a0 + (b0 - a0) * g.sigma(j));
    s.tr_w_w0 = u0.W(j) / W + (n - 1) * u0.u1(j) / u1;
    out[j] = s;
  }
  return out;
}

std::vector<double> scalar_curvature_vroute(const RadialProfile& u, int n) {
  require_admissible(u, "scalar_curvature_vroute");
  const Grid& g = u.grid();
  const int N = g.N();
  const double k = g.k();
  std::vector<double> vb(N);
  for (int j = 0; j < N; ++j) vb[j] = -(n - 1) * std::log(u.u1(j)) - std::log(k * u.W(j));
  const auto vb_s = g.diff(vb, 1);
  const auto vb_ss = g.diff(vb, 2);
  std::vector<double> R(N);
  for (int j = 0; j < N; ++j) {
    // v''/u'' = (2k + m' vb_s + m vb_ss)/W after dividing out m.
    const double m = g.m(j), mp = g.mp(j);
    const double vp = (n - k) * g.omsigma(j) + (n + k) * g.sigma(j) + m * vb_s[j];
    R[j] = (2.0 * k + mp * vb_s[j] + m * vb_ss[j]) / u.W(j) + (n - 1) * vp / u.u1(j);
  }
  return R;
}

CrossCheckReport scalar_cross_checks(const RadialProfile& u, const RadialProfile& u0, double t,
                                     int n, double t_min, double tolerance) {
  if (!(t > t_min))
    throw std::invalid_argument("scalar_cross_checks: t <= t_min (trace route is 0/0 at t = 0)");
  require_admissible(u, "scalar_cross_checks");
  const Grid& g = u.grid();
  const int N = g.N();

  const auto samples = curvature_profile(u, u0, n);
  const auto vroute = scalar_curvature_vroute(u, n);

  CrossCheckReport rep;
  rep.tolerance = tolerance;
  double worst = 0.0;
  for (int j = 0; j < N; ++j) {
    const double R1 = samples[j].R;
    const double R2 = (samples[j].tr_w_w0 - n) / t;
    const double R3 = vroute[j];

    const double scale = std::max({1.0, std::abs(R1), std::abs(R2), std::abs(R3)});
    const double d12 = std::abs(R1 - R2) / scale;
    const double d13 = std::abs(R1 - R3) / scale;
    const double d23 = std::abs(R2 - R3) / scale;
    rep.max_rel_12 = std::max(rep.max_rel_12, d12);
    rep.max_rel_13 = std::max(rep.max_rel_13, d13);
    rep.max_rel_23 = std::max(rep.max_rel_23, d23);
    const double w = std::max({d12, d13, d23});
    if (w > worst) {
      worst = w;
      rep.worst_node = j;
    }
  }
  rep.pass = worst <= tolerance;
  return rep;
}

CollapseDiagnostics collapse_diagnostics(const RadialProfile& u) {
  require_admissible(u, "collapse_diagnostics");
  const Grid& g = u.grid();
  const int N = g.N();
  const double k = g.k();

  // int sqrt(u'') drho = int sqrt(W/k) dtheta with sigma = sin^2(theta/2).
  double integral = 0.0;
  double theta_prev = 0.0;
  double f_prev = std::sqrt(u.W(0) / k);
  for (int j = 1; j < N; ++j) {
    const double theta = 2.0 * std::asin(std::min(1.0, std::sqrt(g.sigma(j))));
    const double f = std::sqrt(u.W(j) / k);
    integral += 0.5 * (theta - theta_prev) * (f + f_prev);
    theta_prev = theta;
    f_prev = f;
  }

  CollapseDiagnostics d;
  d.fiber_diameter = 0.5 * integral;
  d.base_scale = std::sqrt(u.u1(g.mid()));
  d.sup_H = 0.0;
  for (int j = 0; j < N; ++j) d.sup_H = std::max(d.sup_H, u.u2(j) / u.u1(j));
  return d;
}

}  // namespace calabi
