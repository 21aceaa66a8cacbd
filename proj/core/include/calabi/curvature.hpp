#pragma once

#include <vector>

#include "calabi/profile.hpp"

namespace calabi {

/// Pointwise geometric quantities of a Calabi-symmetric metric in the
/// diagonal frame g = e^{-rho} diag(u'', u', ..., u').
struct CurvatureSample {
  double sigma;
  double rho;
  double rm_norm;   // |Rm|
  double R;         // scalar curvature
  double ric_vp;    // v'  with v = n rho - (n-1) log u' - log u''
  double ric_vpp;   // v''
  double tr_chi;    // (n-1)/u'
  double tr_g0_g;   // u''/uhat0'' + (n-1) u'/uhat0'
  double tr_w_w0;   // u0''/u'' + (n-1) u0'/u'
};

/// Curvature along the grid. The curvature components in the diagonal frame
/// reduce to three scalars
///   A = -u''''/u''^2 + u'''^2/u''^3
///   B = 1/u' - u''/u'^2
///   C = -u'''/(u' u'') + u''/u'^2
/// and the norm aggregates the component families over ordered index pairs:
///   |Rm|^2 = A^2 + (n-1)(n+2) B^2 + 2(n-1) C^2.
/// A is evaluated through W = u''/(k sigma(1-sigma)), which removes the
/// endpoint 0/0 in u''''/u''^2. u0 supplies the comparison traces.
std::vector<CurvatureSample> curvature_profile(const RadialProfile& u, const RadialProfile& u0,
                                               int n);

struct CrossCheckReport {
  double max_rel_12 = 0;  // direct curvature formula vs trace identity
  double max_rel_13 = 0;  // direct vs numerically differentiated v
  double max_rel_23 = 0;
  int worst_node = 0;
  double tolerance = 1e-4;
  bool pass = false;
};

/// Three independent routes to the scalar curvature: the closed formula in
/// u'..u'''', the trace identity R = (tr_w w0 - n)/t, and the contraction
/// v''/u'' + (n-1) v'/u' with v differentiated numerically. Differences are
/// scaled by max(1, |R|) per node. Throws below t_min (the identity route
/// degenerates to 0/0 as t -> 0).
CrossCheckReport scalar_cross_checks(const RadialProfile& u, const RadialProfile& u0, double t,
                                     int n, double t_min, double tolerance = 1e-4);

/// Scalar curvature from v''/u'' + (n-1) v'/u' with v differentiated
/// numerically. Uses only first and second stencils of bounded logs, so its
/// roundoff floor stays flat in N, unlike the u''''-based closed formula;
/// the lower-bound probes (R >= -n/t) read this route.
std::vector<double> scalar_curvature_vroute(const RadialProfile& u, int n);

struct CollapseDiagnostics {
  double fiber_diameter;  // (1/2) int sqrt(u'') drho, the CP^1 fiber length scale
  double base_scale;      // sqrt(u') at sigma = 1/2
  double sup_H;           // max u''/u'
};

/// The fiber integral uses theta = 2 asin(sqrt(sigma)): the integrable
/// endpoint weight 1/sqrt(sigma(1-sigma)) is absorbed into the node spacing
/// and the integrand sqrt(W/k) extends continuously to [0, 1].
CollapseDiagnostics collapse_diagnostics(const RadialProfile& u);

}  // namespace calabi
