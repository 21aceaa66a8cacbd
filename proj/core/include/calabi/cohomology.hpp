#pragma once

#include <optional>
#include <string>

#include "calabi/rational.hpp"

namespace calabi {

/// The manifold P(O + O(-k)) over CP^{n-1} with initial Kahler class
/// parametrized by (a0, b0) in the cone 0 < a < b. The classes [D_0],
/// [D_inf], [D_H] form the fixed basis; a multiplies [D_H] and (b-a)/k
/// multiplies [D_inf].
struct SurfaceParams {
  int n = 2;  // complex dimension
  int k = 1;  // bundle twist
  double a0 = 1.0;
  double b0 = 2.0;
  // Exact values when the inputs were fractions or finite decimals.
  std::optional<Rational> a0_exact;
  std::optional<Rational> b0_exact;

  static SurfaceParams make(int n, int k, double a0, double b0);
  static SurfaceParams make_exact(int n, int k, const Rational& a0, const Rational& b0);

  void validate() const;  // throws invalid_params
};

/// Class coefficients at time t: a = a0 + (k-n) t, b = b0 - (k+n) t.
struct ClassState {
  double t;
  double a;
  double b;
};

enum class Case { I, II, III };
const char* to_string(Case c);

/// Which cone wall the class hits at the singular time, the time itself,
/// and the limit coefficients there.
struct CaseReport {
  Case case_label;
  double T;
  double aT;
  double bT;
  std::optional<Rational> T_exact;
  std::optional<Rational> aT_exact;
  std::optional<Rational> bT_exact;
};

/// Case split: I when k >= n or a0 (n+k) > b0 (n-k) with T = (b0-a0)/(2k);
/// II on exact equality with T = a0/(n-k); III otherwise, same T. Equality
/// is exact when rational inputs are present, else tested at 1e-12 relative.
CaseReport classify(const SurfaceParams& params);

/// Throws out_of_range_time unless 0 <= t < T.
ClassState class_at(const SurfaceParams& params, double t);

}  // namespace calabi
