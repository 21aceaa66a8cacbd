#include "calabi/cohomology.hpp"

#include <cmath>
#include <sstream>

#include "calabi/errors.hpp"

namespace calabi {

SurfaceParams SurfaceParams::make(int n, int k, double a0, double b0) {
  SurfaceParams p;
  p.n = n;
  p.k = k;
  p.a0 = a0;
  p.b0 = b0;
  p.validate();
  return p;
}

SurfaceParams SurfaceParams::make_exact(int n, int k, const Rational& a0, const Rational& b0) {
  SurfaceParams p;
  p.n = n;
  p.k = k;
  p.a0 = a0.value();
  p.b0 = b0.value();
  p.a0_exact = a0;
  p.b0_exact = b0;
  p.validate();
  return p;
}

void SurfaceParams::validate() const {
  std::ostringstream msg;
  if (n < 2) {
    msg << "n = " << n << " (need n >= 2)";
    throw invalid_params(msg.str());
  }
  if (k < 1) {
    msg << "k = " << k << " (need k >= 1)";
    throw invalid_params(msg.str());
  }
  if (!(a0 > 0.0) || !(a0 < b0)) {
    msg << "class (a0, b0) = (" << a0 << ", " << b0 << ") outside the cone 0 < a < b";
    throw invalid_params(msg.str());
  }
  if (a0_exact && b0_exact) {
    if (!(Rational(0) < *a0_exact) || !(*a0_exact < *b0_exact))
      throw invalid_params("exact class coefficients outside the cone 0 < a < b");
  }
}

const char* to_string(Case c) {
  switch (c) {
    case Case::I: return "I";
    case Case::II: return "II";
    case Case::III: return "III";
  }
  return "?";
}

CaseReport classify(const SurfaceParams& params) {
  params.validate();
  const int n = params.n, k = params.k;

  CaseReport rep{};
  if (params.a0_exact && params.b0_exact) {
    const Rational a0 = *params.a0_exact, b0 = *params.b0_exact;
    Rational T(0);
    if (k >= n) {
      rep.case_label = Case::I;
      T = (b0 - a0) / Rational(2 * k);
    } else {
      const Rational lhs = a0 * Rational(n + k);
      const Rational rhs = b0 * Rational(n - k);
      if (lhs > rhs) {
        rep.case_label = Case::I;
        T = (b0 - a0) / Rational(2 * k);
      } else {
        rep.case_label = (lhs == rhs) ? Case::II : Case::III;
        T = a0 / Rational(n - k);
      }
    }
    const Rational aT = a0 + Rational(k - n) * T;
    const Rational bT = b0 - Rational(k + n) * T;
    rep.T = T.value();
    rep.aT = aT.value();
    rep.bT = bT.value();
    rep.T_exact = T;
    rep.aT_exact = aT;
    rep.bT_exact = bT;
    return rep;
  }

  const double a0 = params.a0, b0 = params.b0;
  double T;
  if (k >= n) {
    rep.case_label = Case::I;
    T = (b0 - a0) / (2.0 * k);
  } else {
    const double lhs = a0 * (n + k);
    const double rhs = b0 * (n - k);
    const double scale = std::max(std::abs(lhs), std::abs(rhs));
    if (std::abs(lhs - rhs) <= 1e-12 * scale) {
      rep.case_label = Case::II;
      T = a0 / (n - k);
    } else if (lhs > rhs) {
      rep.case_label = Case::I;
      T = (b0 - a0) / (2.0 * k);
    } else {
      rep.case_label = Case::III;
      T = a0 / (n - k);
    }
  }
  rep.T = T;
  rep.aT = a0 + (k - n) * T;
  rep.bT = b0 - (k + n) * T;
  return rep;
}

ClassState class_at(const SurfaceParams& params, double t) {
  const CaseReport rep = classify(params);
  if (!(t >= 0.0) || t >= rep.T) {
    std::ostringstream msg;
    msg << "t = " << t << " outside [0, T) with T = " << rep.T;
    throw out_of_range_time(msg.str());
  }
  ClassState s;
  s.t = t;
  s.a = params.a0 + (params.k - params.n) * t;
  s.b = params.b0 - (params.k + params.n) * t;
  return s;
}

}  // namespace calabi
