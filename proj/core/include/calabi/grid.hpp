#pragma once

#include <array>
#include <memory>
#include <vector>

namespace calabi {

/// Finite-difference weights for the m-th derivative at z over the nodes
/// x[0..npts). Fornberg's recursion; exact for polynomials of degree < npts.
std::vector<double> fornberg_weights(double z, const double* x, int npts, int m);

/// Uniform grid in the compactified coordinate sigma = e^{k rho}/(1+e^{k rho})
/// on [0, 1], endpoints included. N is odd so sigma = 1/2 (rho = 0) is a node.
/// Holds the sigma-derivative stencils: centered 4th order in the interior,
/// one-sided of order >= 4 at the ends.
class Grid {
 public:
  static std::shared_ptr<const Grid> make(int N, int k);

  int N() const { return N_; }
  int k() const { return k_; }
  double h() const { return h_; }
  int mid() const { return (N_ - 1) / 2; }

  double sigma(int j) const { return j * h_; }
  double omsigma(int j) const { return (N_ - 1 - j) * h_; }  // 1 - sigma, exact at both ends
  double rho(int j) const;                                   // -+inf at the endpoints
  // d/drho = m(sigma) d/dsigma with m = k sigma (1 - sigma)
  double m(int j) const { return k_ * sigma(j) * omsigma(j); }
  double mp(int j) const { return k_ * (1.0 - 2.0 * sigma(j)); }  // dm/dsigma

  struct Row {
    int lo;
    int len;
    std::array<double, 8> w;
  };
  const Row& row(int order, int j) const { return rows_[order - 1][j]; }

  /// m-th sigma-derivative of a nodal field, order 1..4.
  std::vector<double> diff(const std::vector<double>& f, int order) const;

 private:
  Grid(int N, int k);

  int N_;
  int k_;
  double h_;
  std::array<std::vector<Row>, 4> rows_;
};

}  // namespace calabi
