#pragma once

#include <array>
#include <filesystem>
#include <memory>
#include <vector>

#include "calabi/grid.hpp"

namespace calabi {

/// Calabi-symmetric potential u(rho) = uhat(rho; a, b) + psi(sigma) on a
/// compactified grid. uhat = a rho + ((b-a)/k) log(e^{k rho}+1), shifted so
/// uhat(0) = 0; it carries the boundary slopes u'(-inf) = a, u'(+inf) = b,
/// while psi is the bounded remainder and extends smoothly to sigma in [0,1].
///
/// All rho-derivatives are assembled from W = u''/(k sigma (1-sigma)), which
/// stays finite at the endpoints:
///   u'   = a + (b-a) sigma + m psi_s                (m = k sigma (1-sigma))
///   u''  = m W,   W = (b-a) + m' psi_s + m psi_ss
///   u''' = m (m' W + m W_s)
///   u'''' = m W (m'^2 - 2km) + 3 m^2 m' W_s + m^3 W_ss
/// Admissibility (u' > 0, u'' > 0) is u' > 0 and W > 0 in this form.
///
/// Immutable after construction; reads are safe to share across threads.
class RadialProfile {
 public:
  RadialProfile(std::shared_ptr<const Grid> grid, double a, double b, std::vector<double> psi);

  const Grid& grid() const { return *grid_; }
  const std::shared_ptr<const Grid>& grid_ptr() const { return grid_; }
  double a() const { return a_; }
  double b() const { return b_; }
  const std::vector<double>& psi() const { return psi_; }
  const std::vector<double>& psi_deriv(int order) const { return psi_s_[order - 1]; }

  double uhat(int j) const;  // reference part; -+inf at the endpoints
  double u(int j) const { return uhat(j) + psi_[j]; }

  double u1(int j) const {
    const Grid& g = *grid_;
    return a_ + (b_ - a_) * g.sigma(j) + g.m(j) * psi_s_[0][j];
  }
  double W(int j) const {
    const Grid& g = *grid_;
    return (b_ - a_) + g.mp(j) * psi_s_[0][j] + g.m(j) * psi_s_[1][j];
  }
  double Ws(int j) const {
    const Grid& g = *grid_;
    return -2.0 * g.k() * psi_s_[0][j] + 2.0 * g.mp(j) * psi_s_[1][j] + g.m(j) * psi_s_[2][j];
  }
  double Wss(int j) const {
    const Grid& g = *grid_;
    return -6.0 * g.k() * psi_s_[1][j] + 3.0 * g.mp(j) * psi_s_[2][j] + g.m(j) * psi_s_[3][j];
  }
  double u2(int j) const { return grid_->m(j) * W(j); }
  double u3(int j) const {
    const Grid& g = *grid_;
    return g.m(j) * (g.mp(j) * W(j) + g.m(j) * Ws(j));
  }
  double u4(int j) const {
    const Grid& g = *grid_;
    const double m = g.m(j), mp = g.mp(j);
    return m * W(j) * (mp * mp - 2.0 * g.k() * m) + 3.0 * m * m * mp * Ws(j) + m * m * m * Wss(j);
  }

  /// u' > 0 and W > 0 at every node. On failure reports the first bad node.
  bool admissible(int* bad_node = nullptr) const;

 private:
  std::shared_ptr<const Grid> grid_;
  double a_;
  double b_;
  std::vector<double> psi_;
  std::array<std::vector<double>, 4> psi_s_;
};

/// The reference potential itself (psi = 0). Throws invalid_coefficients
/// unless 0 < a < b.
RadialProfile reference_profile(double a, double b, std::shared_ptr<const Grid> grid);

/// d^m u / drho^m on the grid, m = 1..4.
std::vector<double> derivatives(const RadialProfile& p, int order);

struct CalabiReport {
  double min_u1 = 0;          // over all nodes
  int min_u1_node = 0;
  double min_u2_interior = 0; // u'' vanishes at the endpoints by construction
  int min_u2_node = 0;
  double normalization_residual = 0;  // |u(0)| = |psi at sigma = 1/2|
  // Boundedness of psi and its first two sigma-derivatives stands in for the
  // smooth divisor-potential conditions at sigma in {0, 1}.
  double max_abs_psi = 0;
  double max_abs_psi_s1 = 0;
  double max_abs_psi_s2 = 0;
  double min_detg_factor = 0;  // min over interior of (u')^{n-1} u'' envelope factor u' * W
  bool admissible = false;
  bool normalized = false;
  bool divisor_smooth = false;
  bool pass() const { return admissible && normalized && divisor_smooth; }
};

CalabiReport validate_calabi(const RadialProfile& p);

struct StoredProfile {
  int n;
  RadialProfile profile;
};

/// JSON object {n, k, a, b, N, psi} with full-precision doubles.
void save_profile_json(const std::filesystem::path& path, const RadialProfile& p, int n);
/// "CALU" v1: 4-byte magic, then version, N, n, k as little-endian int64,
/// a, b as doubles, then N psi values. Bit-exact round trip.
void save_profile_calu(const std::filesystem::path& path, const RadialProfile& p, int n);
StoredProfile load_profile(const std::filesystem::path& path);

}  // namespace calabi
