#include "calabi/grid.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace calabi {

std::vector<double> fornberg_weights(double z, const double* x, int npts, int m) {
  // B. Fornberg, Math. Comp. 51 (1988). c[i][j]: weight of node i for the
  // j-th derivative on the subgrid x[0..i].
  std::vector<std::vector<double>> c(npts, std::vector<double>(m + 1, 0.0));
  c[0][0] = 1.0;
  double c1 = 1.0;
  double c4 = x[0] - z;
  for (int i = 1; i < npts; ++i) {
    const int mn = std::min(i, m);
    double c2 = 1.0;
    const double c5 = c4;
    c4 = x[i] - z;
    for (int j = 0; j < i; ++j) {
      const double c3 = x[i] - x[j];
      c2 *= c3;
      if (j == i - 1) {
        for (int kk = mn; kk >= 1; --kk)
          c[i][kk] = c1 * (kk * c[i - 1][kk - 1] - c5 * c[i - 1][kk]) / c2;
        c[i][0] = -c1 * c5 * c[i - 1][0] / c2;
      }
      for (int kk = mn; kk >= 1; --kk)
        c[j][kk] = (c4 * c[j][kk] - kk * c[j][kk - 1]) / c3;
      c[j][0] = c4 * c[j][0] / c3;
    }
    c1 = c2;
  }
  std::vector<double> w(npts);
  for (int i = 0; i < npts; ++i) w[i] = c[i][m];
  return w;
}

namespace {

// Window sizes giving order >= 4 everywhere: centered 5/5/7/7 points for
// orders 1..4, widened to 5/6/7/8 one-sided points where the centered
// window would leave the grid.
struct WindowRule {
  int centered_half;
  int boundary_len;
};

constexpr WindowRule kRules[4] = {{2, 5}, {2, 6}, {3, 7}, {3, 8}};

}  // namespace

Grid::Grid(int N, int k) : N_(N), k_(k), h_(1.0 / (N - 1)) {
  std::vector<double> xs(N);
  for (int j = 0; j < N; ++j) xs[j] = j * h_;

  for (int m = 1; m <= 4; ++m) {
    const auto rule = kRules[m - 1];
    auto& rows = rows_[m - 1];
    rows.resize(N);
    for (int j = 0; j < N; ++j) {
      int lo, len;
      if (j - rule.centered_half >= 0 && j + rule.centered_half <= N - 1) {
        lo = j - rule.centered_half;
        len = 2 * rule.centered_half + 1;
      } else {
        len = rule.boundary_len;
        lo = (j < rule.centered_half) ? 0 : N - len;
      }
      const auto w = fornberg_weights(xs[j], xs.data() + lo, len, m);
      Row row{};
      row.lo = lo;
      row.len = len;
      for (int i = 0; i < len; ++i) row.w[i] = w[i];
      rows[j] = row;
    }
  }
}

std::shared_ptr<const Grid> Grid::make(int N, int k) {
  if (N < 65 || N % 2 == 0)
    throw std::invalid_argument("grid size must be odd and >= 65");
  if (k < 1) throw std::invalid_argument("twist k must be >= 1");
  return std::shared_ptr<const Grid>(new Grid(N, k));
}

double Grid::rho(int j) const {
  if (j <= 0) return -std::numeric_limits<double>::infinity();
  if (j >= N_ - 1) return std::numeric_limits<double>::infinity();
  return std::log(sigma(j) / omsigma(j)) / k_;
}

std::vector<double> Grid::diff(const std::vector<double>& f, int order) const {
  if (order < 1 || order > 4) throw std::invalid_argument("derivative order must be 1..4");
  if (static_cast<int>(f.size()) != N_) throw std::invalid_argument("field size mismatch");
  std::vector<double> out(N_);
  const auto& rows = rows_[order - 1];
  for (int j = 0; j < N_; ++j) {
    const Row& r = rows[j];
    double s = 0.0;
    for (int i = 0; i < r.len; ++i) s += r.w[i] * f[r.lo + i];
    out[j] = s;
  }
  return out;
}

}  // namespace calabi
