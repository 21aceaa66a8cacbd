#pragma once

#include <vector>

namespace calabi {

/// General banded matrix in LAPACK band storage (with the extra kl rows the
/// factorization needs). One-shot: solve() factors in place.
class BandedMatrix {
 public:
  BandedMatrix(int n, int kl, int ku);

  void add(int i, int j, double v);
  void set(int i, int j, double v);
  double get(int i, int j) const;

  int n() const { return n_; }
  int kl() const { return kl_; }
  int ku() const { return ku_; }

  /// Solves A X = B for nrhs right-hand sides stored column-major in B
  /// (leading dimension n). Throws linear_solve_failure on a singular factor.
  void solve(std::vector<double>& B, int nrhs);

 private:
  int idx(int i, int j) const;

  int n_;
  int kl_;
  int ku_;
  int ldab_;
  std::vector<double> ab_;
};

}  // namespace calabi
