#include "calabi/banded.hpp"

#include <stdexcept>
#include <string>

#include "calabi/errors.hpp"

extern "C" {
void dgbsv_(const int* n, const int* kl, const int* ku, const int* nrhs, double* ab,
            const int* ldab, int* ipiv, double* b, const int* ldb, int* info);
}

namespace calabi {

BandedMatrix::BandedMatrix(int n, int kl, int ku)
    : n_(n), kl_(kl), ku_(ku), ldab_(2 * kl + ku + 1), ab_(static_cast<std::size_t>(ldab_) * n, 0.0) {}

int BandedMatrix::idx(int i, int j) const {
  if (i < 0 || i >= n_ || j < 0 || j >= n_ || i - j > kl_ || j - i > ku_)
    throw std::out_of_range("band entry (" + std::to_string(i) + ", " + std::to_string(j) +
                            ") outside bandwidth");
  return j * ldab_ + (kl_ + ku_ + i - j);
}

void BandedMatrix::add(int i, int j, double v) { ab_[idx(i, j)] += v; }
void BandedMatrix::set(int i, int j, double v) { ab_[idx(i, j)] = v; }
double BandedMatrix::get(int i, int j) const { return ab_[idx(i, j)]; }

void BandedMatrix::solve(std::vector<double>& B, int nrhs) {
  if (static_cast<int>(B.size()) != n_ * nrhs)
    throw std::invalid_argument("rhs size mismatch");
  std::vector<int> ipiv(n_);
  int info = 0;
  dgbsv_(&n_, &kl_, &ku_, &nrhs, ab_.data(), &ldab_, ipiv.data(), B.data(), &n_, &info);
  if (info != 0)
    throw linear_solve_failure("dgbsv failed with info = " + std::to_string(info));
}

}  // namespace calabi
