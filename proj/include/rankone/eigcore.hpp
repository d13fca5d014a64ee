#pragma once

#include <complex>
#include <span>
#include <vector>

#include "rankone/linalg.hpp"

namespace rankone {

// Dense real symmetric operator. Construction validates finiteness and
// symmetry to 1e-12 * (1 + max|a_ij|).
class SymmetricMatrix {
 public:
  explicit SymmetricMatrix(Matrix entries);
  static SymmetricMatrix from_rows(int n, std::span<const double> row_major);

  int order() const { return entries_.rows(); }
  const Matrix& entries() const { return entries_; }
  double operator()(int i, int j) const { return entries_(i, j); }

 private:
  Matrix entries_;
};

// Full eigendecomposition A = Q diag(eigenvalues) Q^T, eigenvalues ascending,
// columns of `vectors` orthonormal.
struct SpectralDecomposition {
  Vector eigenvalues;
  Matrix vectors;

  int order() const { return static_cast<int>(eigenvalues.size()); }
  double spectral_radius() const;
};

// A maximal set of eigenvalues separated from the rest by more than the
// clustering tolerance; numerically "one eigenvalue with multiplicity".
struct EigenCluster {
  double lambda0 = 0.0;       // mean of the member eigenvalues
  std::vector<int> members;   // ascending indices into eigenvalues

  int multiplicity() const { return static_cast<int>(members.size()); }
};

// Default gap tolerance: 1e-9 * (1 + spectral radius).
double default_cluster_tol(double spectral_radius);

// Deterministic dense symmetric eigensolver (Householder tridiagonalization
// followed by implicit-shift QL). Eigenvalues ascending; each eigenvector's
// first entry of largest magnitude is made positive.
SpectralDecomposition symmetric_eig(const SymmetricMatrix& a);

// Greedy gap-based partition of the (sorted) spectrum. Clusters are ordered
// ascending and their multiplicities sum to n.
std::vector<EigenCluster> cluster_spectrum(const SpectralDecomposition& d, double cluster_tol);

// Solves (lambda I - A) u = v through the decomposition. cluster_tol < 0
// selects the default; real shifts within cluster_tol of an eigenvalue throw
// NumericalError.
Vector resolvent_apply(const SpectralDecomposition& d, double lambda, std::span<const double> v,
                       double cluster_tol = -1.0);
CVector resolvent_apply(const SpectralDecomposition& d, std::complex<double> lambda,
                        std::span<const double> v, double cluster_tol = -1.0);

Vector resolvent_apply(const SymmetricMatrix& a, double lambda, std::span<const double> v,
                       double cluster_tol = -1.0);
CVector resolvent_apply(const SymmetricMatrix& a, std::complex<double> lambda,
                        std::span<const double> v, double cluster_tol = -1.0);

}  // namespace rankone
