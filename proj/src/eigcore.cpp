#include "rankone/eigcore.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

namespace rankone {

namespace {

void tridiagonalize(Matrix& z, Vector& d, Vector& e);
void ql_implicit(Matrix& z, Vector& d, Vector& e);

double resolve_cluster_tol(const SpectralDecomposition& dec, double cluster_tol) {
  return cluster_tol >= 0.0 ? cluster_tol : default_cluster_tol(dec.spectral_radius());
}

}  // namespace

SymmetricMatrix::SymmetricMatrix(Matrix entries) : entries_(std::move(entries)) {
  const int n = entries_.rows();
  if (n < 1 || entries_.cols() != n) throw InputError("SymmetricMatrix: order must be >= 1 and square");
  double amax = 0.0;
  for (double v : entries_.data()) {
    if (!std::isfinite(v)) throw InputError("SymmetricMatrix: non-finite entry");
    amax = std::max(amax, std::abs(v));
  }
  double asym = 0.0;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) asym = std::max(asym, std::abs(entries_(i, j) - entries_(j, i)));
  if (asym > 1e-12 * (1.0 + amax)) throw InputError("SymmetricMatrix: asymmetry beyond tolerance");
}

SymmetricMatrix SymmetricMatrix::from_rows(int n, std::span<const double> row_major) {
  if (n < 1 || row_major.size() != static_cast<size_t>(n) * n)
    throw InputError("SymmetricMatrix: entries length must be n*n");
  Matrix m(n, n);
  std::copy(row_major.begin(), row_major.end(), m.data().begin());
  return SymmetricMatrix(std::move(m));
}

double SpectralDecomposition::spectral_radius() const {
  double r = 0.0;
  for (double v : eigenvalues) r = std::max(r, std::abs(v));
  return r;
}

double default_cluster_tol(double spectral_radius) { return 1e-9 * (1.0 + spectral_radius); }

SpectralDecomposition symmetric_eig(const SymmetricMatrix& a) {
  const int n = a.order();
  Matrix z = a.entries();
  // Work on the symmetrized average so roundoff asymmetry cannot leak in.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = 0.5 * (z(i, j) + z(j, i));
      z(i, j) = z(j, i) = v;
    }

  Vector d(n), e(n);
  tridiagonalize(z, d, e);
  ql_implicit(z, d, e);

  // Sort ascending with a stable permutation, then fix each column's sign so
  // its first entry of largest magnitude is positive.
  std::vector<int> perm(n);
  std::iota(perm.begin(), perm.end(), 0);
  std::stable_sort(perm.begin(), perm.end(), [&](int i, int j) { return d[i] < d[j]; });

  SpectralDecomposition dec;
  dec.eigenvalues.resize(n);
  dec.vectors = Matrix(n, n);
  for (int j = 0; j < n; ++j) {
    const int src = perm[j];
    dec.eigenvalues[j] = d[src];
    int imax = 0;
    double vmax = 0.0;
    for (int i = 0; i < n; ++i) {
      const double av = std::abs(z(i, src));
      if (av > vmax) {
        vmax = av;
        imax = i;
      }
    }
    const double sign = z(imax, src) < 0.0 ? -1.0 : 1.0;
    for (int i = 0; i < n; ++i) dec.vectors(i, j) = sign * z(i, src);
  }
  return dec;
}

namespace {

// Householder reduction to tridiagonal form with accumulated transforms
// (EISPACK tred2). On exit the columns of z hold the orthogonal similarity,
// d the diagonal and e[1..n-1] the subdiagonal.
void tridiagonalize(Matrix& z, Vector& d, Vector& e) {
  const int n = z.rows();
  for (int i = n - 1; i >= 1; --i) {
    const int l = i - 1;
    double h = 0.0, scale = 0.0;
    if (l > 0) {
      for (int k = 0; k <= l; ++k) scale += std::abs(z(i, k));
      if (scale == 0.0) {
        e[i] = z(i, l);
      } else {
        for (int k = 0; k <= l; ++k) {
          z(i, k) /= scale;
          h += z(i, k) * z(i, k);
        }
        double f = z(i, l);
        double g = f >= 0.0 ? -std::sqrt(h) : std::sqrt(h);
        e[i] = scale * g;
        h -= f * g;
        z(i, l) = f - g;
        f = 0.0;
        for (int j = 0; j <= l; ++j) {
          z(j, i) = z(i, j) / h;
          g = 0.0;
          for (int k = 0; k <= j; ++k) g += z(j, k) * z(i, k);
          for (int k = j + 1; k <= l; ++k) g += z(k, j) * z(i, k);
          e[j] = g / h;
          f += e[j] * z(i, j);
        }
        const double hh = f / (h + h);
        for (int j = 0; j <= l; ++j) {
          f = z(i, j);
          g = e[j] - hh * f;
          e[j] = g;
          for (int k = 0; k <= j; ++k) z(j, k) -= f * e[k] + g * z(i, k);
        }
      }
    } else {
      e[i] = z(i, l);
    }
    d[i] = h;
  }
  d[0] = 0.0;
  e[0] = 0.0;
  for (int i = 0; i < n; ++i) {
    const int l = i - 1;
    if (d[i] != 0.0) {
      for (int j = 0; j <= l; ++j) {
        double g = 0.0;
        for (int k = 0; k <= l; ++k) g += z(i, k) * z(k, j);
        for (int k = 0; k <= l; ++k) z(k, j) -= g * z(k, i);
      }
    }
    d[i] = z(i, i);
    z(i, i) = 1.0;
    for (int j = 0; j <= l; ++j) z(j, i) = z(i, j) = 0.0;
  }
}

// Implicit-shift QL on the tridiagonal (d, e), rotations accumulated into the
// columns of z (EISPACK tql2).
void ql_implicit(Matrix& z, Vector& d, Vector& e) {
  const int n = z.rows();
  if (n == 1) return;
  constexpr double eps = std::numeric_limits<double>::epsilon();
  for (int i = 1; i < n; ++i) e[i - 1] = e[i];
  e[n - 1] = 0.0;

  for (int l = 0; l < n; ++l) {
    int iter = 0;
    int m;
    do {
      for (m = l; m < n - 1; ++m) {
        const double dd = std::abs(d[m]) + std::abs(d[m + 1]);
        if (std::abs(e[m]) <= eps * dd) break;
      }
      if (m != l) {
        if (iter++ == 50) throw NumericalError("symmetric_eig: QL iteration did not converge");
        double g = (d[l + 1] - d[l]) / (2.0 * e[l]);
        double r = std::hypot(g, 1.0);
        g = d[m] - d[l] + e[l] / (g + std::copysign(r, g));
        double s = 1.0, c = 1.0, p = 0.0;
        bool underflow = false;
        for (int i = m - 1; i >= l; --i) {
          double f = s * e[i];
          const double b = c * e[i];
          r = std::hypot(f, g);
          e[i + 1] = r;
          if (r == 0.0) {
            d[i + 1] -= p;
            e[m] = 0.0;
            underflow = true;
            break;
          }
          s = f / r;
          c = g / r;
          g = d[i + 1] - p;
          r = (d[i] - g) * s + 2.0 * c * b;
          p = s * r;
          d[i + 1] = g + p;
          g = c * r - b;
          for (int k = 0; k < n; ++k) {
            f = z(k, i + 1);
            z(k, i + 1) = s * z(k, i) + c * f;
            z(k, i) = c * z(k, i) - s * f;
          }
        }
        if (underflow) continue;
        d[l] -= p;
        e[l] = g;
        e[m] = 0.0;
      }
    } while (m != l);
  }
}

}  // namespace

std::vector<EigenCluster> cluster_spectrum(const SpectralDecomposition& d, double cluster_tol) {
  if (!(cluster_tol > 0.0)) throw InputError("cluster_spectrum: cluster_tol must be > 0");
  std::vector<EigenCluster> clusters;
  const int n = d.order();
  int start = 0;
  for (int i = 1; i <= n; ++i) {
    if (i == n || d.eigenvalues[i] - d.eigenvalues[i - 1] > cluster_tol) {
      EigenCluster c;
      double sum = 0.0;
      for (int k = start; k < i; ++k) {
        c.members.push_back(k);
        sum += d.eigenvalues[k];
      }
      c.lambda0 = sum / c.members.size();
      clusters.push_back(std::move(c));
      start = i;
    }
  }
  return clusters;
}

Vector resolvent_apply(const SpectralDecomposition& d, double lambda, std::span<const double> v,
                       double cluster_tol) {
  const int n = d.order();
  if (v.size() != static_cast<size_t>(n)) throw InputError("resolvent_apply: size mismatch");
  const double tol = resolve_cluster_tol(d, cluster_tol);
  for (double ev : d.eigenvalues)
    if (std::abs(lambda - ev) <= tol) throw NumericalError("resolvent_apply: resolvent at spectrum");
  Vector u(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double qv = 0.0;
    for (int i = 0; i < n; ++i) qv += d.vectors(i, j) * v[i];
    const double coeff = qv / (lambda - d.eigenvalues[j]);
    for (int i = 0; i < n; ++i) u[i] += d.vectors(i, j) * coeff;
  }
  return u;
}

CVector resolvent_apply(const SpectralDecomposition& d, std::complex<double> lambda,
                        std::span<const double> v, double cluster_tol) {
  const int n = d.order();
  if (v.size() != static_cast<size_t>(n)) throw InputError("resolvent_apply: size mismatch");
  const double tol = resolve_cluster_tol(d, cluster_tol);
  for (double ev : d.eigenvalues)
    if (std::abs(lambda - ev) <= tol) throw NumericalError("resolvent_apply: resolvent at spectrum");
  CVector u(n, 0.0);
  for (int j = 0; j < n; ++j) {
    double qv = 0.0;
    for (int i = 0; i < n; ++i) qv += d.vectors(i, j) * v[i];
    const std::complex<double> coeff = qv / (lambda - d.eigenvalues[j]);
    for (int i = 0; i < n; ++i) u[i] += d.vectors(i, j) * coeff;
  }
  return u;
}

Vector resolvent_apply(const SymmetricMatrix& a, double lambda, std::span<const double> v,
                       double cluster_tol) {
  return resolvent_apply(symmetric_eig(a), lambda, v, cluster_tol);
}

CVector resolvent_apply(const SymmetricMatrix& a, std::complex<double> lambda,
                        std::span<const double> v, double cluster_tol) {
  return resolvent_apply(symmetric_eig(a), lambda, v, cluster_tol);
}

}  // namespace rankone
