#pragma once

#include <span>
#include <vector>

#include "rankone/eigcore.hpp"
#include "rankone/krein.hpp"

// Worked example: the inverse Dirichlet Laplacian A = T_DD^-1 on [0,1]
// perturbed by the rank-one update alpha * f_a (f_a| with f_a(x) = x - 1/2.
namespace rankone::dirichlet {

struct Quadrature {
  Vector nodes;
  Vector weights;
};

// Gauss-Legendre rule on (0,1); nodes symmetric about 1/2, weights sum to 1.
Quadrature gauss_legendre_01(int n);

// One spectral point in its three equivalent parameterizations:
// z = k^2 is the spectral parameter of T_DD, lambda = 1/z that of A.
struct WavenumberPoint {
  double k = 0.0;
  double z = 0.0;
  double lambda = 0.0;

  static WavenumberPoint from_k(double k);
  static WavenumberPoint from_z(double z);
  static WavenumberPoint from_lambda(double lambda);
};

struct DirichletModel {
  double alpha = 1.0;
  int n = 0;
  Vector nodes;
  Vector weights;

  static DirichletModel create(double alpha, int n);  // n >= 16
};

// Integral kernel of T_DD^-1.
double green_kernel(double x, double xi);

// Integral kernel of (z - T_DD)^-1 at z = k^2; requires |sin k| away from 0.
double resolvent_kernel(double x, double xi, const WavenumberPoint& p);

// f_z = z (z - T_DD)^-1 f_a, in closed form.
double f_z_profile(double x, const WavenumberPoint& p);

// The analytic Krein denominator 1 + alpha*((k/2) cot(k/2) - 1); its zeros in
// k locate the new eigenvalues of B.
double analytic_secular(const WavenumberPoint& p, double alpha);

// (f_a | P^A f_a) at a Dirichlet wavenumber k0 = n*pi:
// 2*((1 + cos k0)/(2 k0))^2, i.e. 2/k0^2 for even n and 0 for odd n.
double overlap_analytic(double k0);

// Eigenfunction of B at a secular root k: -(1/2) sin(k(x - 1/2)) / sin(k/2).
double eigenfunction_b(double k, double x);

// (lambda - 1/t)^-1 evaluated through the shifted identity
// (1/lambda)(1 - (1/lambda)/(1/lambda - t)); translates resolvents of T_DD
// into resolvents of A.
double resolvent_of_inverse(double lambda, double t);

struct NystromSystem {
  SymmetricMatrix a;  // sqrt(w_i) G(x_i, x_j) sqrt(w_j)
  Vector f;           // sqrt(w_i) (x_i - 1/2)
};

NystromSystem nystrom_build(const DirichletModel& m);

}  // namespace rankone::dirichlet
