#include "rankone/dirichlet.hpp"

#include <cmath>
#include <numbers>

namespace rankone::dirichlet {

namespace {

constexpr double kPi = std::numbers::pi;

void require_unit_interval(double x, const char* what) {
  if (!(x >= 0.0 && x <= 1.0)) throw InputError(std::string(what) + ": argument outside [0,1]");
}

}  // namespace

Quadrature gauss_legendre_01(int n) {
  if (n < 1) throw InputError("gauss_legendre_01: n must be >= 1");
  Quadrature q;
  q.nodes.resize(n);
  q.weights.resize(n);
  // Newton iteration on P_n from the Chebyshev initial guess; nodes come out
  // mirrored in pairs, so the rule is symmetric about 1/2 by construction.
  const int half = (n + 1) / 2;
  for (int i = 0; i < half; ++i) {
    double x = std::cos(kPi * (i + 0.75) / (n + 0.5));
    double pp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p1 = 1.0, p2 = 0.0;
      for (int j = 0; j < n; ++j) {
        const double p3 = p2;
        p2 = p1;
        p1 = ((2.0 * j + 1.0) * x * p2 - j * p3) / (j + 1.0);
      }
      pp = n * (x * p1 - p2) / (x * x - 1.0);
      const double dx = p1 / pp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    q.nodes[i] = 0.5 - 0.5 * x;
    q.nodes[n - 1 - i] = 0.5 + 0.5 * x;
    const double w = 1.0 / ((1.0 - x * x) * pp * pp);
    q.weights[i] = w;
    q.weights[n - 1 - i] = w;
  }
  return q;
}

WavenumberPoint WavenumberPoint::from_k(double k) {
  if (!(k > 0.0)) throw InputError("WavenumberPoint: k must be positive");
  return {k, k * k, 1.0 / (k * k)};
}

WavenumberPoint WavenumberPoint::from_z(double z) {
  if (!(z > 0.0)) throw InputError("WavenumberPoint: z must be positive");
  return from_k(std::sqrt(z));
}

WavenumberPoint WavenumberPoint::from_lambda(double lambda) {
  if (!(lambda > 0.0)) throw InputError("WavenumberPoint: lambda must be positive");
  return from_k(1.0 / std::sqrt(lambda));
}

DirichletModel DirichletModel::create(double alpha, int n) {
  if (n < 16) throw InputError("DirichletModel: quadrature size must be >= 16");
  DirichletModel m;
  m.alpha = alpha;
  m.n = n;
  Quadrature q = gauss_legendre_01(n);
  m.nodes = std::move(q.nodes);
  m.weights = std::move(q.weights);
  return m;
}

double green_kernel(double x, double xi) {
  require_unit_interval(x, "green_kernel");
  require_unit_interval(xi, "green_kernel");
  return x <= xi ? -x * (xi - 1.0) : -(x - 1.0) * xi;
}

double resolvent_kernel(double x, double xi, const WavenumberPoint& p) {
  require_unit_interval(x, "resolvent_kernel");
  require_unit_interval(xi, "resolvent_kernel");
  const double sk = std::sin(p.k);
  if (std::abs(sk) <= 1e-8) throw NumericalError("resolvent_kernel: k at a Dirichlet wavenumber");
  const double lo = std::min(x, xi), hi = std::max(x, xi);
  return -std::sin(p.k * lo) * std::sin(p.k * (1.0 - hi)) / (p.k * sk);
}

double f_z_profile(double x, const WavenumberPoint& p) {
  const double sh = std::sin(0.5 * p.k);
  if (std::abs(sh) <= 1e-8) throw NumericalError("f_z_profile: sin(k/2) vanishes");
  return (x - 0.5) - 0.5 * std::sin(p.k * (x - 0.5)) / sh;
}

double analytic_secular(const WavenumberPoint& p, double alpha) {
  const double sh = std::sin(0.5 * p.k);
  if (std::abs(sh) <= 1e-8) throw NumericalError("analytic_secular: pole of cot(k/2)");
  const double half_cot = 0.5 * p.k * std::cos(0.5 * p.k) / sh;
  return 1.0 + alpha * (half_cot - 1.0);
}

double overlap_analytic(double k0) {
  const double ratio = k0 / kPi;
  if (!(k0 > 0.0) || std::abs(ratio - std::round(ratio)) > 1e-8)
    throw InputError("overlap_analytic: k0 must be a positive multiple of pi");
  const double v = (1.0 + std::cos(k0)) / (2.0 * k0);
  return 2.0 * v * v;
}

double eigenfunction_b(double k, double x) {
  const double sh = std::sin(0.5 * k);
  if (std::abs(sh) <= 1e-8) throw NumericalError("eigenfunction_b: sin(k/2) vanishes");
  return -0.5 * std::sin(k * (x - 0.5)) / sh;
}

double resolvent_of_inverse(double lambda, double t) {
  if (lambda == 0.0) throw InputError("resolvent_of_inverse: lambda must be nonzero");
  const double il = 1.0 / lambda;
  if (il == t) throw NumericalError("resolvent_of_inverse: 1/lambda in the spectrum");
  return il * (1.0 - il / (il - t));
}

NystromSystem nystrom_build(const DirichletModel& m) {
  const int n = m.n;
  Matrix a(n, n);
  Vector sw(n);
  for (int i = 0; i < n; ++i) sw[i] = std::sqrt(m.weights[i]);
  for (int i = 0; i < n; ++i) {
    for (int j = i; j < n; ++j) {
      const double v = sw[i] * green_kernel(m.nodes[i], m.nodes[j]) * sw[j];
      a(i, j) = v;
      a(j, i) = v;
    }
  }
  Vector f(n);
  for (int i = 0; i < n; ++i) f[i] = sw[i] * (m.nodes[i] - 0.5);
  return {SymmetricMatrix(std::move(a)), std::move(f)};
}

}  // namespace rankone::dirichlet
