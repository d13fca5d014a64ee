#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <numbers>

#include "oracles.hpp"
#include "rankone/dirichlet.hpp"

using namespace rankone;
using namespace rankone::dirichlet;

namespace {

constexpr double kPi = std::numbers::pi;

struct Fixture {
  DirichletModel model;
  NystromSystem sys;
  SpectralDecomposition dec;

  explicit Fixture(int n)
      : model(DirichletModel::create(1.0, n)),
        sys(nystrom_build(model)),
        dec(symmetric_eig(sys.a)) {}

  double mode_lambda(int mode) const { return dec.eigenvalues[dec.order() - mode]; }
  double mode_weight(int mode) const {
    double qf = 0.0;
    for (int i = 0; i < dec.order(); ++i) qf += dec.vectors(i, dec.order() - mode) * sys.f[i];
    return qf * qf;
  }
};

const Fixture& fx400() {
  static const Fixture f(400);
  return f;
}

}  // namespace

TEST_CASE("green kernel values, boundary and symmetry") {
  for (double xi : {0.0, 0.25, 0.7, 1.0}) {
    CHECK(green_kernel(0.0, xi) == 0.0);
    CHECK(green_kernel(1.0, xi) == 0.0);
  }
  CHECK(green_kernel(0.5, 0.5) == doctest::Approx(0.25));
  CHECK(green_kernel(0.3, 0.7) == doctest::Approx(0.09));
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j <= 20; ++j) {
      const double x = i / 20.0, xi = j / 20.0;
      CHECK(green_kernel(x, xi) == doctest::Approx(green_kernel(xi, x)));
    }
  CHECK_THROWS_AS(green_kernel(-0.1, 0.5), InputError);
  CHECK_THROWS_AS(green_kernel(0.5, 1.2), InputError);
}

TEST_CASE("resolvent kernel: small-k limit, boundary, symmetry, pole") {
  const auto p = WavenumberPoint::from_k(1e-3);
  double worst = 0.0;
  for (int i = 0; i <= 20; ++i)
    for (int j = 0; j <= 20; ++j) {
      const double x = i / 20.0, xi = j / 20.0;
      worst = std::max(worst, std::abs(resolvent_kernel(x, xi, p) + green_kernel(x, xi)));
    }
  CHECK(worst <= 1e-5);
  CHECK(resolvent_kernel(0.3, 0.7, p) == doctest::Approx(-0.09).epsilon(1e-4));

  const auto p13 = WavenumberPoint::from_k(1.3);
  CHECK(resolvent_kernel(0.0, 0.4, p13) == 0.0);
  for (int i = 1; i < 8; ++i)
    for (int j = 1; j < 8; ++j)
      CHECK(resolvent_kernel(i / 8.0, j / 8.0, p13) ==
            doctest::Approx(resolvent_kernel(j / 8.0, i / 8.0, p13)));
  CHECK_THROWS_AS(resolvent_kernel(0.3, 0.7, WavenumberPoint::from_k(kPi)), NumericalError);
}

TEST_CASE("f_z profile: boundary values and direct substitution") {
  const auto p = WavenumberPoint::from_k(1.3);
  CHECK(std::abs(f_z_profile(0.0, p)) <= 1e-15);
  CHECK(std::abs(f_z_profile(1.0, p)) <= 1e-15);
  CHECK(std::abs(f_z_profile(0.5, p)) <= 1e-15);
  CHECK(f_z_profile(0.75, p) ==
        doctest::Approx(0.25 - 0.5 * std::sin(0.325) / std::sin(0.65)));
  CHECK_THROWS_AS(f_z_profile(0.3, WavenumberPoint::from_k(2.0 * kPi)), NumericalError);
}

TEST_CASE("f_z satisfies the inhomogeneous Helmholtz equation") {
  // z f_z + f_z'' = z (x - 1/2), checked by central differences.
  const auto p = WavenumberPoint::from_k(1.3);
  const double h = 1e-3;
  double worst = 0.0;
  for (double x = h; x < 1.0 - h / 2; x += h) {
    const double fxx =
        (f_z_profile(x - h, p) - 2.0 * f_z_profile(x, p) + f_z_profile(x + h, p)) / (h * h);
    worst = std::max(worst, std::abs(p.z * f_z_profile(x, p) + fxx - p.z * (x - 0.5)));
  }
  CHECK(worst <= 1e-4);
}

TEST_CASE("f_z agrees with quadrature of the resolvent kernel") {
  // f_z(x) = z * Int G(x, xi, z) f_a(xi) dxi; the kernel has a kink at xi = x,
  // so integrate the two smooth panels separately.
  const auto p = WavenumberPoint::from_k(1.3);
  const auto quad = gauss_legendre_01(64);
  for (double x : {0.15, 0.4, 0.63, 0.85}) {
    double integral = 0.0;
    for (size_t j = 0; j < quad.nodes.size(); ++j) {
      const double lo = x * quad.nodes[j];
      integral += x * quad.weights[j] * resolvent_kernel(x, lo, p) * (lo - 0.5);
      const double hi = x + (1.0 - x) * quad.nodes[j];
      integral += (1.0 - x) * quad.weights[j] * resolvent_kernel(x, hi, p) * (hi - 0.5);
    }
    CHECK(std::abs(p.z * integral - f_z_profile(x, p)) <= 1e-6);
  }
}

TEST_CASE("analytic secular function") {
  for (double k : {0.7, 1.3, 4.0})
    CHECK(analytic_secular(WavenumberPoint::from_k(k), 0.0) == doctest::Approx(1.0));
  CHECK(std::abs(analytic_secular(WavenumberPoint::from_k(kPi), 1.0)) <= 1e-12);
  CHECK(analytic_secular(WavenumberPoint::from_k(1e-4), 1.0) == doctest::Approx(1.0).epsilon(1e-8));
  CHECK_THROWS_AS(analytic_secular(WavenumberPoint::from_k(2.0 * kPi), 1.0), NumericalError);
}

TEST_CASE("analytic overlap at Dirichlet wavenumbers") {
  CHECK(overlap_analytic(2.0 * kPi) == doctest::Approx(2.0 / std::pow(2.0 * kPi, 2)));
  CHECK(overlap_analytic(kPi) <= 1e-25);
  CHECK(overlap_analytic(3.0 * kPi) <= 1e-25);
  CHECK(overlap_analytic(4.0 * kPi) == doctest::Approx(2.0 / std::pow(4.0 * kPi, 2)));
  CHECK_THROWS_AS(overlap_analytic(1.3), InputError);
}

TEST_CASE("eigenfunction of B at a root") {
  CHECK(eigenfunction_b(1.3, 0.5) == 0.0);
  CHECK(eigenfunction_b(1.3, 0.0) == doctest::Approx(0.5));
  for (int i = 0; i <= 10; ++i) {
    const double x = i / 10.0;
    CHECK(eigenfunction_b(1.3, x) == doctest::Approx(-eigenfunction_b(1.3, 1.0 - x)));
  }
}

TEST_CASE("scalar resolvent of the inverse operator") {
  CHECK(resolvent_of_inverse(1.0, 2.0) == doctest::Approx(2.0));
  CHECK(resolvent_of_inverse(-1.0, 2.0) == doctest::Approx(-2.0 / 3.0));
  CHECK_THROWS_AS(resolvent_of_inverse(0.0, 2.0), InputError);
}

TEST_CASE("matrix form of the inverse-resolvent identity") {
  // (lambda - A)^-1 == (1/lambda)(I - (1/lambda)(1/lambda - T)^-1) with
  // T = A^-1, both sides via LU on the Nystrom pair.
  const Fixture fx(64);
  const int n = 64;
  const double lambda = 0.9;
  const Matrix lhs = testutil::lu_inverse(testutil::shifted<double>(fx.sys.a.entries(), lambda));

  const Matrix t = testutil::lu_inverse(fx.sys.a.entries());
  const double il = 1.0 / lambda;
  const Matrix rinv = testutil::lu_inverse(testutil::shifted<double>(t, il));
  Matrix rhs(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) rhs(i, j) = il * ((i == j ? 1.0 : 0.0) - il * rinv(i, j));
  CHECK(max_abs_diff(lhs, rhs) <= 1e-9);
}

TEST_CASE("wavenumber parameterizations agree") {
  const auto p = WavenumberPoint::from_k(2.0);
  CHECK(p.z == doctest::Approx(4.0));
  CHECK(p.lambda == doctest::Approx(0.25));
  CHECK(p.lambda * p.z == doctest::Approx(1.0));
  const auto q = WavenumberPoint::from_lambda(0.25);
  CHECK(q.k == doctest::Approx(2.0));
  CHECK(WavenumberPoint::from_z(4.0).k == doctest::Approx(2.0));
  CHECK_THROWS_AS(WavenumberPoint::from_k(-1.0), InputError);
  CHECK_THROWS_AS(WavenumberPoint::from_lambda(0.0), InputError);
}

TEST_CASE("gauss-legendre rule on the unit interval") {
  for (int n : {16, 33, 64}) {
    const auto q = gauss_legendre_01(n);
    double sum = 0.0;
    for (double w : q.weights) {
      CHECK(w > 0.0);
      sum += w;
    }
    CHECK(std::abs(sum - 1.0) <= 1e-12);
    for (int i = 1; i < n; ++i) CHECK(q.nodes[i] > q.nodes[i - 1]);
    for (int i = 0; i < n; ++i) {
      CHECK(q.nodes[i] > 0.0);
      CHECK(q.nodes[i] < 1.0);
      CHECK(q.nodes[i] + q.nodes[n - 1 - i] == doctest::Approx(1.0).epsilon(1e-14));
    }
    // Exact for polynomials: Int_0^1 x^5 = 1/6, Int_0^1 x^8 = 1/9.
    double p5 = 0.0, p8 = 0.0;
    for (int i = 0; i < n; ++i) {
      p5 += q.weights[i] * std::pow(q.nodes[i], 5);
      p8 += q.weights[i] * std::pow(q.nodes[i], 8);
    }
    CHECK(p5 == doctest::Approx(1.0 / 6.0).epsilon(1e-13));
    CHECK(p8 == doctest::Approx(1.0 / 9.0).epsilon(1e-13));
  }
  CHECK_THROWS_AS(DirichletModel::create(1.0, 8), InputError);
}

TEST_CASE("nystrom spectrum approaches 1/(n pi)^2 from above") {
  const auto& fx = fx400();
  // The leading eigenvalue is accurate to 1e-4 relative.
  const double top = fx.mode_lambda(1);
  CHECK(std::abs(top - 1.0 / (kPi * kPi)) / (1.0 / (kPi * kPi)) <= 1e-4);

  // The absolute error is a near-constant upward shift that scales as 1/N^2.
  const Fixture f100(100), f200(200);
  const double exact = 1.0 / (kPi * kPi);
  const double s100 = f100.mode_lambda(1) - exact;
  const double s200 = f200.mode_lambda(1) - exact;
  CHECK(s100 > 0.0);
  CHECK(s200 > 0.0);
  CHECK(s100 / s200 == doctest::Approx(4.0).epsilon(0.4));
}

TEST_CASE("discrete overlaps with odd modes vanish by node symmetry") {
  const auto& fx = fx400();
  for (int mode : {1, 3, 5, 7, 9}) CHECK(fx.mode_weight(mode) <= 1e-10);
  // Even modes carry the analytic weight 2/k0^2.
  for (int mode : {2, 4}) {
    const double k0 = mode * kPi;
    CHECK(fx.mode_weight(mode) == doctest::Approx(2.0 / (k0 * k0)).epsilon(1e-3));
  }
}

TEST_CASE("resolved clusters of the discrete spectrum are simple") {
  const auto& fx = fx400();
  const double tol = default_cluster_tol(fx.dec.spectral_radius());
  const auto clusters = cluster_spectrum(fx.dec, tol);
  // Examine the 50 largest eigenvalues: all separated, multiplicity one.
  int seen = 0;
  for (auto it = clusters.rbegin(); it != clusters.rend() && seen < 50; ++it, ++seen)
    CHECK(it->multiplicity() == 1);
}

TEST_CASE("discrete secular function matches (k/2)cot(k/2)") {
  const auto& fx = fx400();
  const auto s = build_secular(fx.dec, RankOneUpdate{fx.sys.f, 1.0});
  for (double k : {1.3, 2.7, 5.1}) {
    const double lam = 1.0 / (k * k);
    const double analytic = analytic_secular(WavenumberPoint::from_k(k), 1.0);
    CHECK(std::abs(eval_secular(s, lam) - analytic) <= 1e-3);
  }
}
