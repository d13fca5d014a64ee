#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <complex>
#include <random>

#include "oracles.hpp"
#include "rankone/krein.hpp"

using namespace rankone;

namespace {

SymmetricMatrix diag(std::initializer_list<double> values) {
  Matrix m(static_cast<int>(values.size()), static_cast<int>(values.size()));
  int i = 0;
  for (double v : values) m(i, i) = v, ++i;
  return SymmetricMatrix(std::move(m));
}

}  // namespace

TEST_CASE("laurent data at a diagonal eigenvalue") {
  const auto ld = laurent_at(diag({0.0, 2.0}), 0.0);
  CHECK(ld.multiplicity == 1);
  CHECK(ld.projector(0, 0) == doctest::Approx(1.0));
  CHECK(ld.projector(1, 1) == doctest::Approx(0.0));
  CHECK(ld.reduced_resolvent(1, 1) == doctest::Approx(-0.5));
  CHECK(ld.reduced_resolvent(0, 0) == doctest::Approx(0.0));

  // The truncated Laurent series P/h + R - h R^2 matches the resolvent to
  // second order; for this matrix the (1,1) entry is 1/(h-2) vs -1/2 - h/4.
  for (double h : {1e-2, 1e-3}) {
    const double exact = 1.0 / (h - 2.0);
    const double series = -0.5 - h / 4.0;
    CHECK(std::abs(exact - series) <= h * h / 7.0);
  }
}

TEST_CASE("laurent data with no remainder spectrum and full spectrum") {
  const auto full = laurent_at(SymmetricMatrix(Matrix::identity(3)), 1.0);
  CHECK(full.multiplicity == 3);
  CHECK(max_abs_diff(full.projector, Matrix::identity(3)) <= 1e-12);
  CHECK(max_abs(full.reduced_resolvent) <= 1e-12);

  const auto mid = laurent_at(diag({0.0, 1.0, 2.0}), 1.0);
  CHECK(mid.multiplicity == 1);
  CHECK(mid.projector(1, 1) == doctest::Approx(1.0));
  CHECK(mid.reduced_resolvent(0, 0) == doctest::Approx(1.0));
  CHECK(mid.reduced_resolvent(2, 2) == doctest::Approx(-1.0));
}

TEST_CASE("laurent invariants on random clustered instances") {
  for (uint64_t seed = 0; seed < 20; ++seed) {
    const auto inst = testutil::make_instance(CaseTag::A, 100 + seed);
    const auto d = symmetric_eig(inst.a);
    const auto ld = laurent_at(d, inst.lambda0);
    CHECK(ld.multiplicity == inst.multiplicity);

    const Matrix& p = ld.projector;
    const Matrix& r = ld.reduced_resolvent;
    CHECK(max_abs_diff(p, transpose(p)) <= 1e-12);
    CHECK(max_abs_diff(matmul(p, p), p) <= 1e-10);
    CHECK(max_abs(matmul(p, r)) <= 1e-10);
    CHECK(max_abs(matmul(r, p)) <= 1e-10);

    // R (lambda0 I - A) = I - P
    const int n = inst.a.order();
    Matrix shifted(n, n);
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) shifted(i, j) = (i == j ? ld.lambda0 : 0.0) - inst.a(i, j);
    Matrix lhs = matmul(r, shifted);
    for (int i = 0; i < n; ++i) lhs(i, i) -= 1.0;
    for (auto& v : lhs.data()) v = -v;
    CHECK(max_abs_diff(lhs, p) <= 1e-9);
  }
}

TEST_CASE("laurent at a point off the spectrum has a null projector") {
  const auto ld = laurent_at(diag({0.0, 2.0}), 1.0);
  CHECK(ld.multiplicity == 0);
  CHECK(max_abs(ld.projector) == 0.0);
  CHECK(ld.reduced_resolvent(0, 0) == doctest::Approx(1.0));
  CHECK(ld.reduced_resolvent(1, 1) == doctest::Approx(-1.0));
}

TEST_CASE("laurent rejects a shift matching two clusters") {
  const auto a = diag({0.0, 1.5e-9});
  CHECK_THROWS_AS(laurent_at(a, 0.75e-9, 1e-9), NumericalError);
}

TEST_CASE("projection limit converges to the spectral projector") {
  const auto rep = projection_limit(diag({0.0, 1.0}), 0.0);
  CHECK(rep.value(0, 0) == doctest::Approx(1.0).epsilon(2e-6));
  CHECK(std::abs(rep.value(1, 1)) <= 2e-6);
  CHECK(rep.tail_monotone);
  CHECK(rep.distances.back() <= 2e-6);

  // lambda0 off the spectrum: the limit is zero, with distance ~ eps/gap.
  const auto off = projection_limit(diag({5.0}), 0.0);
  CHECK(max_abs(off.value) <= 1e-6 / 5.0 * 1.01);
  CHECK(off.tail_monotone);
}

TEST_CASE("projection limit matches laurent on a double eigenvalue") {
  std::mt19937_64 rng(5);
  const Matrix q = testutil::random_orthogonal(6, rng);
  const Vector d = {0.3, 0.3, 1.1, 1.9, 2.6, 3.4};
  const SymmetricMatrix a(testutil::sandwich(q, d));
  const auto rep = projection_limit(a, 0.3);
  CHECK(rep.distances.back() <= 1e-5);
  CHECK(rep.tail_monotone);
  double trace = 0.0;
  for (int i = 0; i < 6; ++i) trace += rep.value(i, i);
  CHECK(trace == doctest::Approx(2.0).epsilon(1e-4));
}

TEST_CASE("projection limit validates the epsilon sequence") {
  const auto a = diag({0.0, 1.0});
  CHECK_THROWS_AS(projection_limit(a, 0.0, std::vector<double>{1e-2, 1e-2}), InputError);
  CHECK_THROWS_AS(projection_limit(a, 0.0, std::vector<double>{2.0, 1e-2}), InputError);
  CHECK_THROWS_AS(projection_limit(a, 0.0, std::vector<double>{1e-2, -1e-3}), InputError);
}

TEST_CASE("secular function assembly") {
  const auto s = build_secular(diag({0.0, 2.0}), RankOneUpdate{{1.0, 1.0}, 1.0});
  REQUIRE(s.poles.size() == 2);
  CHECK(s.poles[0] == doctest::Approx(0.0));
  CHECK(s.poles[1] == doctest::Approx(2.0));
  CHECK(s.weights[0] == doctest::Approx(1.0));
  CHECK(s.weights[1] == doctest::Approx(1.0));

  // Zero-weight poles are dropped.
  const auto s2 = build_secular(diag({0.0, 2.0}), RankOneUpdate{{1.0, 0.0}, 1.0});
  REQUIRE(s2.poles.size() == 1);
  CHECK(s2.poles[0] == doctest::Approx(0.0));

  // Weight sum bounded by |f|^2.
  std::mt19937_64 rng(3);
  for (int rep = 0; rep < 20; ++rep) {
    const SymmetricMatrix a = testutil::random_symmetric(6, rng);
    Vector f(6);
    std::normal_distribution<double> gauss;
    for (auto& v : f) v = gauss(rng);
    const auto sr = build_secular(a, RankOneUpdate{f, 0.7});
    CHECK(sr.weight_sum() <= dot(f, f) + 1e-9);
  }
}

TEST_CASE("secular evaluation") {
  SecularFunction s{{0.0}, {1.0}, 1.0, 0.0};
  CHECK(eval_secular(s, 2.0) == doctest::Approx(0.5));
  CHECK_THROWS_AS(eval_secular(s, 0.0), NumericalError);
  CHECK_THROWS_AS(eval_secular(s, 1e-15), NumericalError);

  SecularFunction zero{{0.0, 1.0}, {0.5, 0.5}, 0.0, 0.0};
  CHECK(eval_secular(zero, 17.0) == doctest::Approx(1.0));
  CHECK(eval_secular(zero, -4.2) == doctest::Approx(1.0));
}

TEST_CASE("classification: overlapping update removes one dimension") {
  const auto rep = classify_case(diag({1.0, 1.0}), RankOneUpdate{{1.0, 0.0}, 1.0}, 1.0);
  CHECK(rep.tag == CaseTag::A);
  CHECK(rep.multiplicity_before == 2);
  CHECK(rep.multiplicity_after == 1);
  CHECK(rep.overlap == doctest::Approx(1.0));
  CHECK_FALSE(rep.regular_value.has_value());
  CHECK(rep.predicted_projector(0, 0) == doctest::Approx(0.0));
  CHECK(rep.predicted_projector(1, 1) == doctest::Approx(1.0));
}

TEST_CASE("classification: constructed case C doubles the eigenspace") {
  const RankOneUpdate u{{0.0, 1.0, 1.0}, -2.0 / 3.0};
  const auto rep = classify_case(diag({0.0, 1.0, 2.0}), u, 0.0);
  CHECK(rep.tag == CaseTag::C);
  REQUIRE(rep.regular_value.has_value());
  CHECK(std::abs(*rep.regular_value) <= 1e-12);
  CHECK(rep.multiplicity_after == 2);

  // Oracle projector of B at 0 (kernel is span{e0, (0,2,1)/sqrt(5)}).
  const SymmetricMatrix b = apply_update(diag({0.0, 1.0, 2.0}), u);
  const Matrix oracle = testutil::oracle_projector(b, 0.0, 1e-9);
  CHECK(frobenius_diff(rep.predicted_projector, oracle) <= 1e-8);

  double trace = 0.0;
  for (int i = 0; i < 3; ++i) trace += rep.predicted_projector(i, i);
  CHECK(trace == doctest::Approx(2.0));
}

TEST_CASE("classification: zero coupling is case B with D = 1") {
  const auto rep = classify_case(diag({0.0, 1.0}), RankOneUpdate{{1.0, 1.0}, 0.0}, 0.0);
  CHECK(rep.tag == CaseTag::B);
  REQUIRE(rep.regular_value.has_value());
  CHECK(*rep.regular_value == doctest::Approx(1.0));
  CHECK(rep.multiplicity_after == 1);
  CHECK(max_abs_diff(rep.predicted_projector,
                     laurent_at(diag({0.0, 1.0}), 0.0).projector) == 0.0);
}

TEST_CASE("classification rejects lambda0 off the spectrum") {
  CHECK_THROWS_AS(classify_case(diag({0.0, 1.0}), RankOneUpdate{{1.0, 1.0}, 1.0}, 0.5),
                  InputError);
}

TEST_CASE("secular roots: single pole") {
  SecularFunction s{{0.0}, {1.0}, 1.0, 0.0};
  const auto roots = find_new_eigenvalues(s, {});
  REQUIRE(roots.size() == 1);
  CHECK(roots[0] == doctest::Approx(1.0).epsilon(1e-12));
}

TEST_CASE("secular roots: interior and exterior brackets") {
  const auto a = diag({0.0, 2.0});
  const RankOneUpdate u{{1.0, 1.0}, 1.0};
  const auto s = build_secular(a, u);
  const auto roots = find_new_eigenvalues(s, std::vector<double>{0.0, 2.0});
  REQUIRE(roots.size() == 2);
  CHECK(roots[0] == doctest::Approx(2.0 - std::sqrt(2.0)).epsilon(1e-12));
  CHECK(roots[1] == doctest::Approx(2.0 + std::sqrt(2.0)).epsilon(1e-12));
  // Oracle: eigenvalues of [[1,1],[1,3]].
  const auto db = symmetric_eig(apply_update(a, u));
  CHECK(db.eigenvalues[0] == doctest::Approx(roots[0]));
  CHECK(db.eigenvalues[1] == doctest::Approx(roots[1]));
}

TEST_CASE("secular roots: negative coupling moves below the spectrum") {
  // B = A - f f^T = [[-1,-1],[-1,1]] has eigenvalues -sqrt(2), sqrt(2).
  const auto s = build_secular(diag({0.0, 2.0}), RankOneUpdate{{1.0, 1.0}, -1.0});
  const auto roots = find_new_eigenvalues(s, std::vector<double>{0.0, 2.0});
  REQUIRE(roots.size() == 2);
  CHECK(roots[0] == doctest::Approx(-std::sqrt(2.0)).epsilon(1e-12));
  CHECK(roots[1] == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("secular roots: zero coupling has none") {
  SecularFunction s{{0.0, 1.0}, {0.5, 0.5}, 0.0, 0.0};
  CHECK(find_new_eigenvalues(s, {}).empty());
}

TEST_CASE("roots landing on excluded clusters are dropped") {
  // B has eigenvalues {0, 0, 5/3}: the secular root at 0 sits on a cluster of
  // A (the case-C doubling) and is excluded; the moved eigenvalue at 5/3 is a
  // genuinely new one and stays.
  const auto s = build_secular(diag({0.0, 1.0, 2.0}), RankOneUpdate{{0.0, 1.0, 1.0}, -2.0 / 3.0});
  const auto kept = find_new_eigenvalues(s, std::vector<double>{0.0, 1.0, 2.0});
  REQUIRE(kept.size() == 1);
  CHECK(kept[0] == doctest::Approx(5.0 / 3.0).epsilon(1e-9));
  const auto unfiltered = find_new_eigenvalues(s, {});
  REQUIRE(unfiltered.size() == 2);
  CHECK(std::abs(unfiltered[0]) <= 1e-9);
  CHECK(unfiltered[1] == doctest::Approx(5.0 / 3.0).epsilon(1e-9));
}

TEST_CASE("eigenvector at a root") {
  const auto v = eigenvector_at_root(diag({0.0}), RankOneUpdate{{1.0}, 1.0}, 1.0);
  CHECK(v[0] == doctest::Approx(1.0));

  const auto a = diag({0.0, 2.0});
  const RankOneUpdate u{{1.0, 1.0}, 1.0};
  const double root = 2.0 + std::sqrt(2.0);
  const auto w = eigenvector_at_root(a, u, root);
  // Proportional to (1/(2+sqrt 2), 1/sqrt 2).
  CHECK(w[0] / w[1] == doctest::Approx((1.0 / root) / (1.0 / std::sqrt(2.0))));
  // Residual (root I - B) v.
  const SymmetricMatrix b = apply_update(a, u);
  double res = 0.0;
  for (int i = 0; i < 2; ++i) {
    double row = root * w[i];
    for (int j = 0; j < 2; ++j) row -= b(i, j) * w[j];
    res += row * row;
  }
  CHECK(std::sqrt(res) <= 1e-10);
}

TEST_CASE("krein correction: scalar and zero-coupling cases") {
  const Matrix c = krein_resolvent_correction(diag({0.0}), RankOneUpdate{{1.0}, 1.0}, 2.0);
  CHECK(c(0, 0) == doctest::Approx(0.5));

  const Matrix z = krein_resolvent_correction(diag({0.0, 2.0}), RankOneUpdate{{1.0, 1.0}, 0.0}, 5.0);
  CHECK(max_abs(z) == 0.0);
}

TEST_CASE("krein correction matches the direct inverse difference") {
  std::mt19937_64 rng(17);
  std::normal_distribution<double> gauss;
  for (int rep = 0; rep < 30; ++rep) {
    const int n = 8;
    const SymmetricMatrix a = testutil::random_symmetric(n, rng);
    Vector f(n);
    for (auto& v : f) v = gauss(rng);
    const RankOneUpdate u{f, 0.5 + 0.5 * (rep % 3)};
    const SymmetricMatrix b = apply_update(a, u);
    const auto da = symmetric_eig(a);
    const auto db = symmetric_eig(b);

    std::uniform_real_distribution<double> shift(da.eigenvalues.front() - 2.0,
                                                 da.eigenvalues.back() + 2.0);
    double lambda;
    for (;;) {
      lambda = shift(rng);
      double dist = 1e300;
      for (double ev : da.eigenvalues) dist = std::min(dist, std::abs(lambda - ev));
      for (double ev : db.eigenvalues) dist = std::min(dist, std::abs(lambda - ev));
      if (dist >= 0.1) break;
    }

    const Matrix correction = krein_resolvent_correction(da, u, lambda);
    const Matrix ra = testutil::lu_inverse(testutil::shifted<double>(a.entries(), lambda));
    const Matrix rb = testutil::lu_inverse(testutil::shifted<double>(b.entries(), lambda));
    Matrix diff = rb;
    for (size_t i = 0; i < diff.data().size(); ++i) diff.data()[i] -= ra.data()[i];
    CHECK(max_abs_diff(correction, diff) <= 1e-10);
  }
}

TEST_CASE("krein correction at a complex shift") {
  std::mt19937_64 rng(29);
  const SymmetricMatrix a = testutil::random_symmetric(6, rng);
  Vector f(6);
  std::normal_distribution<double> gauss;
  for (auto& v : f) v = gauss(rng);
  const RankOneUpdate u{f, 0.8};
  const std::complex<double> lambda(0.37, 0.42);

  const CMatrix correction = krein_resolvent_correction(a, u, lambda);
  const auto ra = testutil::lu_inverse(testutil::shifted<std::complex<double>>(a.entries(), lambda));
  const auto rb = testutil::lu_inverse(
      testutil::shifted<std::complex<double>>(apply_update(a, u).entries(), lambda));
  double err = 0.0;
  for (size_t i = 0; i < correction.data().size(); ++i)
    err = std::max(err, std::abs(correction.data()[i] - (rb.data()[i] - ra.data()[i])));
  CHECK(err <= 1e-10);
}

TEST_CASE("krein correction error paths") {
  const auto a = diag({0.0});
  const RankOneUpdate u{{1.0}, 1.0};
  CHECK_THROWS_AS(krein_resolvent_correction(a, u, 1.0), NumericalError);  // w(1) = 0
  CHECK_THROWS_AS(krein_resolvent_correction(a, u, 0.0), NumericalError);  // at spectrum
}

TEST_CASE("verification report on the worked instances") {
  const auto repA = verify_against_oracle(diag({1.0, 1.0}), RankOneUpdate{{1.0, 0.0}, 1.0});
  CHECK(repA.passed);
  REQUIRE(repA.clusters.size() == 1);
  CHECK(repA.clusters[0].report.tag == CaseTag::A);
  CHECK(repA.clusters[0].oracle_multiplicity == 1);

  const auto repC =
      verify_against_oracle(diag({0.0, 1.0, 2.0}), RankOneUpdate{{0.0, 1.0, 1.0}, -2.0 / 3.0});
  CHECK(repC.passed);
  for (const auto& c : repC.clusters) CHECK(c.projector_frobenius_error <= 1e-7);
}

TEST_CASE("verification across constructed instances of every case") {
  for (auto tag : {CaseTag::A, CaseTag::B, CaseTag::C}) {
    for (uint64_t seed = 0; seed < 10; ++seed) {
      const auto inst = testutil::make_instance(tag, 500 + seed);
      const auto rep = verify_against_oracle(inst.a, inst.u);
      CHECK(rep.passed);
      bool found = false;
      for (const auto& c : rep.clusters)
        if (std::abs(c.report.lambda0 - inst.lambda0) < 1e-6) {
          found = true;
          CHECK(c.report.tag == inst.expected);
        }
      CHECK(found);
    }
  }
}
