#include "rankone/krein.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <limits>

namespace rankone {

namespace {

double resolve_cluster_tol(const SpectralDecomposition& d, double cluster_tol) {
  return cluster_tol >= 0.0 ? cluster_tol : default_cluster_tol(d.spectral_radius());
}

// Clusters matching lambda0, by overlap with the interval
// [min member - tol, max member + tol].
std::vector<int> matching_clusters(const SpectralDecomposition& d,
                                   const std::vector<EigenCluster>& clusters, double lambda0,
                                   double tol) {
  std::vector<int> hits;
  for (size_t ci = 0; ci < clusters.size(); ++ci) {
    const auto& c = clusters[ci];
    const double lo = d.eigenvalues[c.members.front()] - tol;
    const double hi = d.eigenvalues[c.members.back()] + tol;
    if (lambda0 >= lo && lambda0 <= hi) hits.push_back(static_cast<int>(ci));
  }
  return hits;
}

// Σ q_j q_j^T over a set of columns.
Matrix column_projector(const Matrix& q, std::span<const int> columns) {
  Matrix p(q.rows(), q.rows());
  for (int j : columns)
    for (int i = 0; i < q.rows(); ++i) {
      const double qi = q(i, j);
      if (qi == 0.0) continue;
      for (int k = 0; k < q.rows(); ++k) p(i, k) += qi * q(k, j);
    }
  return p;
}

double overlap_with_projector(const Matrix& q, std::span<const int> columns,
                              std::span<const double> f) {
  double s = 0.0;
  for (int j : columns) {
    double qf = 0.0;
    for (int i = 0; i < q.rows(); ++i) qf += q(i, j) * f[i];
    s += qf * qf;
  }
  return s;
}

// Secular evaluation without the pole-proximity guard; used by the root
// refinement where only the sign and magnitude matter.
double eval_secular_unchecked(const SecularFunction& s, double lambda) {
  double sum = 0.0;
  for (size_t i = 0; i < s.poles.size(); ++i) sum += s.weights[i] / (lambda - s.poles[i]);
  return 1.0 - s.c * sum;
}

}  // namespace

double RankOneUpdate::f_norm_squared() const { return dot(f, f); }

SymmetricMatrix apply_update(const SymmetricMatrix& a, const RankOneUpdate& u) {
  const int n = a.order();
  if (u.f.size() != static_cast<size_t>(n)) throw InputError("apply_update: size mismatch");
  Matrix b = a.entries();
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) b(i, j) += u.c * u.f[i] * u.f[j];
  // Exact symmetry regardless of roundoff in A.
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double v = 0.5 * (b(i, j) + b(j, i));
      b(i, j) = b(j, i) = v;
    }
  return SymmetricMatrix(std::move(b));
}

LaurentData laurent_at(const SpectralDecomposition& d, double lambda0, double cluster_tol) {
  const double tol = resolve_cluster_tol(d, cluster_tol);
  const auto clusters = cluster_spectrum(d, tol);
  const auto hits = matching_clusters(d, clusters, lambda0, tol);
  if (hits.size() > 1)
    throw NumericalError("laurent_at: lambda0 matches two distinct clusters (ambiguous)");

  LaurentData ld;
  ld.lambda0 = lambda0;
  const int n = d.order();
  std::vector<char> is_member(n, 0);
  if (hits.size() == 1) {
    const auto& c = clusters[hits[0]];
    ld.multiplicity = c.multiplicity();
    for (int idx : c.members) is_member[idx] = 1;
    ld.projector = column_projector(d.vectors, c.members);
  } else {
    ld.projector = Matrix(n, n);
  }

  ld.reduced_resolvent = Matrix(n, n);
  for (int j = 0; j < n; ++j) {
    if (is_member[j]) continue;
    const double coeff = 1.0 / (lambda0 - d.eigenvalues[j]);
    for (int i = 0; i < n; ++i) {
      const double qi = d.vectors(i, j);
      if (qi == 0.0) continue;
      for (int k = 0; k < n; ++k) ld.reduced_resolvent(i, k) += coeff * qi * d.vectors(k, j);
    }
  }
  return ld;
}

LaurentData laurent_at(const SymmetricMatrix& a, double lambda0, double cluster_tol) {
  return laurent_at(symmetric_eig(a), lambda0, cluster_tol);
}

std::span<const double> default_epsilon_sequence() {
  static const std::array<double, 5> seq = {1e-2, 1e-3, 1e-4, 1e-5, 1e-6};
  return seq;
}

ProjectionLimitReport projection_limit(const SpectralDecomposition& d, double lambda0,
                                       std::span<const double> epsilons, double cluster_tol) {
  if (epsilons.empty()) epsilons = default_epsilon_sequence();
  for (size_t i = 0; i < epsilons.size(); ++i) {
    if (!(epsilons[i] > 0.0) || epsilons[i] > 1.0)
      throw InputError("projection_limit: epsilons must lie in (0, 1]");
    if (i > 0 && epsilons[i] >= epsilons[i - 1])
      throw InputError("projection_limit: epsilons must be strictly decreasing");
  }
  const LaurentData ld = laurent_at(d, lambda0, cluster_tol);

  ProjectionLimitReport rep;
  rep.epsilons.assign(epsilons.begin(), epsilons.end());
  const int n = d.order();
  for (double eps : epsilons) {
    // i*eps*(lambda0 + i*eps - A)^-1 = Σ_j  i*eps/(lambda0 - λ_j + i*eps) q_j q_j^T
    Matrix re(n, n), im(n, n);
    for (int j = 0; j < n; ++j) {
      const std::complex<double> coeff =
          std::complex<double>(0.0, eps) /
          std::complex<double>(lambda0 - d.eigenvalues[j], eps);
      for (int i = 0; i < n; ++i) {
        const double qi = d.vectors(i, j);
        if (qi == 0.0) continue;
        for (int k = 0; k < n; ++k) {
          re(i, k) += coeff.real() * qi * d.vectors(k, j);
          im(i, k) += coeff.imag() * qi * d.vectors(k, j);
        }
      }
    }
    double dist = 0.0;
    for (int i = 0; i < n; ++i)
      for (int k = 0; k < n; ++k)
        dist = std::max(dist, std::hypot(re(i, k) - ld.projector(i, k), im(i, k)));
    rep.distances.push_back(dist);
    if (eps == epsilons.back()) {
      rep.value = std::move(re);
      rep.max_imag = max_abs(im);
    }
  }
  rep.tail_monotone = true;
  const size_t m = rep.distances.size();
  for (size_t i = m > 3 ? m - 3 : 1; i < m; ++i)
    if (rep.distances[i] > rep.distances[i - 1]) rep.tail_monotone = false;
  return rep;
}

ProjectionLimitReport projection_limit(const SymmetricMatrix& a, double lambda0,
                                       std::span<const double> epsilons, double cluster_tol) {
  return projection_limit(symmetric_eig(a), lambda0, epsilons, cluster_tol);
}

double SecularFunction::weight_sum() const {
  double s = 0.0;
  for (double w : weights) s += w;
  return s;
}

SecularFunction build_secular(const SpectralDecomposition& d, const RankOneUpdate& u,
                              double w_floor, double cluster_tol) {
  if (u.f.size() != static_cast<size_t>(d.order())) throw InputError("build_secular: size mismatch");
  for (double v : u.f)
    if (!std::isfinite(v)) throw InputError("build_secular: non-finite f");
  SecularFunction s;
  s.c = u.c;
  s.w_floor = w_floor >= 0.0 ? w_floor : 1e-12 * u.f_norm_squared();
  const double tol = resolve_cluster_tol(d, cluster_tol);
  for (const auto& c : cluster_spectrum(d, tol)) {
    const double w = overlap_with_projector(d.vectors, c.members, u.f);
    if (w > s.w_floor) {
      s.poles.push_back(c.lambda0);
      s.weights.push_back(w);
    }
  }
  return s;
}

SecularFunction build_secular(const SymmetricMatrix& a, const RankOneUpdate& u, double w_floor,
                              double cluster_tol) {
  return build_secular(symmetric_eig(a), u, w_floor, cluster_tol);
}

double eval_secular(const SecularFunction& s, double lambda) {
  for (double p : s.poles)
    if (std::abs(lambda - p) <= 1e-14 * (1.0 + std::abs(p)))
      throw NumericalError("eval_secular: lambda at a pole");
  return eval_secular_unchecked(s, lambda);
}

double eval_secular_derivative(const SecularFunction& s, double lambda) {
  double sum = 0.0;
  for (size_t i = 0; i < s.poles.size(); ++i) {
    const double dl = lambda - s.poles[i];
    sum += s.weights[i] / (dl * dl);
  }
  return s.c * sum;
}

std::complex<double> eval_secular(const SecularFunction& s, std::complex<double> lambda) {
  std::complex<double> sum = 0.0;
  for (size_t i = 0; i < s.poles.size(); ++i) sum += s.weights[i] / (lambda - s.poles[i]);
  return 1.0 - s.c * sum;
}

char to_char(CaseTag tag) {
  switch (tag) {
    case CaseTag::A: return 'A';
    case CaseTag::B: return 'B';
    default: return 'C';
  }
}

Matrix predicted_projector(const LaurentData& ld, const RankOneUpdate& u, CaseTag tag) {
  const int n = ld.projector.rows();
  if (u.f.size() != static_cast<size_t>(n)) throw InputError("predicted_projector: size mismatch");
  if (tag == CaseTag::B) return ld.projector;
  if (tag == CaseTag::A) {
    const Vector pf = matvec(ld.projector, u.f);
    const double denom = dot(u.f, pf);  // (f|Pf)
    if (!(denom > 0.0)) throw NumericalError("predicted_projector: vanishing (f|Pf) in case A");
    Matrix out = ld.projector;
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) out(i, j) -= pf[i] * pf[j] / denom;
    return out;
  }
  const Vector rf = matvec(ld.reduced_resolvent, u.f);
  const double denom = dot(rf, rf);  // (f|R^2 f)
  // Cannot vanish when 1 + <l|Rf> = 0: Cauchy-Schwarz gives
  // (f|R^2 f) >= 1/(c^2 |f|^2).
  if (!(denom > std::numeric_limits<double>::min()))
    throw NumericalError("predicted_projector: Cauchy-Schwarz violation in case C");
  Matrix out = ld.projector;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) out(i, j) += rf[i] * rf[j] / denom;
  return out;
}

CaseReport classify_case(const SpectralDecomposition& d, const RankOneUpdate& u, double lambda0,
                         const ClassifyTolerances& tol) {
  if (u.f.size() != static_cast<size_t>(d.order())) throw InputError("classify_case: size mismatch");
  const LaurentData ld = laurent_at(d, lambda0, tol.cluster_tol);
  if (ld.multiplicity == 0)
    throw InputError("classify_case: lambda0 is not an eigenvalue cluster of A");

  const double fsq = u.f_norm_squared();
  const double overlap_tol = tol.overlap_tol >= 0.0 ? tol.overlap_tol : 1e-8 * fsq;

  CaseReport r;
  r.lambda0 = ld.lambda0;
  r.multiplicity_before = ld.multiplicity;
  const Vector pf = matvec(ld.projector, u.f);
  r.overlap = dot(u.f, pf);

  if (std::abs(u.c) * r.overlap > overlap_tol) {
    r.tag = CaseTag::A;
    r.multiplicity_after = ld.multiplicity - 1;
  } else if (u.c == 0.0 || fsq == 0.0) {
    // B = A exactly.
    r.tag = CaseTag::B;
    r.regular_value = 1.0;
    r.multiplicity_after = ld.multiplicity;
  } else {
    const Vector rf = matvec(ld.reduced_resolvent, u.f);
    const double regular = 1.0 - u.c * dot(u.f, rf);  // lim w(lambda), lambda -> lambda0
    r.regular_value = regular;
    if (std::abs(regular) > tol.regular_tol) {
      r.tag = CaseTag::B;
      r.multiplicity_after = ld.multiplicity;
    } else {
      r.tag = CaseTag::C;
      r.multiplicity_after = ld.multiplicity + 1;
    }
  }
  r.predicted_projector = predicted_projector(ld, u, r.tag);
  return r;
}

CaseReport classify_case(const SymmetricMatrix& a, const RankOneUpdate& u, double lambda0,
                         const ClassifyTolerances& tol) {
  return classify_case(symmetric_eig(a), u, lambda0, tol);
}

namespace {

struct Bracket {
  double lo, hi;
  // Signs of w at the ends; pole endpoints get the analytic limit sign and
  // are never evaluated.
  double sign_lo, sign_hi;
};

double refine_root(const SecularFunction& s, Bracket b, double root_tol) {
  double x = 0.5 * (b.lo + b.hi);
  double fx = eval_secular_unchecked(s, x);
  // Bisect to a safe Newton basin.
  while (b.hi - b.lo > 1e-3 * (1.0 + std::abs(x))) {
    if (fx == 0.0) return x;
    if (fx * b.sign_lo > 0.0)
      b.lo = x;
    else
      b.hi = x;
    x = 0.5 * (b.lo + b.hi);
    fx = eval_secular_unchecked(s, x);
  }
  // Newton polish with the closed-form derivative, falling back to bisection
  // whenever the step leaves the bracket.
  for (int it = 0; it < 200; ++it) {
    if (std::abs(fx) <= root_tol && b.hi - b.lo <= root_tol * (1.0 + std::abs(x))) break;
    if (fx == 0.0) break;
    if (fx * b.sign_lo > 0.0)
      b.lo = x;
    else
      b.hi = x;
    const double dfx = eval_secular_derivative(s, x);
    double xn = x - fx / dfx;
    if (!std::isfinite(xn) || xn <= b.lo || xn >= b.hi) xn = 0.5 * (b.lo + b.hi);
    if (xn == x) break;
    x = xn;
    fx = eval_secular_unchecked(s, x);
  }
  return x;
}

}  // namespace

std::vector<double> find_new_eigenvalues(const SecularFunction& s,
                                         std::span<const double> exclusion, double root_tol,
                                         double exclusion_tol) {
  std::vector<double> roots;
  if (s.c == 0.0 || s.poles.empty()) return roots;
  if (exclusion_tol < 0.0) exclusion_tol = std::max(10.0 * root_tol, 1e-9);

  const double csign = s.c > 0.0 ? 1.0 : -1.0;
  std::vector<Bracket> brackets;
  // Between consecutive poles w is strictly monotone from -inf*sign(c) to
  // +inf*sign(c): exactly one root per gap.
  for (size_t i = 0; i + 1 < s.poles.size(); ++i)
    brackets.push_back({s.poles[i], s.poles[i + 1], -csign, csign});
  // One root beyond the extreme pole on the side c pushes towards; the shift
  // is bounded by |c| * Σ w_i.
  const double reach = std::abs(s.c) * s.weight_sum();
  if (s.c > 0.0) {
    double hi = s.poles.back() + reach * (1.0 + 1e-12) + 1e-300;
    while (eval_secular_unchecked(s, hi) <= 0.0) hi = s.poles.back() + 2.0 * (hi - s.poles.back());
    brackets.push_back({s.poles.back(), hi, -1.0, 1.0});
  } else {
    double lo = s.poles.front() - reach * (1.0 + 1e-12) - 1e-300;
    while (eval_secular_unchecked(s, lo) <= 0.0) lo = s.poles.front() - 2.0 * (s.poles.front() - lo);
    brackets.push_back({lo, s.poles.front(), 1.0, -1.0});
  }

  for (const auto& b : brackets) {
    const double r = refine_root(s, b, root_tol);
    bool excluded = false;
    for (double e : exclusion)
      if (std::abs(r - e) <= exclusion_tol * (1.0 + std::abs(e))) {
        excluded = true;
        break;
      }
    if (!excluded) roots.push_back(r);
  }
  std::sort(roots.begin(), roots.end());
  return roots;
}

Vector eigenvector_at_root(const SpectralDecomposition& d, const RankOneUpdate& u,
                           double lambda_star, double cluster_tol) {
  Vector v = resolvent_apply(d, lambda_star, u.f, cluster_tol);
  const double nrm = norm2(v);
  if (!(nrm > 0.0)) throw NumericalError("eigenvector_at_root: (lambda - A)^-1 f vanished");
  for (double& x : v) x /= nrm;
  return v;
}

Vector eigenvector_at_root(const SymmetricMatrix& a, const RankOneUpdate& u, double lambda_star,
                           double cluster_tol) {
  return eigenvector_at_root(symmetric_eig(a), u, lambda_star, cluster_tol);
}

Matrix krein_resolvent_correction(const SpectralDecomposition& d, const RankOneUpdate& u,
                                  double lambda, double cluster_tol) {
  const Vector g = resolvent_apply(d, lambda, u.f, cluster_tol);
  const double w = 1.0 - u.c * dot(u.f, g);
  if (w == 0.0) throw NumericalError("krein_resolvent_correction: lambda is an eigenvalue of B");
  Matrix c = outer(g, g);
  const double scale = u.c / w;
  for (double& v : c.data()) v *= scale;
  return c;
}

CMatrix krein_resolvent_correction(const SpectralDecomposition& d, const RankOneUpdate& u,
                                   std::complex<double> lambda, double cluster_tol) {
  const CVector g = resolvent_apply(d, lambda, u.f, cluster_tol);
  std::complex<double> fg = 0.0;
  for (size_t i = 0; i < g.size(); ++i) fg += u.f[i] * g[i];
  const std::complex<double> w = 1.0 - u.c * fg;
  if (w == 0.0) throw NumericalError("krein_resolvent_correction: lambda is an eigenvalue of B");
  const int n = d.order();
  CMatrix c(n, n);
  // A is real symmetric, so (lambda - A)^-1 is complex symmetric: the row
  // factor is g^T, not g^*.
  const std::complex<double> scale = u.c / w;
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) c(i, j) = scale * g[i] * g[j];
  return c;
}

Matrix krein_resolvent_correction(const SymmetricMatrix& a, const RankOneUpdate& u, double lambda,
                                  double cluster_tol) {
  return krein_resolvent_correction(symmetric_eig(a), u, lambda, cluster_tol);
}

CMatrix krein_resolvent_correction(const SymmetricMatrix& a, const RankOneUpdate& u,
                                   std::complex<double> lambda, double cluster_tol) {
  return krein_resolvent_correction(symmetric_eig(a), u, lambda, cluster_tol);
}

VerificationReport verify_against_oracle(const SymmetricMatrix& a, const RankOneUpdate& u,
                                         double cluster_tol, const ClassifyTolerances& tol,
                                         double root_tol, double projector_tol) {
  const SpectralDecomposition da = symmetric_eig(a);
  const double ctol = resolve_cluster_tol(da, cluster_tol);
  ClassifyTolerances ct = tol;
  if (ct.cluster_tol < 0.0) ct.cluster_tol = ctol;

  const SymmetricMatrix b = apply_update(a, u);
  const SpectralDecomposition db = symmetric_eig(b);

  VerificationReport rep;
  rep.passed = true;

  const auto clusters = cluster_spectrum(da, ctol);
  std::vector<double> reps;
  reps.reserve(clusters.size());
  for (const auto& c : clusters) reps.push_back(c.lambda0);

  for (const auto& c : clusters) {
    ClusterCheck check;
    check.report = classify_case(da, u, c.lambda0, ct);

    std::vector<int> bmembers;
    for (int j = 0; j < db.order(); ++j)
      if (std::abs(db.eigenvalues[j] - c.lambda0) <= ctol) bmembers.push_back(j);
    check.oracle_multiplicity = static_cast<int>(bmembers.size());

    const Matrix oracle_projector = column_projector(db.vectors, bmembers);
    check.projector_frobenius_error =
        frobenius_diff(check.report.predicted_projector, oracle_projector);
    check.passed = check.oracle_multiplicity == check.report.multiplicity_after &&
                   check.projector_frobenius_error <= projector_tol;
    rep.passed = rep.passed && check.passed;
    rep.clusters.push_back(std::move(check));
  }

  const SecularFunction s = build_secular(da, u, -1.0, ctol);
  for (double r : find_new_eigenvalues(s, reps, root_tol)) {
    RootCheck check;
    check.root = r;
    check.w_at_root = eval_secular_unchecked(s, r);
    const double window = root_tol * (1.0 + std::abs(r));
    for (double ev : db.eigenvalues)
      if (std::abs(ev - r) <= window) ++check.oracle_matches;
    check.passed = check.oracle_matches == 1;
    rep.passed = rep.passed && check.passed;
    rep.roots.push_back(check);
  }
  return rep;
}

}  // namespace rankone
