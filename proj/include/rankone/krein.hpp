#pragma once

#include <complex>
#include <optional>
#include <span>
#include <vector>

#include "rankone/eigcore.hpp"

namespace rankone {

// Rank-one perturbation B = A + c * f f^T.
struct RankOneUpdate {
  Vector f;
  double c = 0.0;

  double f_norm_squared() const;
};

SymmetricMatrix apply_update(const SymmetricMatrix& a, const RankOneUpdate& u);

// Principal part of the resolvent of A at an isolated eigenvalue lambda0:
//   (lambda - A)^-1 = P/(lambda - lambda0) + R - (lambda - lambda0) R^2 + ...
// P projects onto the lambda0 eigenspace (P = 0 if lambda0 is off the
// spectrum); R is the reduced resolvent, zero on the eigenspace.
struct LaurentData {
  double lambda0 = 0.0;
  Matrix projector;
  Matrix reduced_resolvent;
  int multiplicity = 0;
};

LaurentData laurent_at(const SpectralDecomposition& d, double lambda0, double cluster_tol = -1.0);
LaurentData laurent_at(const SymmetricMatrix& a, double lambda0, double cluster_tol = -1.0);

// The spectral projector as the strong limit of i*eps*(lambda0 + i*eps - A)^-1.
struct ProjectionLimitReport {
  Matrix value;                   // real part at the smallest epsilon
  std::vector<double> epsilons;
  std::vector<double> distances;  // max-norm distance to the Laurent projector
  double max_imag = 0.0;          // largest |Im| entry at the smallest epsilon
  bool tail_monotone = false;     // distances non-increasing over the last three steps
};

std::span<const double> default_epsilon_sequence();

ProjectionLimitReport projection_limit(const SpectralDecomposition& d, double lambda0,
                                       std::span<const double> epsilons = {},
                                       double cluster_tol = -1.0);
ProjectionLimitReport projection_limit(const SymmetricMatrix& a, double lambda0,
                                       std::span<const double> epsilons = {},
                                       double cluster_tol = -1.0);

// Krein denominator in pole/weight form:
//   w(lambda) = 1 - c * sum_i weights[i] / (lambda - poles[i]),
// poles are cluster representatives, weights the squared overlaps (f|P_i f);
// weights <= w_floor are dropped.
struct SecularFunction {
  Vector poles;
  Vector weights;
  double c = 0.0;
  double w_floor = 0.0;

  double weight_sum() const;
};

SecularFunction build_secular(const SpectralDecomposition& d, const RankOneUpdate& u,
                              double w_floor = -1.0, double cluster_tol = -1.0);
SecularFunction build_secular(const SymmetricMatrix& a, const RankOneUpdate& u,
                              double w_floor = -1.0, double cluster_tol = -1.0);

double eval_secular(const SecularFunction& s, double lambda);
double eval_secular_derivative(const SecularFunction& s, double lambda);
std::complex<double> eval_secular(const SecularFunction& s, std::complex<double> lambda);

enum class CaseTag { A, B, C };

char to_char(CaseTag tag);

struct ClassifyTolerances {
  double cluster_tol = -1.0;  // < 0: 1e-9 * (1 + spectral radius)
  double overlap_tol = -1.0;  // < 0: 1e-8 * |f|^2
  double regular_tol = 1e-6;  // threshold on |D|, D = lim w(lambda) at lambda0
};

// Verdict on how the eigenvalue lambda0 of A responds to the update:
//   case A: c*(f|Pf) != 0            -> multiplicity drops by one
//   case B: (f|Pf) = 0, D != 0       -> multiplicity unchanged
//   case C: (f|Pf) = 0, D = 0, c !=0 -> multiplicity grows by one
struct CaseReport {
  CaseTag tag = CaseTag::B;
  double lambda0 = 0.0;
  double overlap = 0.0;                 // (f|Pf)
  std::optional<double> regular_value;  // D = 1 - c*(f|Rf); only when overlap ~ 0
  int multiplicity_before = 0;
  int multiplicity_after = 0;
  Matrix predicted_projector;
};

CaseReport classify_case(const SpectralDecomposition& d, const RankOneUpdate& u, double lambda0,
                         const ClassifyTolerances& tol = {});
CaseReport classify_case(const SymmetricMatrix& a, const RankOneUpdate& u, double lambda0,
                         const ClassifyTolerances& tol = {});

// Closed-form projector of B at lambda0 from the Laurent data of A:
//   case A: P - P f (f|P / (f|Pf)
//   case B: P
//   case C: P + R f (f|R / (f|R^2 f)
Matrix predicted_projector(const LaurentData& ld, const RankOneUpdate& u, CaseTag tag);

// All roots of w(lambda) = 0 bracketed between consecutive poles or beyond the
// extreme poles, refined by bisection plus Newton polish. Roots within
// exclusion_tol * (1 + |e|) of an exclusion point e (the clusters of the
// unperturbed spectrum) are dropped; exclusion_tol < 0 selects
// max(10 * root_tol, 1e-9).
std::vector<double> find_new_eigenvalues(const SecularFunction& s,
                                         std::span<const double> exclusion,
                                         double root_tol = 1e-10, double exclusion_tol = -1.0);

// Eigenvector of B at a secular root: (lambda* I - A)^-1 f, normalized.
Vector eigenvector_at_root(const SpectralDecomposition& d, const RankOneUpdate& u,
                           double lambda_star, double cluster_tol = -1.0);
Vector eigenvector_at_root(const SymmetricMatrix& a, const RankOneUpdate& u, double lambda_star,
                           double cluster_tol = -1.0);

// Sherman-Morrison correction C with (lambda I - B)^-1 = (lambda I - A)^-1 + C:
//   C = c * (lambda - A)^-1 f (f| (lambda - A)^-1 / w(lambda).
Matrix krein_resolvent_correction(const SpectralDecomposition& d, const RankOneUpdate& u,
                                  double lambda, double cluster_tol = -1.0);
CMatrix krein_resolvent_correction(const SpectralDecomposition& d, const RankOneUpdate& u,
                                   std::complex<double> lambda, double cluster_tol = -1.0);
Matrix krein_resolvent_correction(const SymmetricMatrix& a, const RankOneUpdate& u, double lambda,
                                  double cluster_tol = -1.0);
CMatrix krein_resolvent_correction(const SymmetricMatrix& a, const RankOneUpdate& u,
                                   std::complex<double> lambda, double cluster_tol = -1.0);

// Predicted-versus-brute-force comparison for one cluster of A.
struct ClusterCheck {
  CaseReport report;
  int oracle_multiplicity = 0;
  double projector_frobenius_error = 0.0;
  bool passed = false;
};

// A predicted new eigenvalue checked against the spectrum of B.
struct RootCheck {
  double root = 0.0;
  double w_at_root = 0.0;
  int oracle_matches = 0;  // eigenvalues of B within root_tol * (1 + |root|)
  bool passed = false;     // exactly one match
};

struct VerificationReport {
  std::vector<ClusterCheck> clusters;
  std::vector<RootCheck> roots;
  bool passed = false;
};

// Classifies every cluster of A, predicts the new eigenvalues, and compares
// both against a direct eigendecomposition of B. Failures are reported, not
// thrown.
VerificationReport verify_against_oracle(const SymmetricMatrix& a, const RankOneUpdate& u,
                                         double cluster_tol = -1.0,
                                         const ClassifyTolerances& tol = {},
                                         double root_tol = 1e-10,
                                         double projector_tol = 1e-7);

}  // namespace rankone
