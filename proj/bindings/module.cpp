// Python bindings: numpy-facing wrappers over the core operations.

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <complex>
#include <optional>

#include "rankone/dirichlet.hpp"
#include "rankone/eigcore.hpp"
#include "rankone/krein.hpp"

namespace py = pybind11;
using namespace rankone;

namespace {

SymmetricMatrix to_symmetric(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 2 || a.shape(0) != a.shape(1))
    throw InputError("expected a square 2-D array");
  const int n = static_cast<int>(a.shape(0));
  return SymmetricMatrix::from_rows(n, std::span<const double>(a.data(), static_cast<size_t>(n) * n));
}

py::array_t<double> to_numpy(const Matrix& m) {
  py::array_t<double> out({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

py::array_t<std::complex<double>> to_numpy(const CMatrix& m) {
  py::array_t<std::complex<double>> out({m.rows(), m.cols()});
  std::copy(m.data().begin(), m.data().end(), out.mutable_data());
  return out;
}

py::array_t<double> to_numpy(const Vector& v) {
  return py::array_t<double>(static_cast<py::ssize_t>(v.size()), v.data());
}

Vector to_vector(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  if (a.ndim() != 1) throw InputError("expected a 1-D array");
  return Vector(a.data(), a.data() + a.shape(0));
}

py::dict case_report_dict(const CaseReport& r) {
  py::dict d;
  d["case"] = std::string(1, to_char(r.tag));
  d["lambda0"] = r.lambda0;
  d["overlap"] = r.overlap;
  d["regular_value"] = r.regular_value ? py::object(py::float_(*r.regular_value)) : py::none();
  d["multiplicity_before"] = r.multiplicity_before;
  d["multiplicity_after"] = r.multiplicity_after;
  d["predicted_projector"] = to_numpy(r.predicted_projector);
  return d;
}

using NpArray = py::array_t<double, py::array::c_style | py::array::forcecast>;

}  // namespace

PYBIND11_MODULE(_rankone, m) {
  m.doc() = "Rank-one perturbation analysis of dense symmetric operators";

  py::register_exception<InputError>(m, "InputError", PyExc_ValueError);
  py::register_exception<NumericalError>(m, "NumericalError", PyExc_ArithmeticError);

  m.def(
      "symmetric_eig",
      [](const NpArray& a) {
        const auto d = symmetric_eig(to_symmetric(a));
        return py::make_tuple(to_numpy(d.eigenvalues), to_numpy(d.vectors));
      },
      py::arg("a"),
      "Eigendecomposition of a dense symmetric matrix; returns (eigenvalues, vectors) with "
      "eigenvalues ascending and eigenvectors in columns.");

  m.def(
      "cluster_spectrum",
      [](const NpArray& eigenvalues, double cluster_tol) {
        SpectralDecomposition d;
        d.eigenvalues = to_vector(eigenvalues);
        d.vectors = Matrix(d.order(), d.order());
        py::list out;
        for (const auto& c : cluster_spectrum(d, cluster_tol))
          out.append(py::make_tuple(c.lambda0, c.members, c.multiplicity()));
        return out;
      },
      py::arg("eigenvalues"), py::arg("cluster_tol"),
      "Greedy gap-based clustering of a sorted spectrum; returns (lambda0, members, "
      "multiplicity) triples.");

  m.def(
      "resolvent_apply",
      [](const NpArray& a, std::complex<double> lam, const NpArray& v,
         double cluster_tol) -> py::object {
        const auto d = symmetric_eig(to_symmetric(a));
        const Vector rhs = to_vector(v);
        if (lam.imag() == 0.0)
          return py::object(to_numpy(resolvent_apply(d, lam.real(), rhs, cluster_tol)));
        const CVector u = resolvent_apply(d, lam, rhs, cluster_tol);
        py::array_t<std::complex<double>> out(static_cast<py::ssize_t>(u.size()), u.data());
        return py::object(std::move(out));
      },
      py::arg("a"), py::arg("lam"), py::arg("v"), py::arg("cluster_tol") = -1.0,
      "Solve (lam*I - A) u = v; complex lam yields a complex result.");

  m.def(
      "laurent_at",
      [](const NpArray& a, double lambda0, double cluster_tol) {
        const auto ld = laurent_at(to_symmetric(a), lambda0, cluster_tol);
        return py::make_tuple(to_numpy(ld.projector), to_numpy(ld.reduced_resolvent),
                              ld.multiplicity);
      },
      py::arg("a"), py::arg("lambda0"), py::arg("cluster_tol") = -1.0,
      "Spectral projector, reduced resolvent and multiplicity at an isolated eigenvalue.");

  m.def(
      "projection_limit",
      [](const NpArray& a, double lambda0, std::optional<std::vector<double>> epsilons,
         double cluster_tol) {
        const auto rep = projection_limit(to_symmetric(a), lambda0,
                                          epsilons ? std::span<const double>(*epsilons)
                                                   : std::span<const double>(),
                                          cluster_tol);
        py::dict d;
        d["value"] = to_numpy(rep.value);
        d["epsilons"] = rep.epsilons;
        d["distances"] = rep.distances;
        d["max_imag"] = rep.max_imag;
        d["tail_monotone"] = rep.tail_monotone;
        return d;
      },
      py::arg("a"), py::arg("lambda0"), py::arg("epsilons") = py::none(),
      py::arg("cluster_tol") = -1.0,
      "The projector as the strong limit of i*eps*(lambda0 + i*eps - A)^-1.");

  py::class_<SecularFunction>(m, "SecularFunction")
      .def_property_readonly("poles", [](const SecularFunction& s) { return to_numpy(s.poles); })
      .def_property_readonly("weights",
                             [](const SecularFunction& s) { return to_numpy(s.weights); })
      .def_readonly("c", &SecularFunction::c)
      .def_readonly("w_floor", &SecularFunction::w_floor)
      .def("__call__", [](const SecularFunction& s, double lam) { return eval_secular(s, lam); })
      .def("derivative",
           [](const SecularFunction& s, double lam) { return eval_secular_derivative(s, lam); });

  m.def(
      "build_secular",
      [](const NpArray& a, const NpArray& f, double c, double w_floor) {
        return build_secular(to_symmetric(a), RankOneUpdate{to_vector(f), c}, w_floor);
      },
      py::arg("a"), py::arg("f"), py::arg("c"), py::arg("w_floor") = -1.0,
      "Pole/weight form of the Krein denominator w(lambda) = 1 - c (f|(lambda-A)^-1 f).");

  m.def(
      "classify_case",
      [](const NpArray& a, const NpArray& f, double c, double lambda0, double cluster_tol,
         double overlap_tol, double regular_tol) {
        ClassifyTolerances tol{cluster_tol, overlap_tol, regular_tol};
        return case_report_dict(
            classify_case(to_symmetric(a), RankOneUpdate{to_vector(f), c}, lambda0, tol));
      },
      py::arg("a"), py::arg("f"), py::arg("c"), py::arg("lambda0"), py::arg("cluster_tol") = -1.0,
      py::arg("overlap_tol") = -1.0, py::arg("regular_tol") = 1e-6,
      "Case (a)/(b)/(c) verdict for the eigenvalue lambda0 of A under B = A + c f f^T.");

  m.def(
      "find_new_eigenvalues",
      [](const SecularFunction& s, const std::vector<double>& exclusion, double root_tol,
         double exclusion_tol) {
        return find_new_eigenvalues(s, exclusion, root_tol, exclusion_tol);
      },
      py::arg("secular"), py::arg("exclusion") = std::vector<double>(),
      py::arg("root_tol") = 1e-10, py::arg("exclusion_tol") = -1.0,
      "Roots of w(lambda) = 0 outside the excluded spectrum clusters.");

  m.def(
      "eigenvector_at_root",
      [](const NpArray& a, const NpArray& f, double c, double lambda_star) {
        return to_numpy(
            eigenvector_at_root(to_symmetric(a), RankOneUpdate{to_vector(f), c}, lambda_star));
      },
      py::arg("a"), py::arg("f"), py::arg("c"), py::arg("lambda_star"),
      "Normalized eigenvector of B at a secular root.");

  m.def(
      "krein_resolvent_correction",
      [](const NpArray& a, const NpArray& f, double c, std::complex<double> lam) -> py::object {
        const RankOneUpdate u{to_vector(f), c};
        if (lam.imag() == 0.0)
          return py::object(to_numpy(krein_resolvent_correction(to_symmetric(a), u, lam.real())));
        return py::object(to_numpy(krein_resolvent_correction(to_symmetric(a), u, lam)));
      },
      py::arg("a"), py::arg("f"), py::arg("c"), py::arg("lam"),
      "Sherman-Morrison correction C with (lam-B)^-1 = (lam-A)^-1 + C.");

  m.def(
      "verify_against_oracle",
      [](const NpArray& a, const NpArray& f, double c, double cluster_tol) {
        const auto rep =
            verify_against_oracle(to_symmetric(a), RankOneUpdate{to_vector(f), c}, cluster_tol);
        py::list clusters;
        for (const auto& ch : rep.clusters) {
          py::dict d = case_report_dict(ch.report);
          d["oracle_multiplicity"] = ch.oracle_multiplicity;
          d["projector_frobenius_error"] = ch.projector_frobenius_error;
          d["passed"] = ch.passed;
          clusters.append(d);
        }
        py::list roots;
        for (const auto& rc : rep.roots) {
          py::dict d;
          d["root"] = rc.root;
          d["w_at_root"] = rc.w_at_root;
          d["oracle_matches"] = rc.oracle_matches;
          d["passed"] = rc.passed;
          roots.append(d);
        }
        py::dict out;
        out["clusters"] = clusters;
        out["roots"] = roots;
        out["passed"] = rep.passed;
        return out;
      },
      py::arg("a"), py::arg("f"), py::arg("c"), py::arg("cluster_tol") = -1.0,
      "Compare every predicted multiplicity, projector and root against a direct "
      "eigendecomposition of B.");

  auto dd = m.def_submodule("dirichlet", "The inverse Dirichlet Laplacian worked example");
  dd.def("green_kernel", &dirichlet::green_kernel, py::arg("x"), py::arg("xi"));
  dd.def(
      "resolvent_kernel",
      [](double x, double xi, double k) {
        return dirichlet::resolvent_kernel(x, xi, dirichlet::WavenumberPoint::from_k(k));
      },
      py::arg("x"), py::arg("xi"), py::arg("k"));
  dd.def(
      "f_z_profile",
      [](double x, double k) {
        return dirichlet::f_z_profile(x, dirichlet::WavenumberPoint::from_k(k));
      },
      py::arg("x"), py::arg("k"));
  dd.def(
      "analytic_secular",
      [](double k, double alpha) {
        return dirichlet::analytic_secular(dirichlet::WavenumberPoint::from_k(k), alpha);
      },
      py::arg("k"), py::arg("alpha"));
  dd.def("overlap_analytic", &dirichlet::overlap_analytic, py::arg("k0"));
  dd.def("eigenfunction_b", &dirichlet::eigenfunction_b, py::arg("k"), py::arg("x"));
  dd.def("resolvent_of_inverse", &dirichlet::resolvent_of_inverse, py::arg("lam"), py::arg("t"));
  dd.def(
      "gauss_legendre_01",
      [](int n) {
        const auto q = dirichlet::gauss_legendre_01(n);
        return py::make_tuple(to_numpy(q.nodes), to_numpy(q.weights));
      },
      py::arg("n"));
  dd.def(
      "nystrom_build",
      [](double alpha, int n) {
        const auto model = dirichlet::DirichletModel::create(alpha, n);
        const auto sys = dirichlet::nystrom_build(model);
        return py::make_tuple(to_numpy(sys.a.entries()), to_numpy(sys.f), to_numpy(model.nodes),
                              to_numpy(model.weights));
      },
      py::arg("alpha"), py::arg("n"),
      "Returns (A, f, nodes, weights) for the discretized example.");

#ifdef VERSION_INFO
  m.attr("__version__") = VERSION_INFO;
#else
  m.attr("__version__") = "dev";
#endif
}
