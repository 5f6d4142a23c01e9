#include <pybind11/complex.h>
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "dicke/bernstein.hpp"
#include "dicke/bipartite.hpp"
#include "dicke/dicke_core.hpp"
#include "dicke/hausdorff.hpp"
#include "dicke/leading_order.hpp"
#include "dicke/reconstruct.hpp"

namespace py = pybind11;
using namespace pybind11::literals;

namespace {

std::vector<double> values(const dicke::PopulationVector& p) {
  return {p.values().begin(), p.values().end()};
}

dicke::PopulationVector population(std::vector<double> p) {
  return dicke::PopulationVector(std::move(p));
}

std::vector<std::pair<double, double>> atoms(const dicke::Decomposition& d) {
  std::vector<std::pair<double, double>> out;
  for (const dicke::Atom& a : d.atoms()) out.emplace_back(a.weight, a.eps);
  return out;
}

dicke::Decomposition decomposition(int n, const std::vector<std::pair<double, double>>& a) {
  std::vector<dicke::Atom> v;
  for (const auto& [w, e] : a) v.push_back({w, e});
  return dicke::Decomposition(n, std::move(v));
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Dicke superradiance separability via truncated Hausdorff moments";

  py::register_exception<dicke::Error>(m, "DickeError", PyExc_ValueError);
  py::register_exception<dicke::InfeasibleError>(m, "InfeasibleError",
                                                 m.attr("DickeError").ptr());

  m.def("rate_coefficients", &dicke::rate_coefficients, "n"_a);
  m.def("rate_matrix", [](int n) { return dicke::rate_matrix(n).entries; }, "n"_a);
  m.def("evolve",
        [](std::vector<double> p0, double t) { return values(dicke::evolve(population(std::move(p0)), t)); },
        "p0"_a, "t"_a);
  m.def("evolve_trajectory",
        [](std::vector<double> p0, std::vector<double> times) {
          const dicke::Trajectory tr = dicke::evolve_trajectory(population(std::move(p0)), times);
          std::vector<std::vector<double>> out;
          for (const auto& s : tr.states) out.push_back(values(s));
          return out;
        },
        "p0"_a, "times"_a);
  m.def("intensity", [](std::vector<double> p) { return dicke::intensity(population(std::move(p))); },
        "p"_a);
  m.def("intensity_from_decomposition",
        [](int n, const std::vector<std::pair<double, double>>& a) {
          return dicke::intensity_from_decomposition(n, decomposition(n, a));
        },
        "n"_a, "atoms"_a);

  m.def("transform_matrix",
        [](int n) { return dicke::transform_matrix(n).B.cast<double>().eval(); }, "n"_a);
  m.def("populations_to_moments",
        [](std::vector<double> p) {
          return dicke::populations_to_moments(population(std::move(p))).to_doubles();
        },
        "p"_a);
  m.def("moments_to_populations",
        [](const std::vector<double>& mom) {
          return values(dicke::moments_to_populations(dicke::MomentVector::from_doubles(mom)));
        },
        "m"_a);
  m.def("moment_generator", [](int n) { return dicke::moment_generator(n).Mbar; }, "n"_a);
  m.def("coherent_populations",
        [](int n, double eps) { return values(dicke::coherent_populations(n, eps)); }, "n"_a,
        "eps"_a);
  m.def("phase_averaged_product_density", &dicke::phase_averaged_product_density, "n"_a,
        "eps"_a, "phases"_a = 0);

  py::class_<dicke::SeparabilityVerdict>(m, "SeparabilityVerdict")
      .def_readonly("valid", &dicke::SeparabilityVerdict::valid)
      .def_readonly("boundary", &dicke::SeparabilityVerdict::boundary)
      .def_readonly("min_eig_H", &dicke::SeparabilityVerdict::min_eig_H)
      .def_readonly("min_eig_Hbar", &dicke::SeparabilityVerdict::min_eig_Hbar)
      .def_readonly("min_eig_Hx", &dicke::SeparabilityVerdict::min_eig_Hx)
      .def_readonly("minor_test_valid", &dicke::SeparabilityVerdict::minor_test_valid)
      .def_readonly("scale", &dicke::SeparabilityVerdict::scale)
      .def("__bool__", [](const dicke::SeparabilityVerdict& v) { return v.valid; });
  m.def("validate_moments",
        [](const std::vector<double>& mom, double tol) {
          return dicke::validate_moments(dicke::MomentVector::from_doubles(mom), tol);
        },
        "m"_a, "tol_psd"_a = dicke::kDefaultTolPsd);
  m.def("hankel_negativity",
        [](std::vector<double> p, double tol) {
          return dicke::hankel_negativity(population(std::move(p)), tol);
        },
        "p"_a, "tol_psd"_a = dicke::kDefaultTolPsd);

  m.def("reconstruct_decomposition",
        [](const std::vector<double>& mom, double rank_tol) {
          dicke::ReconstructOptions opt;
          opt.rank_tol = rank_tol;
          return atoms(dicke::reconstruct_decomposition(dicke::MomentVector::from_doubles(mom), opt));
        },
        "m"_a, "rank_tol"_a = 1e-10);
  m.def("decomposition_residual",
        [](std::vector<double> p, const std::vector<std::pair<double, double>>& a) {
          const int n = static_cast<int>(p.size()) - 1;
          return dicke::decomposition_residual(population(std::move(p)), decomposition(n, a));
        },
        "p"_a, "atoms"_a);
  m.def("trajectory_decomposition",
        [](int n, const std::vector<double>& times) {
          std::vector<std::vector<std::pair<double, double>>> out;
          for (const auto& d : dicke::trajectory_decomposition(n, times)) out.push_back(atoms(d));
          return out;
        },
        "n"_a, "times"_a);

  m.def("kr_closed_form", [](int r) {
    return py::int_(py::str(dicke::kr_closed_form(r).str()));
  }, "r"_a);
  m.def("linearized_minor_check",
        [](int n, double x, double delta) {
          const dicke::LinearizedMinors l = dicke::linearized_minor_check(n, x, delta);
          return py::make_tuple(l.holds, l.det_H1, l.det_H2, l.det_Hbar1, l.det_Hbar2);
        },
        "n"_a, "x"_a, "delta"_a);
  m.def("leading_coefficient_extract",
        [](int n, int r, const std::string& kind, double x, int digits) {
          dicke::PrecisionContext ctx;
          ctx.digits = digits;
          const dicke::LeadingOrderReport rep =
              dicke::leading_coefficient_extract(n, r, dicke::parse_minor_kind(kind), x, ctx);
          py::dict d;
          d["N"] = rep.emitters;
          d["r"] = rep.r;
          d["kind"] = dicke::to_string(rep.kind);
          d["x"] = rep.x;
          d["estimated_K"] = rep.estimated_K;
          d["expected_K"] = rep.expected_K;
          d["relative_error"] = rep.relative_error;
          d["fitted_exponent"] = rep.fitted_exponent;
          d["fit_residual"] = rep.fit_residual;
          return d;
        },
        "n"_a, "r"_a, "kind"_a = "plain", "x"_a = 0.5, "digits"_a = 60);

  m.def("two_spin_state",
        [](std::vector<double> p) {
          const dicke::TwoSpinState s = dicke::two_spin_state(population(std::move(p)));
          return py::make_tuple(s.A, s.B, s.D);
        },
        "p"_a);
  m.def("two_spin_negativity",
        [](double a, double b, double d) { return dicke::two_spin_negativity({a, b, d}); },
        "A"_a, "B"_a, "D"_a);
  m.def("delta_witness",
        [](double a, double b, double d) { return dicke::delta_witness({a, b, d}); }, "A"_a,
        "B"_a, "D"_a);
  m.def("reduced_dicke_mixture",
        [](std::vector<double> p, int n) {
          return dicke::reduced_dicke_mixture(population(std::move(p)), n).q;
        },
        "p"_a, "n"_a);
  m.def("bipartition_negativity",
        [](std::vector<double> q, int n1) {
          const int n = static_cast<int>(q.size()) - 1;
          return dicke::bipartition_negativity({n, std::move(q)}, n1);
        },
        "q"_a, "n1"_a);
}
