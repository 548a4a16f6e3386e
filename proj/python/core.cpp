// Python bindings for the main operations. Fields cross the boundary as
// numpy arrays; results come back as dicts.
#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "wwlab/checks.hpp"
#include "wwlab/evolution.hpp"
#include "wwlab/linear.hpp"
#include "wwlab/multi.hpp"
#include "wwlab/solitary.hpp"

namespace py = pybind11;
using namespace wwlab;

namespace {

py::dict wave_dict(const SolitaryWave& Q) {
  py::dict d;
  d["x"] = Q.U.grid.nodes();
  d["eta"] = Q.U.eta;
  d["phi"] = reconstruct_phi(Q.U);
  d["phi_periodic"] = Q.U.phi_periodic;
  d["ramp_amplitude"] = Q.U.phi_ramp_amp;
  d["c"] = Q.c;
  d["eps"] = Q.eps;
  d["width"] = Q.width();
  return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Gravity-capillary water waves: DN operator, solitary waves, evolution and stability";

  py::register_exception<InvalidArgument>(m, "InvalidArgument", PyExc_ValueError);
  py::register_exception<SolverFailure>(m, "SolverFailure", PyExc_RuntimeError);

  py::class_<Grid1D>(m, "Grid")
      .def(py::init(&make_grid), py::arg("L"), py::arg("N"))
      .def_readonly("L", &Grid1D::L)
      .def_readonly("N", &Grid1D::N)
      .def("nodes", &Grid1D::nodes)
      .def("wavenumbers", &Grid1D::wavenumbers)
      .def("__repr__", [](const Grid1D& g) { return "Grid(L=" + std::to_string(g.L) + ", N=" + std::to_string(g.N) + ")"; });

  py::class_<PhysicalParams>(m, "Params")
      .def(py::init<double, double, double>(), py::arg("g") = 1.0, py::arg("b") = 0.4, py::arg("H") = 1.0)
      .def_static("from_beta", &params_from_beta, py::arg("eps"), py::arg("beta"), py::arg("g") = 1.0,
                  py::arg("H") = 1.0)
      .def_readwrite("g", &PhysicalParams::g)
      .def_readwrite("b", &PhysicalParams::b)
      .def_readwrite("H", &PhysicalParams::H)
      .def("speed", &PhysicalParams::speed)
      .def("alpha", &PhysicalParams::alpha)
      .def("beta", &PhysicalParams::beta);

  py::class_<DirichletNeumann>(m, "DirichletNeumann")
      .def(py::init([](const Grid1D& g, double H, int Nz) { return new DirichletNeumann(g, H, DNConfig{Nz}); }),
           py::arg("grid"), py::arg("H") = 1.0, py::arg("Nz") = 32)
      .def("apply", [](const DirichletNeumann& dn, const Vec& eta, const Vec& psi,
                       double ramp) { return dn.apply(eta, psi, ramp); },
           py::arg("eta"), py::arg("psi"), py::arg("ramp_amplitude") = 0.0)
      .def("exact_symbol", &DirichletNeumann::exact_symbol, py::arg("xi"), py::arg("k") = 0.0)
      .def_property_readonly("grid", &DirichletNeumann::grid);

  m.def("dn_check", [](const DirichletNeumann& dn, const Vec& eta, int pairs, std::uint64_t seed) {
    const DNCheck r = dn_check(dn, eta, pairs, seed);
    py::dict d;
    d["flat_symbol_error"] = r.flat_symbol_error;
    d["constant_error"] = r.constant_error;
    d["symmetry_ratio"] = r.symmetry_ratio;
    d["shape_steps"] = r.shape_steps;
    d["shape_errors"] = r.shape_errors;
    d["shape_order"] = r.shape_order;
    return d;
  }, py::arg("dn"), py::arg("eta"), py::arg("pairs") = 20, py::arg("seed") = 1);

  m.def("solitary_wave", [](const DirichletNeumann& dn, const PhysicalParams& p, double eps) {
    const SolitaryWave Q = solitary_wave(dn, p, eps);
    py::dict d = wave_dict(Q);
    d["residual"] = traveling_residual(dn, Q).e0;
    return d;
  }, py::arg("dn"), py::arg("params"), py::arg("eps"));

  m.def("seed_residual", [](const DirichletNeumann& dn, const PhysicalParams& p, double eps) {
    return traveling_residual(dn, asymptotic_profile(p, dn.grid(), eps)).e0;
  }, py::arg("dn"), py::arg("params"), py::arg("eps"));

  m.def("evolve_solitary", [](const DirichletNeumann& dn, const PhysicalParams& p, double eps, double T,
                              double dt, double filter_strength) {
    const SolitaryWave Q = solitary_wave(dn, p, eps);
    EvolutionConfig c;
    c.T = T;
    c.dt = dt;
    c.filter_strength = filter_strength;
    const Trajectory tr = evolve(dn, Q.U, c, p);
    const SolitaryWave ex = translate(Q, Q.c * T);
    std::vector<double> energy;
    for (const auto& s : tr.series) energy.push_back(s.energy);
    py::dict d;
    d["t"] = tr.times;
    d["energy"] = energy;
    d["eta"] = tr.final_state.eta;
    d["shape_error"] = x0_norm(dn.grid(), tr.final_state.eta - ex.U.eta,
                               tr.final_state.phi_periodic - ex.U.phi_periodic);
    return d;
  }, py::arg("dn"), py::arg("params"), py::arg("eps"), py::arg("T"), py::arg("dt") = 0.05,
     py::arg("filter_strength") = 36.0);

  m.def("grillakis_sign", [](const DirichletNeumann& dn, const PhysicalParams& p, double eps) {
    return grillakis_sign(dn, p, eps).value;
  }, py::arg("dn"), py::arg("params"), py::arg("eps"));

  m.def("spectrum", [](const DirichletNeumann& dn, const PhysicalParams& p, double eps) {
    const SolitaryWave Q = solitary_wave(dn, p, eps);
    const FourierBasis B(dn.grid());
    const SpectrumResult s = spectrum_JL(assemble_Lc(dn, B, Q));
    py::dict d;
    d["eigenvalues"] = s.eigenvalues;
    d["max_real"] = s.max_real;
    d["pm_symmetry"] = s.pm_symmetry;
    d["scale"] = s.scale;
    return d;
  }, py::arg("dn"), py::arg("params"), py::arg("eps"));

  m.def("coercivity", [](const DirichletNeumann& dn, const PhysicalParams& p, double eps) {
    const SolitaryWave Q = solitary_wave(dn, p, eps);
    const FourierBasis B(dn.grid());
    const CoercivityResult r = coercivity_rayleigh(assemble_Lc(dn, B, Q), B, wave_coefficients(dn, Q));
    py::dict d;
    d["min_constrained"] = r.min_constrained;
    d["lowest"] = r.lowest;
    d["nonpositive"] = r.nonpositive;
    return d;
  }, py::arg("dn"), py::arg("params"), py::arg("eps"));

  m.def("transverse_scan", [](const PhysicalParams& p, double eps, double L, int N, const std::vector<double>& ks) {
    const TransverseScan s = transverse_scan(p, eps, L, N, ks);
    std::vector<double> k, sigma;
    std::vector<bool> accepted;
    for (const auto& pt : s.points) {
      k.push_back(pt.k);
      sigma.push_back(pt.sigma);
      accepted.push_back(pt.converged);
    }
    py::dict d;
    d["k"] = k;
    d["sigma"] = sigma;
    d["accepted"] = accepted;
    d["branch_exists"] = s.branch_exists;
    d["vanishes_beyond"] = s.vanishes_beyond;
    d["k_max_unstable"] = s.k_max_unstable;
    return d;
  }, py::arg("params"), py::arg("eps"), py::arg("L"), py::arg("N"), py::arg("ks"));

  m.def("interaction_integral", [](double eps, double eps0, double c1, double c2, double h, double t) {
    const InteractionValue v = interaction_integral(eps, eps0, c1, c2, h, t);
    return py::make_tuple(v.lhs, v.rhs);
  }, py::arg("eps"), py::arg("eps0"), py::arg("c1"), py::arg("c2"), py::arg("h"), py::arg("t"));

  m.def("two_soliton_residual", [](const DirichletNeumann& dn, const PhysicalParams& p, double eps1, double eps2,
                                   double h, const std::vector<double>& times, const std::vector<double>& hs) {
    const TwoSolitonConfig cfg = make_two_soliton(dn, p, eps1, eps2, h);
    py::dict d;
    d["e0"] = residual_RM(dn, cfg, 0.0).e0;
    if (!times.empty() && !hs.empty()) {
      const ResidualDecay r = decay_fit(dn, cfg, times, hs);
      d["rate_t"] = r.in_t.rate;
      d["rate_h"] = r.in_h.rate;
      d["r2_t"] = r.in_t.r2;
      d["eps0"] = r.eps0;
      d["consistency"] = r.consistency;
    }
    return d;
  }, py::arg("dn"), py::arg("params"), py::arg("eps1"), py::arg("eps2"), py::arg("h"),
     py::arg("times") = std::vector<double>{}, py::arg("hs") = std::vector<double>{});
}
