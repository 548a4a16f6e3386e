#include <doctest.h>

#include <cmath>

#include "wwlab/checks.hpp"
#include "wwlab/solitary.hpp"

using namespace wwlab;

namespace {
const PhysicalParams P = params_from_beta(0.1, 0.4);
}

TEST_SUITE("dirichlet_neumann") {

TEST_CASE("flat surface reproduces the exact symbol and kills constants") {
  const Grid1D g = make_grid(128.0, 256);
  DirichletNeumann dn(g, 1.0);
  const DNCheck r = dn_check(dn, asymptotic_profile(P, g, 0.1).U.eta, 4, 3);
  CHECK(r.flat_symbol_error < 1e-8);
  CHECK(r.constant_error < 1e-12);
  CHECK(r.symmetry_ratio < 1e-9);
  CHECK(r.shape_order > 1.9);
}

TEST_CASE("single mode on the flat strip") {
  const Grid1D g = make_grid(2 * M_PI, 32);
  DirichletNeumann dn(g, 0.7);
  const Vec psi = g.nodes().unaryExpr([](double x) { return std::cos(3 * x); });
  const Vec out = dn.apply(Vec::Zero(g.N), psi);
  CHECK((out - 3 * std::tanh(2.1) * psi).cwiseAbs().maxCoeff() < 1e-12);
  CHECK(dn.exact_symbol(3.0) == doctest::Approx(3 * std::tanh(2.1)));
  CHECK(dn.exact_symbol(0.0, 0.5) == doctest::Approx(0.5 * std::tanh(0.35)));
}

TEST_CASE("ramp carrier: G[eta] x = -eta'") {
  // φ = S = 2x/L is harmonic and its DN image is -(2/L)η'.
  const Grid1D g = make_grid(64.0, 128);
  DirichletNeumann dn(g, 1.0);
  const Vec eta = asymptotic_profile(P, g, 0.2).U.eta;
  const Vec out = dn.apply(eta, Vec::Zero(g.N), 1.0);
  CHECK((out + (2.0 / g.L) * deriv(g, eta)).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("decay of G applied to a wave is exponential") {
  const Grid1D g = make_grid(128.0, 256);
  DirichletNeumann dn(g, 1.0);
  const SolitaryWave Q = asymptotic_profile(P, g, 0.1);
  const DecayFit d = decay_profile(dn, Q.U.eta, Q.U.phi_periodic, Q.U.phi_ramp_amp);
  CHECK(d.rate < 0.0);
  CHECK(d.r2 > 0.99);
}

TEST_CASE("good unknowns vanish on the flat rest state") {
  const Grid1D g = make_grid(16.0, 32);
  DirichletNeumann dn(g, 1.0);
  const GoodUnknowns gu = good_unknowns(dn, Vec::Zero(g.N), Vec::Zero(g.N));
  CHECK(gu.Z.cwiseAbs().maxCoeff() == 0.0);
  CHECK(gu.v.cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("random band-limited data is reproducible") {
  const Grid1D g = make_grid(16.0, 64);
  const Vec a = random_band_limited(g, 5), b = random_band_limited(g, 5), c = random_band_limited(g, 6);
  CHECK(a == b);
  CHECK(a != c);
  CHECK(a.cwiseAbs().maxCoeff() == doctest::Approx(1.0));
  CHECK(std::fabs(a.mean()) < 1e-14);
}

}
