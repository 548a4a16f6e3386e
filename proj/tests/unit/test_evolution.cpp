#include <doctest.h>

#include <cmath>

#include "wwlab/evolution.hpp"
#include "wwlab/solitary.hpp"

using namespace wwlab;

namespace {
const PhysicalParams P = params_from_beta(0.1, 0.4);
}

TEST_SUITE("zakharov_evolution") {

TEST_CASE("the solitary wave is a traveling solution of rhs") {
  const Grid1D g = make_grid(128.0, 256);
  DirichletNeumann dn(g, 1.0);
  const SolitaryWave Q = solitary_wave(dn, P, 0.1);
  const StateRate r = rhs(dn, Q.U, P);
  CHECK((r.deta + Q.c * deriv(g, Q.U.eta)).cwiseAbs().maxCoeff() < 1e-9);
  // in the co-moving frame it is a fixed point
  const StateRate f = rhs(dn, Q.U, P, Q.c);
  CHECK(f.deta.cwiseAbs().maxCoeff() < 1e-9);
  CHECK(f.dphi.cwiseAbs().maxCoeff() < 1e-9);
}

TEST_CASE("rest state and linear waves") {
  const Grid1D g = make_grid(2 * M_PI, 32);
  DirichletNeumann dn(g, 1.0);
  const StateRate r = rhs(dn, SurfaceState::zero(g), P);
  CHECK(r.deta.cwiseAbs().maxCoeff() == 0.0);
  CHECK(r.dphi.cwiseAbs().maxCoeff() == 0.0);
  // small-amplitude mode: ∂tη = G[0]φ, ∂tφ = -(g + bξ²)η at first order
  SurfaceState U = SurfaceState::zero(g);
  U.phi_periodic = 1e-7 * g.nodes().unaryExpr([](double x) { return std::cos(2 * x); });
  const StateRate s = rhs(dn, U, P);
  CHECK((s.deta - 2 * std::tanh(2.0) * U.phi_periodic).cwiseAbs().maxCoeff() < 1e-19);
}

TEST_CASE("short unfiltered run conserves energy, mass and momentum") {
  const Grid1D g = make_grid(128.0, 256);
  DirichletNeumann dn(g, 1.0);
  const SolitaryWave Q = solitary_wave(dn, P, 0.1);
  EvolutionConfig c;
  c.T = 2.0;
  c.dt = 0.05;
  c.filter_strength = 0.0;
  const Trajectory tr = evolve(dn, Q.U, c, P);
  const Conserved &a = tr.series.front(), &b = tr.series.back();
  CHECK(std::fabs(b.energy - a.energy) < 1e-9 * std::fabs(a.energy));
  CHECK(std::fabs(b.mass - a.mass) < 1e-9 * std::fabs(a.mass));
  CHECK(std::fabs(b.momentum - a.momentum) < 1e-8 * std::fabs(a.momentum));
  CHECK(x0_norm(g, tr.final_state.eta - translate(Q, 2.0 * Q.c).U.eta,
                tr.final_state.phi_periodic - translate(Q, 2.0 * Q.c).U.phi_periodic) < 1e-7);
}

TEST_CASE("time reversal") {
  const Grid1D g = make_grid(128.0, 256);
  DirichletNeumann dn(g, 1.0);
  const SolitaryWave Q = solitary_wave(dn, P, 0.1);
  const SurfaceState R = reverse(reverse(Q.U));
  CHECK((R.eta - Q.U.eta).cwiseAbs().maxCoeff() == 0.0);
  EvolutionConfig c;
  c.T = 1.0;
  c.filter_strength = 0.0;
  const SurfaceState fwd = evolve(dn, Q.U, c, P, false).final_state;
  const SurfaceState back = reverse(evolve(dn, reverse(fwd), c, P, false).final_state);
  CHECK((back.eta - Q.U.eta).cwiseAbs().maxCoeff() < 1e-10);
}

TEST_CASE("configuration checks") {
  EvolutionConfig c;
  c.dt = -1.0;
  CHECK_THROWS(c.validate());
  c.dt = 0.3;
  c.T = 1.0;
  CHECK_THROWS(c.validate());  // T not a multiple of dt
  const Grid1D g = make_grid(128.0, 256);
  CHECK(stable_dt_bound(g, P) > 0.05);
}

}
