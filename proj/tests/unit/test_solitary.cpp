#include <doctest.h>

#include <cmath>

#include "wwlab/solitary.hpp"

using namespace wwlab;

namespace {
const PhysicalParams P = params_from_beta(0.1, 0.4);
}

TEST_SUITE("solitary_wave") {

TEST_CASE("speeds of the default waves") {
  // c = sqrt(gH/(1+ε²))
  CHECK(P.speed(0.1) == doctest::Approx(0.9950371902).epsilon(1e-9));
  CHECK(P.speed(0.3) == doctest::Approx(0.9578262852).epsilon(1e-9));
}

TEST_CASE("Newton refines the seed to a parity-symmetric traveling wave") {
  const Grid1D g = make_grid(128.0, 256);
  DirichletNeumann dn(g, 1.0);
  const SolitaryWave seed = asymptotic_profile(P, g, 0.1);
  NewtonLog log;
  const SolitaryWave Q = refine_newton(dn, seed, {}, &log);
  CHECK(traveling_residual(dn, Q).e0 < 1e-9);
  CHECK(log.residuals.front() > 1e-6);
  const auto [pe, pp] = parity_defect(Q);
  CHECK(pe < 1e-8);
  CHECK(pp < 1e-8);
  // depression wave with depth close to ε²H
  CHECK(Q.U.eta.minCoeff() < 0.0);
  CHECK(-Q.U.eta.minCoeff() == doctest::Approx(0.01).epsilon(0.1));
}

TEST_CASE("translation commutes with the residual") {
  const Grid1D g = make_grid(128.0, 256);
  DirichletNeumann dn(g, 1.0);
  const SolitaryWave Q = solitary_wave(dn, P, 0.1);
  const SolitaryWave T = translate(Q, 7.3);
  CHECK(T.center == doctest::Approx(Q.center + 7.3));
  CHECK(traveling_residual(dn, T).e0 < 1e-8);
  CHECK((translate(T, -7.3).U.eta - Q.U.eta).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("momentum slope is negative and follows the leading order") {
  DirichletNeumann dn(make_grid(128.0, 256), 1.0);
  const GrillakisResult r = grillakis_sign(dn, P, 0.1);
  CHECK(r.value < 0.0);
  CHECK(r.value == doctest::Approx(r.leading).epsilon(0.2));
}

TEST_CASE("waves outside the existence region are rejected") {
  const Grid1D g = make_grid(64.0, 128);
  const PhysicalParams weak{1.0, 0.2, 1.0};  // β < 1/3
  CHECK_THROWS(asymptotic_profile(weak, g, 0.1));
}

}
