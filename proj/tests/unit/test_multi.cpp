#include <doctest.h>

#include <cmath>

#include "wwlab/multi.hpp"

using namespace wwlab;

namespace {
const PhysicalParams P = params_from_beta(0.1, 0.4);

struct Setting {
  Grid1D g = make_grid(128.0, 384);
  DirichletNeumann dn{g, 1.0};
  TwoSolitonConfig cfg = make_two_soliton(dn, P, 0.3, 0.1, 20.0);
};
const Setting& setting() {
  static const Setting s;
  return s;
}

TwoSolitonConfig with_zero_second(const TwoSolitonConfig& cfg) {
  TwoSolitonConfig z = cfg;
  z.wave2.U = SurfaceState::zero(cfg.wave2.U.grid);
  z.wave2.c = cfg.wave1.c;
  z.frame_speed = cfg.wave1.c;
  return z;
}
}  // namespace

TEST_SUITE("multi_soliton") {

TEST_CASE("smooth step") {
  CHECK(smooth_step(0.0) == 0.0);
  CHECK(smooth_step(1.0) == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(smooth_step(0.5) == doctest::Approx(0.5).epsilon(1e-15));
  CHECK(smooth_step(-1.0) == 0.0);
  CHECK(smooth_step(2.0) == 1.0);
  for (double s : {0.1, 0.37, 0.8}) {
    const double fd = (smooth_step(s + 1e-6) - smooth_step(s - 1e-6)) / 2e-6;
    CHECK(smooth_step_deriv(s) == doctest::Approx(fd).epsilon(1e-8));
    CHECK(smooth_step(s) + smooth_step(1 - s) == doctest::Approx(1.0).epsilon(1e-14));
  }
}

TEST_CASE("cutoffs satisfy chi1^2 + chi2^2 = 1 with gradients of order 1/h") {
  const Setting& s = setting();
  double grad[2];
  int i = 0;
  for (double h : {20.0, 40.0}) {
    TwoSolitonConfig c = s.cfg;
    c.h = h;
    const CutoffPair cp = cutoffs(c, s.g, 0.0);
    CHECK((cp.chi1.cwiseAbs2() + cp.chi2.cwiseAbs2() - Vec::Ones(s.g.N)).cwiseAbs().maxCoeff() < 1e-14);
    CHECK(cp.chi1.minCoeff() >= 0.0);
    CHECK(cp.chi1.maxCoeff() <= 1.0);
    grad[i] = cp.dchi1.cwiseAbs().maxCoeff();
    CHECK(grad[i] * h <= 20.0);
    ++i;
  }
  CHECK(grad[1] / grad[0] == doctest::Approx(0.5).epsilon(0.1));
}

TEST_CASE("interaction integral: origin value and closed form against quadrature") {
  CHECK(interaction_integral(1.0, 0.5, 0.9, 1.0, 0.0, 0.0).lhs == doctest::Approx(1.0).epsilon(1e-15));
  CHECK(interaction_integral(0.4, 0.2, 0.9, 1.0, 0.0, 0.0).lhs == doctest::Approx(2.5).epsilon(1e-15));
  const double eps = 0.7, h = 3.0, t = 5.0, c1 = 0.9, c2 = 1.0;
  double q = 0.0;
  const double dx = 1e-3;
  for (double x = -60; x < 60; x += dx)
    q += dx * std::exp(-eps * std::fabs(x + 0.5 * dx - c1 * t)) * std::exp(-eps * std::fabs(x + 0.5 * dx - h - c2 * t));
  CHECK(interaction_integral(eps, 0.35, c1, c2, h, t).lhs == doctest::Approx(q).epsilon(1e-6));
  std::vector<double> hs, ts;
  for (int k = 0; k <= 40; ++k) hs.push_back(k);
  for (int k = 0; k <= 100; ++k) ts.push_back(k);
  const InteractionSup sup = interaction_sup(1.0, 0.5, 0.9, 1.0, hs, ts);
  CHECK(sup.C == doctest::Approx(41.0).epsilon(1e-9));
  CHECK(sup.monotone_in_h);
  CHECK_THROWS(interaction_integral(0.5, 0.5, 0.9, 1.0, 0.0, 0.0));
}

TEST_CASE("log-linear fit recovers an exact exponential") {
  std::vector<double> x{0, 1, 2, 3, 4}, y;
  for (double v : x) y.push_back(2.0 * std::exp(-0.3 * v));
  const LogLinearFit f = fit_log_linear(x, y);
  CHECK(f.rate == doctest::Approx(-0.3).epsilon(1e-12));
  CHECK(f.prefactor == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(f.r2 == doctest::Approx(1.0).epsilon(1e-12));
  CHECK_FALSE(f.poor);
}

TEST_CASE("configuration checks") {
  const Setting& s = setting();
  TwoSolitonConfig c = s.cfg;
  c.h = 2.0;
  CHECK_THROWS(c.validate());
  c = s.cfg;
  std::swap(c.wave1, c.wave2);
  CHECK_THROWS(c.validate());
  CHECK_THROWS_AS(s.cfg.check_window(5000.0), WindowViolation);
  CHECK_NOTHROW(s.cfg.check_window(100.0));
}

TEST_CASE("defect of the superposition") {
  const Setting& s = setting();
  const ResidualRM r = residual_RM(s.dn, s.cfg, 0.0);
  CHECK(r.defect_check < 1e-8);
  // frozen from the reference run
  CHECK(r.e0 == doctest::Approx(4.73e-6).epsilon(0.02));
  // one wave alone leaves no defect
  const ResidualRM z = residual_RM(s.dn, with_zero_second(s.cfg), 0.0);
  CHECK(z.e0 < 1e-9);
}

TEST_CASE("residual decay in t and h") {
  const Setting& s = setting();
  const ResidualDecay d = decay_fit(s.dn, s.cfg, {0, 20, 40, 60, 80, 100}, {15, 20, 25, 30});
  CHECK(d.in_t.rate < 0.0);
  CHECK(d.in_h.rate < 0.0);
  CHECK(d.in_t.r2 > 0.95);
  CHECK(d.consistency < 0.3);
  CHECK(d.eps0 == doctest::Approx(0.398).epsilon(0.01));
}

TEST_CASE("operator about M reduces to the one-wave operator") {
  const Setting& s = setting();
  const FourierBasis B(s.g);
  const TwoSolitonConfig z = with_zero_second(s.cfg);
  const LMOperator op = assemble_LM(s.dn, B, z, 0.0);
  const SolitaryWave Q = translate(z.wave1, z.y1(0.0));
  const OperatorMatrix Lc = assemble_Lc(s.dn, B, Q);
  CHECK((op.L.A - Lc.A).cwiseAbs().maxCoeff() < 1e-6 * Lc.A.cwiseAbs().maxCoeff());
}

TEST_CASE("a_M is localised at the cores") {
  const Setting& s = setting();
  const FourierBasis B(s.g);
  const LMOperator op = assemble_LM(s.dn, B, s.cfg, 0.0);
  const double y1 = s.cfg.y1(0.0), y2 = s.cfg.y2(0.0);
  const double w1 = s.cfg.wave1.width(), w2 = s.cfg.wave2.width();
  double outside = 0.0;
  for (int j = 0; j < s.g.N; ++j) {
    const double x = s.g.x(j);
    if (std::fabs(x - y1) > 20 * w1 && std::fabs(x - y2) > 20 * w2) outside = std::max(outside, std::fabs(op.aM[j]));
  }
  CHECK(outside < 1e-8);
}

TEST_CASE("a single wave needs no correction") {
  const Setting& s = setting();
  const FourierBasis B(s.g);
  const TwoSolitonConfig z = with_zero_second(s.cfg);
  const LMLattice lat = build_lattice(s.dn, B, z, 10.0, 5.0);
  const CorrectionResult r = first_order_correction(s.dn, B, z, lat, 0.4, 10.0, 0.05);
  CHECK(r.norm_e0.size() == 3);
  for (double v : r.norm_e0) CHECK(v == 0.0);
}

TEST_CASE("lattice interpolation is exact at the nodes") {
  const Setting& s = setting();
  const FourierBasis B(s.g);
  const LMLattice lat = build_lattice(s.dn, B, s.cfg, 5.0, 5.0);
  REQUIRE(lat.times.size() == 2);
  const LMOperator op = assemble_LM(s.dn, B, s.cfg, 5.0);
  CHECK((lat.L_at(5.0) - op.L.A).cwiseAbs().maxCoeff() < 1e-12 * op.L.A.cwiseAbs().maxCoeff());
  CHECK_THROWS(lat.apply_JL(6.0, Vec::Zero(2 * B.size())));
}

}
