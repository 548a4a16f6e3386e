#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <filesystem>

#include "wwlab/grid.hpp"
#include "wwlab/io.hpp"
#include "wwlab/parallel.hpp"
#include "wwlab/state.hpp"

using namespace wwlab;

TEST_SUITE("numerics_core") {

TEST_CASE("transforms round trip and derivatives are spectral") {
  const Grid1D g = make_grid(20.0, 64);
  const Vec x = g.nodes();
  const double k = 2 * M_PI * 3 / g.L;
  const Vec f = x.unaryExpr([&](double s) { return std::sin(k * s) + 0.3 * std::cos(2 * k * s); });
  CHECK((inverse(g, forward(g, f)) - f).cwiseAbs().maxCoeff() < 1e-14);
  const Vec df = x.unaryExpr([&](double s) { return k * std::cos(k * s) - 0.6 * k * std::sin(2 * k * s); });
  CHECK((deriv(g, f) - df).cwiseAbs().maxCoeff() < 1e-12);
  CHECK((deriv(g, f, 2) - deriv(g, deriv(g, f))).cwiseAbs().maxCoeff() < 1e-11);
}

TEST_CASE("shift, antiderivative and resampling") {
  const Grid1D g = make_grid(10.0, 32);
  const Vec x = g.nodes();
  const double k = 2 * M_PI / g.L;
  const Vec f = x.unaryExpr([&](double s) { return std::cos(k * s); });
  const Vec shifted = x.unaryExpr([&](double s) { return std::cos(k * (s - 0.7)); });
  CHECK((shift(g, f, 0.7) - shifted).cwiseAbs().maxCoeff() < 1e-13);
  const Vec F = antiderivative(g, f);
  CHECK(std::fabs(F[0]) < 1e-14);
  CHECK((deriv(g, F) - f).cwiseAbs().maxCoeff() < 1e-12);
  const Grid1D fine = make_grid(10.0, 96);
  const Vec ff = resample(g, f, fine);
  CHECK((ff - fine.nodes().unaryExpr([&](double s) { return std::cos(k * s); })).cwiseAbs().maxCoeff() < 1e-13);
}

TEST_CASE("norms on a single mode") {
  const Grid1D g = make_grid(2 * M_PI, 32);
  const Vec s = g.nodes().unaryExpr([](double x) { return std::sin(2 * x); });
  // |sin 2x|² = π, |∂x sin 2x|² = 4π, |𝔓 sin 2x|² = 4π/√5
  CHECK(l2_norm(g, s) == doctest::Approx(std::sqrt(M_PI)).epsilon(1e-13));
  CHECK(h1_norm(g, s) == doctest::Approx(std::sqrt(5 * M_PI)).epsilon(1e-13));
  CHECK(l2_norm(g, frac_op(g, s)) == doctest::Approx(std::sqrt(4 * M_PI / std::sqrt(5.0))).epsilon(1e-13));
  CHECK(x0_norm(g, s, s) == doctest::Approx(std::sqrt(5 * M_PI) + std::sqrt(4 * M_PI / std::sqrt(5.0))).epsilon(1e-13));
}

TEST_CASE("real input stays real at the Nyquist mode") {
  const Grid1D g = make_grid(1.0, 16);
  Vec f(16);
  for (int j = 0; j < 16; ++j) f[j] = j % 2 ? -1.0 : 1.0;
  CHECK(drop_nyquist(g, f).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(deriv(g, f).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("invalid grids are rejected") {
  CHECK_THROWS_AS(make_grid(-1.0, 16), InvalidArgument);
  CHECK_THROWS_AS(make_grid(1.0, 15), InvalidArgument);
}

TEST_CASE("checkpoint round trip") {
  const Grid1D g = make_grid(3.5, 16);
  const Vec a = Vec::LinSpaced(16, -1, 1), b = a.cwiseAbs2();
  const auto path = std::filesystem::temp_directory_path() / "wwlab_unit_checkpoint.bin";
  write_checkpoint(path.string(), g, {a, b});
  Grid1D h;
  const auto fields = read_checkpoint(path.string(), &h);
  std::filesystem::remove(path);
  REQUIRE(fields.size() == 2);
  CHECK(h == g);
  CHECK(fields[0] == a);
  CHECK(fields[1] == b);
}

TEST_CASE("parameters from beta") {
  const PhysicalParams p = params_from_beta(0.1, 0.4);
  const double c = p.speed(0.1);
  CHECK(p.alpha(c) == doctest::Approx(1.01).epsilon(1e-14));
  CHECK(p.beta(c) == doctest::Approx(0.4).epsilon(1e-14));
  CHECK(p.eps_of_speed(c) == doctest::Approx(0.1).epsilon(1e-12));
  CHECK_THROWS(p.validate_wave(0.0));
}

TEST_CASE("parallel_for covers every index and rethrows") {
  set_max_jobs(3);
  std::vector<int> hit(50, 0);
  parallel_for(50, [&](int i) { hit[i] += 1; });
  for (int v : hit) CHECK(v == 1);
  CHECK_THROWS_AS(parallel_for(10, [](int i) { if (i == 7) throw std::runtime_error("x"); }), std::runtime_error);
  set_max_jobs(1);
}

}
