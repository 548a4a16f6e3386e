#include "wwlab/checks.hpp"

#include <cmath>
#include <random>

namespace wwlab {

Vec random_band_limited(const Grid1D& g, std::uint64_t seed, double frac, bool mean_free) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd(0.0, 1.0);
  CVec fh = CVec::Zero(g.N / 2 + 1);
  const double km = frac * g.xi_max();
  for (int m = 0; m < g.N / 2; ++m) {
    if (std::fabs(g.xi(m)) > km) continue;
    const double re = nd(rng), im = m == 0 ? 0.0 : nd(rng);
    fh[m] = cplx(re, im) * static_cast<double>(g.N);
  }
  if (mean_free) fh[0] = 0.0;
  Vec f = inverse(g, fh);
  const double m = f.cwiseAbs().maxCoeff();
  if (!(m > 0.0)) throw InvalidArgument("no Fourier mode inside the requested band");
  return f / m;
}

DNCheck dn_check(const DirichletNeumann& dn, const Vec& eta, int pairs, std::uint64_t seed) {
  const Grid1D& g = dn.grid();
  DNCheck r;

  const Vec psi = random_band_limited(g, seed);
  const Vec flat = dn.apply(Vec::Zero(g.N), psi);
  const Vec exact = apply_multiplier(
      g, [&](double k) { return cplx(dn.exact_symbol(k), 0.0); }, psi);
  r.flat_symbol_error = (flat - exact).cwiseAbs().maxCoeff() / exact.cwiseAbs().maxCoeff();
  r.constant_error = dn.apply(eta, Vec::Ones(g.N)).cwiseAbs().maxCoeff();

  StripProblem sp(dn, eta);
  for (int i = 0; i < pairs; ++i) {
    const Vec u = random_band_limited(g, seed + 1000 + 2 * i);
    const Vec v = random_band_limited(g, seed + 1001 + 2 * i);
    const double d = std::fabs(inner(g, u, sp.apply(v)) - inner(g, v, sp.apply(u)));
    r.symmetry_ratio = std::max(r.symmetry_ratio, d / (l2_norm(g, frac_op(g, u)) * l2_norm(g, frac_op(g, v))));
  }

  // Central differences of G[η + sζ]ψ against the shape-derivative formula.
  const Vec zeta = 0.5 * eta.cwiseAbs().maxCoeff() * random_band_limited(g, seed + 7, 0.1);
  const Vec sd = shape_derivative(dn, eta, psi, 0.0, zeta);
  for (double s : {0.4, 0.2, 0.1, 0.05}) {
    const Vec fd = (dn.apply(eta + s * zeta, psi) - dn.apply(eta - s * zeta, psi)) / (2.0 * s);
    r.shape_steps.push_back(s);
    r.shape_errors.push_back((fd - sd).cwiseAbs().maxCoeff() / sd.cwiseAbs().maxCoeff());
  }
  r.shape_order = INFINITY;
  for (size_t i = 1; i < r.shape_errors.size(); ++i)
    r.shape_order = std::min(r.shape_order, std::log2(r.shape_errors[i - 1] / r.shape_errors[i]));
  return r;
}

}  // namespace wwlab
