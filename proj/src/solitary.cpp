#include "wwlab/solitary.hpp"

#include <cmath>

#include <Eigen/LU>

namespace wwlab {

double SolitaryWave::kappa() const {
  const double s = std::sqrt(beta() - 1.0 / 3.0);
  return eps / (2.0 * s * params.H);
}

SolitaryWave asymptotic_profile(const PhysicalParams& p, const Grid1D& g, double eps, double center) {
  p.validate_wave(eps);
  SolitaryWave Q;
  Q.params = p;
  Q.eps = eps;
  Q.c = p.speed(eps);
  Q.center = center;
  const double s = std::sqrt(p.beta(Q.c) - 1.0 / 3.0);
  const double kap = eps / (2.0 * s * p.H);
  const double A = 2.0 * eps * s * Q.c * p.H;
  Q.U = SurfaceState::zero(g);
  for (int j = 0; j < g.N; ++j) {
    const double x = g.x(j);
    const double sech = 1.0 / std::cosh(kap * (x - center));
    Q.U.eta[j] = -eps * eps * p.H * sech * sech;
    Q.U.phi_periodic[j] = -A * std::tanh(kap * (x - center)) + A * 2.0 * x / g.L;
  }
  Q.U.phi_ramp_amp = -A;
  return Q;
}

TravelingResidual traveling_residual(const DirichletNeumann& dn, const SolitaryWave& Q) {
  const Grid1D& g = Q.U.grid;
  const auto& p = Q.params;
  const Vec& eta = Q.U.eta;
  Vec de = deriv(g, eta);
  Vec dphi = reconstruct_dphi(Q.U);
  Vec G = dn.apply(eta, Q.U.phi_periodic, Q.U.phi_ramp_amp);
  TravelingResidual r;
  r.r1 = Q.c * de + G;
  const auto s = (1.0 + de.array().square());
  Vec curv = (de.array() / s.sqrt()).matrix();
  Vec num = G + de.cwiseProduct(dphi);
  Vec r2 = Q.c * dphi - 0.5 * dphi.cwiseProduct(dphi) +
           (0.5 * num.array().square() / s).matrix() - p.g * eta + p.b * deriv(g, curv);
  r.r2 = drop_nyquist(g, r2);
  r.e0 = l2_norm(g, r.r1) + l2_norm(g, r.r2);
  return r;
}

namespace {

// Even/odd coefficient maps about x = 0 for the node layout x_j = -L/2 + j dx.
struct ParityBasis {
  Grid1D g;
  int h;
  explicit ParityBasis(const Grid1D& grid) : g(grid), h(grid.N / 2) {}

  Vec cos_coeffs(const Vec& f) const {
    CVec F = forward(g, f);
    Vec a(h);
    for (int m = 0; m < h; ++m) {
      const double sg = (m % 2) ? -1.0 : 1.0;
      a[m] = (m == 0 ? 1.0 : 2.0) * sg * F[m].real() / g.N;
    }
    return a;
  }
  Vec sin_coeffs(const Vec& f) const {
    CVec F = forward(g, f);
    Vec b(h - 1);
    for (int m = 1; m < h; ++m) {
      const double sg = (m % 2) ? -1.0 : 1.0;
      b[m - 1] = -2.0 * sg * F[m].imag() / g.N;
    }
    return b;
  }
  Vec from_cos(const Vec& a) const {
    CVec F = CVec::Zero(h + 1);
    for (int m = 0; m < h; ++m) {
      const double sg = (m % 2) ? -1.0 : 1.0;
      F[m] = sg * a[m] * (m == 0 ? g.N : 0.5 * g.N);
    }
    return inverse(g, F);
  }
  Vec from_sin(const Vec& b) const {
    CVec F = CVec::Zero(h + 1);
    for (int m = 1; m < h; ++m) {
      const double sg = (m % 2) ? -1.0 : 1.0;
      F[m] = sg * b[m - 1] * cplx(0.0, -0.5 * g.N);
    }
    return inverse(g, F);
  }
};

struct NewtonSystem {
  const DirichletNeumann& dn;
  SolitaryWave base;
  ParityBasis pb;

  int size() const { return base.U.grid.N; }

  Vec pack(const SolitaryWave& Q) const {
    const int h = pb.h;
    Vec y(size());
    y.head(h) = pb.cos_coeffs(Q.U.eta);
    y.segment(h, h - 1) = pb.sin_coeffs(Q.U.phi_periodic);
    y[2 * h - 1] = Q.U.phi_ramp_amp;
    return y;
  }
  SolitaryWave unpack(const Vec& y) const {
    const int h = pb.h;
    SolitaryWave Q = base;
    Q.center = 0.0;
    Q.U.eta = pb.from_cos(y.head(h));
    Q.U.phi_periodic = pb.from_sin(y.segment(h, h - 1));
    Q.U.phi_ramp_amp = y[2 * h - 1];
    return Q;
  }
  Vec residual(const Vec& y, double* e0 = nullptr) const {
    const int h = pb.h;
    SolitaryWave Q = unpack(y);
    TravelingResidual r = traveling_residual(dn, Q);
    if (e0) *e0 = r.e0;
    Vec R(size());
    R.head(h - 1) = pb.sin_coeffs(r.r1);
    R.segment(h - 1, h) = pb.cos_coeffs(r.r2);
    // Far-field current: ∂xφ = 0 at the box edge.
    const Grid1D& g = Q.U.grid;
    R[2 * h - 1] = reconstruct_dphi(Q.U)[0] * g.L / 2.0;
    (void)g;
    return R;
  }
};

}  // namespace

SolitaryWave translate(const SolitaryWave& Q, double a) {
  SolitaryWave out = Q;
  const Grid1D& g = Q.U.grid;
  out.U.eta = shift(g, Q.U.eta, a);
  out.U.phi_periodic = shift(g, Q.U.phi_periodic, a);
  out.U.phi_periodic.array() -= 2.0 * a * Q.U.phi_ramp_amp / g.L;
  out.center = Q.center + a;
  return out;
}

SolitaryWave refine_newton(const DirichletNeumann& dn, const SolitaryWave& seed, const NewtonOptions& opt,
                           NewtonLog* log) {
  if (seed.U.grid != dn.grid()) throw InvalidArgument("seed grid differs from the DN grid");
  SolitaryWave centred = translate(seed, -seed.center);
  NewtonSystem sys{dn, centred, ParityBasis(seed.U.grid)};
  Vec y = sys.pack(centred);
  double e0;
  Vec R = sys.residual(y, &e0);
  if (log) log->residuals.push_back(e0);
  Mat J;
  Eigen::PartialPivLU<Mat> lu;
  bool have_j = false;
  int grow = 0;
  double prev = e0;
  for (int it = 0; it < opt.max_iter && e0 >= opt.tol; ++it) {
    if (!have_j) {
      const int n = sys.size();
      J.resize(n, n);
      const double h = opt.fd_step * std::max(y.cwiseAbs().maxCoeff(), 1e-3);
      for (int j = 0; j < n; ++j) {
        Vec yp = y;
        yp[j] += h;
        J.col(j) = (sys.residual(yp) - R) / h;
      }
      lu.compute(J);
      have_j = true;
      if (log) ++log->jacobians;
    }
    y -= lu.solve(R);
    const double before = e0;
    R = sys.residual(y, &e0);
    if (log) log->residuals.push_back(e0);
    // Keep the Jacobian while it still contracts fast.
    if (e0 > 0.05 * before) have_j = false;
    grow = (e0 > prev) ? grow + 1 : 0;
    prev = e0;
    if (grow >= 3 || !std::isfinite(e0)) {
      SolitaryWave last = translate(sys.unpack(y), seed.center);
      last.residual_norm = e0;
      throw NoConvergence("Newton residual grew three times in a row", e0, last);
    }
  }
  SolitaryWave out = translate(sys.unpack(y), seed.center);
  out.residual_norm = e0;
  if (!(e0 < opt.tol)) throw NoConvergence("Newton did not reach the tolerance", e0, out);
  return out;
}

SolitaryWave solitary_wave(const DirichletNeumann& dn, const PhysicalParams& p, double eps,
                           const NewtonOptions& opt) {
  const Grid1D& g = dn.grid();
  try {
    return refine_newton(dn, asymptotic_profile(p, g, eps), opt);
  } catch (const SolverFailure&) {
    if (eps <= 0.1) throw;
  }
  // Continuation in ε: carry the Newton correction of the previous step over
  // to the seed of the next one.
  SolitaryWave prev = refine_newton(dn, asymptotic_profile(p, g, 0.1), opt);
  double e = 0.1;
  while (e < eps) {
    const double en = std::min(eps, e + 0.05);
    SolitaryWave s_old = asymptotic_profile(p, g, e);
    SolitaryWave seed = asymptotic_profile(p, g, en);
    const double sc = std::pow(en / e, 4.0);
    seed.U.eta += sc * (prev.U.eta - s_old.U.eta);
    seed.U.phi_periodic += sc * (prev.U.phi_periodic - s_old.U.phi_periodic);
    seed.U.phi_ramp_amp += sc * (prev.U.phi_ramp_amp - s_old.U.phi_ramp_amp);
    prev = refine_newton(dn, seed, opt);
    e = en;
  }
  return prev;
}

SpeedDerivative speed_derivative(const DirichletNeumann& dn, const PhysicalParams& p, double eps,
                                 double deps, const NewtonOptions& opt) {
  // Five-point stencil in ε for both Q and c, then the chain rule.
  const double w[4] = {1.0, -8.0, 8.0, -1.0};
  const double off[4] = {-2.0, -1.0, 1.0, 2.0};
  SpeedDerivative d;
  double dc = 0.0;
  for (int i = 0; i < 4; ++i) {
    const SolitaryWave q = solitary_wave(dn, p, eps + off[i] * deps, opt);
    if (i == 0) {
      d.deta = Vec::Zero(q.U.eta.size());
      d.dphi_periodic = Vec::Zero(q.U.eta.size());
    }
    d.deta += w[i] * q.U.eta;
    d.dphi_periodic += w[i] * q.U.phi_periodic;
    d.dphi_ramp += w[i] * q.U.phi_ramp_amp;
    dc += w[i] * q.c;
  }
  d.deta /= dc;
  d.dphi_periodic /= dc;
  d.dphi_ramp /= dc;
  d.dc = dc / (12.0 * deps);  // dc/dε
  return d;
}

double momentum(const SurfaceState& U) { return inner(U.grid, U.eta, reconstruct_dphi(U)); }

GrillakisResult grillakis_sign(const DirichletNeumann& dn, const PhysicalParams& p, double eps,
                               double deps, const NewtonOptions& opt) {
  SolitaryWave qp = solitary_wave(dn, p, eps + deps, opt);
  SolitaryWave qm = solitary_wave(dn, p, eps - deps, opt);
  SolitaryWave q0 = solitary_wave(dn, p, eps, opt);
  GrillakisResult r;
  r.value = (momentum(qp.U) - momentum(qm.U)) / (qp.c - qm.c);
  r.momentum = momentum(q0.U);
  auto lead = [&](double e) {
    const double c = p.speed(e);
    const double s = std::sqrt(p.beta(c) - 1.0 / 3.0);
    return 8.0 / 3.0 * e * e * e * s * c * p.H * p.H;
  };
  r.leading = (lead(eps + deps) - lead(eps - deps)) / (p.speed(eps + deps) - p.speed(eps - deps));
  return r;
}

std::pair<double, double> parity_defect(const SolitaryWave& Q) {
  SolitaryWave c = translate(Q, -Q.center);
  const int N = c.U.grid.N, h = N / 2;
  double de = 0.0, dp = 0.0;
  const Vec& e = c.U.eta;
  const Vec& p = c.U.phi_periodic;
  for (int i = 1; i < h; ++i) {
    de = std::max(de, std::fabs(e[h + i] - e[h - i]));
    dp = std::max(dp, std::fabs(p[h + i] + p[h - i] - 2.0 * p[h]));
  }
  return {de, dp};
}

}  // namespace wwlab
