#include "wwlab/dn.hpp"

#include <cmath>

#include <Eigen/Eigenvalues>

namespace wwlab {

VerticalRule lgl_rule(int Nz) {
  if (Nz < 8) throw InvalidArgument("vertical resolution Nz must be >= 8");
  const int n = Nz;
  // Newton iteration for the roots of (1-t²)P'_n, started from Chebyshev points.
  Vec t(n + 1), told(n + 1);
  for (int i = 0; i <= n; ++i) t[i] = -std::cos(M_PI * i / n);
  Mat P(n + 1, n + 1);
  for (int it = 0; it < 100; ++it) {
    told = t;
    P.col(0).setOnes();
    P.col(1) = t;
    for (int k = 2; k <= n; ++k)
      P.col(k) = (((2.0 * k - 1) * t.array() * P.col(k - 1).array() -
                   (k - 1.0) * P.col(k - 2).array()) /
                  k)
                     .matrix();
    t = (told.array() - (t.array() * P.col(n).array() - P.col(n - 1).array()) /
                            ((n + 1.0) * P.col(n).array()))
            .matrix();
    if ((t - told).cwiseAbs().maxCoeff() < 1e-16) break;
  }
  t[0] = -1.0;
  t[n] = 1.0;
  P.col(0).setOnes();
  P.col(1) = t;
  for (int k = 2; k <= n; ++k)
    P.col(k) = (((2.0 * k - 1) * t.array() * P.col(k - 1).array() - (k - 1.0) * P.col(k - 2).array()) / k)
                   .matrix();
  const Vec Pn = P.col(n);
  VerticalRule r;
  r.w = (2.0 / (n * (n + 1.0)) / Pn.array().square()).matrix();
  r.D = Mat::Zero(n + 1, n + 1);
  for (int i = 0; i <= n; ++i) {
    double s = 0.0;
    for (int j = 0; j <= n; ++j) {
      if (i == j) continue;
      r.D(i, j) = Pn[i] / (Pn[j] * (t[i] - t[j]));
      s += r.D(i, j);
    }
    r.D(i, i) = -s;
  }
  // Map t in [-1,1] to z = (t-1)/2 in [-1,0].
  r.z = ((t.array() - 1.0) * 0.5).matrix();
  r.w *= 0.5;
  r.D *= 2.0;
  return r;
}

DirichletNeumann::DirichletNeumann(const Grid1D& grid, double H, DNConfig cfg)
    : grid_(grid), H_(H), cfg_(cfg), rule_(lgl_rule(cfg.Nz)) {
  if (!(H > 0.0)) throw InvalidArgument("depth must be positive");
  const int n = cfg_.Nz;
  const Mat W = rule_.w.asDiagonal();
  vert_.K = rule_.D.transpose() * W * rule_.D;
  const Mat KII = vert_.K.topLeftCorner(n, n);
  const Mat WI = rule_.w.head(n).asDiagonal();
  Eigen::GeneralizedSelfAdjointEigenSolver<Mat> es(KII, WI);
  if (es.info() != Eigen::Success) throw SolverFailure("vertical eigen-decomposition failed", 0.0);
  vert_.S = es.eigenvectors();
  vert_.lambda = es.eigenvalues();
  vert_.KtS = (vert_.K.block(n, 0, 1, n) * vert_.S).transpose();
}

double DirichletNeumann::exact_symbol(double xi, double k) const {
  const double kap = std::sqrt(xi * xi + k * k);
  return kap * std::tanh(H_ * kap);
}

double DirichletNeumann::discrete_flat_symbol(int m, double k) const {
  const int n = cfg_.Nz;
  const double xe = xi_eff(m);
  const double a = H_ * (xe * xe + k * k);
  double g = a * rule_.w[n] + vert_.K(n, n) / H_;
  for (int l = 0; l < n; ++l) {
    const double s = vert_.KtS[l];
    g -= s * s / (H_ * H_ * (a + vert_.lambda[l] / H_));
  }
  return g;
}

StripField DirichletNeumann::harmonic_lift(const Vec& psi, double k) const {
  const int nz = cfg_.Nz, nc = grid_.N / 2 + 1;
  CVec ph = forward(grid_, psi);
  CRowMat hat(nz + 1, nc);
  for (int m = 0; m < nc; ++m) {
    const double kap = std::sqrt(grid_.xi(m) * grid_.xi(m) + k * k);
    const double a = H_ * kap;
    for (int i = 0; i <= nz; ++i) {
      const double z = rule_.z[i];
      // cosh(a(z+1))/cosh(a) = e^{az}(1+e^{-2a(z+1)})/(1+e^{-2a})
      const double mult = std::exp(a * z) * (1.0 + std::exp(-2.0 * a * (z + 1.0))) /
                          (1.0 + std::exp(-2.0 * a));
      hat(i, m) = ph[m] * mult;
    }
  }
  StripField f{grid_, nz, RowMat()};
  inverse_rows(grid_, hat, f.values);
  f.values.row(nz) = psi.transpose();
  return f;
}

Vec DirichletNeumann::apply(const Vec& eta, const Vec& psi, SolveStats* stats) const {
  return StripProblem(*this, eta, 0.0).apply(psi, stats);
}

Vec DirichletNeumann::apply(const Vec& eta, const Vec& psi, double ramp_amp, SolveStats* stats) const {
  return StripProblem(*this, eta, 0.0).apply(psi, ramp_amp, stats);
}

Vec DirichletNeumann::apply_transverse(const Vec& eta, const Vec& f, double k, SolveStats* stats) const {
  return StripProblem(*this, eta, k).apply(f, stats);
}

// ---------------------------------------------------------------------------

StripProblem::StripProblem(const DirichletNeumann& dn, const Vec& eta, double k)
    : dn_(dn), eta_(eta), k_(k) {
  const Grid1D& g = dn.grid();
  const double H = dn.depth();
  if (eta.size() != g.N) throw InvalidArgument("eta does not match the grid");
  if (!(H + eta.minCoeff() > 0.0)) throw InvalidArgument("cavitation: H + eta <= 0");
  if (!eta.allFinite()) throw NumericalDomainError("non-finite eta");
  deta_ = deriv(g, eta);
  Heff_ = H + eta.mean();
  const auto& r = dn.rule();
  const int nz = dn.config().Nz;
  c11_.resize(nz + 1, g.N);
  c12_.resize(nz + 1, g.N);
  c22_.resize(nz + 1, g.N);
  c00_.resize(nz + 1, g.N);
  for (int i = 0; i <= nz; ++i) {
    const double zp1 = r.z[i] + 1.0, w = r.w[i];
    for (int j = 0; j < g.N; ++j) {
      const double h = H + eta[j], d = deta_[j];
      c11_(i, j) = w * h;
      c12_(i, j) = -w * zp1 * d;
      c22_(i, j) = w * (1.0 + zp1 * zp1 * d * d) / h;
      c00_(i, j) = w * k * k * h;
    }
  }
}

double StripProblem::min_det_P() const {
  const Grid1D& g = dn_.grid();
  const auto& r = dn_.rule();
  double m = 1e300;
  for (int i = 0; i < r.z.size(); ++i)
    for (int j = 0; j < g.N; ++j) {
      const double p11 = c11_(i, j) / r.w[i], p12 = c12_(i, j) / r.w[i], p22 = c22_(i, j) / r.w[i];
      m = std::min(m, p11 * p22 - p12 * p12);
    }
  return m;
}

namespace {

void dx_rows(const Grid1D& g, const RowMat& u, RowMat& out) {
  CRowMat h;
  forward_rows(g, u, h);
  const int nc = g.N / 2 + 1;
  for (int m = 0; m < nc; ++m) {
    const cplx ik(0.0, m == nc - 1 ? 0.0 : g.xi(m));
    h.col(m) *= ik;
  }
  inverse_rows(g, h, out);
}

}  // namespace

RowMat StripProblem::apply_form(const RowMat& u) const {
  const Grid1D& g = dn_.grid();
  const auto& D = dn_.rule().D;
  RowMat ux;
  dx_rows(g, u, ux);
  RowMat uz = D * u;
  RowMat fx = c11_.cwiseProduct(ux) + c12_.cwiseProduct(uz);
  RowMat fz = c12_.cwiseProduct(ux) + c22_.cwiseProduct(uz);
  RowMat dfx;
  dx_rows(g, fx, dfx);
  RowMat out = D.transpose() * fz - dfx;
  if (k_ != 0.0) out += c00_.cwiseProduct(u);
  return out;
}

RowMat StripProblem::precondition(const RowMat& r) const {
  const Grid1D& g = dn_.grid();
  const int nz = dn_.config().Nz, nc = g.N / 2 + 1;
  const auto& V = dn_.vertical();
  RowMat ri = r.topRows(nz);
  CRowMat rh;
  forward_rows(g, ri, rh);
  Mat re = V.S.transpose() * rh.real();
  Mat im = V.S.transpose() * rh.imag();
  for (int m = 0; m < nc; ++m) {
    const double xe = dn_.xi_eff(m);
    const double a = Heff_ * (xe * xe + k_ * k_);
    for (int l = 0; l < nz; ++l) {
      const double s = 1.0 / (a + V.lambda[l] / Heff_);
      re(l, m) *= s;
      im(l, m) *= s;
    }
  }
  CRowMat xh(nz, nc);
  xh.real() = V.S * re;
  xh.imag() = V.S * im;
  RowMat xi;
  inverse_rows(g, xh, xi);
  RowMat out = RowMat::Zero(nz + 1, g.N);
  out.topRows(nz) = xi;
  return out;
}

void StripProblem::cg(RowMat& u, const RowMat& b, double tol, double ref, SolveStats* stats) const {
  const int nz = dn_.config().Nz;
  RowMat r = b - apply_form(u);
  r.row(nz).setZero();
  double rn = r.norm();
  const double target = tol * std::max(ref, 1e-300);
  int it = 0;
  if (rn > target) {
    RowMat z = precondition(r);
    RowMat p = z;
    double rz = (r.cwiseProduct(z)).sum();
    for (it = 1; it <= dn_.config().max_iter; ++it) {
      RowMat Ap = apply_form(p);
      Ap.row(nz).setZero();
      const double alpha = rz / (p.cwiseProduct(Ap)).sum();
      u += alpha * p;
      r -= alpha * Ap;
      rn = r.norm();
      if (rn <= target) break;
      z = precondition(r);
      const double rz_new = (r.cwiseProduct(z)).sum();
      p = z + (rz_new / rz) * p;
      rz = rz_new;
    }
    if (it > dn_.config().max_iter)
      throw SolverFailure("strip CG did not converge", rn / std::max(ref, 1e-300));
  }
  if (stats) {
    stats->iterations = it;
    stats->residual = rn / std::max(ref, 1e-300);
  }
}

StripField StripProblem::solve_correction(const StripField& phi0, double tol, SolveStats* stats) const {
  const int nz = dn_.config().Nz;
  RowMat Aphi = apply_form(phi0.values);
  const double ref = Aphi.norm();
  RowMat b = -Aphi;
  b.row(nz).setZero();
  RowMat u = RowMat::Zero(nz + 1, dn_.grid().N);
  cg(u, b, tol, ref, stats);
  return StripField{dn_.grid(), nz, u};
}

StripField StripProblem::solve(const Vec& psi, SolveStats* stats) const {
  if (psi.size() != dn_.grid().N) throw InvalidArgument("psi does not match the grid");
  StripField phi0 = dn_.harmonic_lift(psi, k_);
  StripField u = solve_correction(phi0, dn_.config().tol, stats);
  phi0.values += u.values;
  return phi0;
}

double StripProblem::interior_residual(const StripField& phi) const {
  RowMat A = apply_form(phi.values);
  return A.topRows(A.rows() - 1).cwiseAbs().maxCoeff();
}

Vec StripProblem::dn_from_strip(const RowMat& phi, const Vec& psi) const {
  const Grid1D& g = dn_.grid();
  const int nz = dn_.config().Nz, h = g.N / 2;
  Vec top = apply_form(phi).row(nz).transpose();
  CVec th = forward(g, top);
  if (dn_.config().flat_correction) {
    CVec ph = forward(g, psi);
    for (int m = 0; m < h; ++m)
      th[m] += (dn_.exact_symbol(g.xi(m), k_) - dn_.discrete_flat_symbol(m, k_)) * ph[m];
  }
  th[h] = 0.0;
  // G[η] annihilates constants and is symmetric, so its range is mean free.
  if (k_ == 0.0) th[0] = 0.0;
  return inverse(g, th);
}

Vec StripProblem::apply(const Vec& psi, SolveStats* stats) const {
  StripField phi = solve(psi, stats);
  return dn_from_strip(phi.values, psi);
}

Vec StripProblem::apply(const Vec& psi, double ramp_amp, SolveStats* stats) const {
  if (ramp_amp != 0.0 && k_ != 0.0)
    throw InvalidArgument("ramp carrier is only defined for the k = 0 problem");
  Vec out = apply(psi, stats);
  // G[η] x = -∂xη exactly (x is harmonic with zero bottom flux).
  out -= ramp_amp * (2.0 / dn_.grid().L) * deta_;
  return out;
}

// ---------------------------------------------------------------------------

GoodUnknowns good_unknowns(const DirichletNeumann& dn, const Vec& eta, const Vec& psi, double ramp_amp) {
  const Grid1D& g = dn.grid();
  Vec G = dn.apply(eta, psi, ramp_amp);
  Vec de = deriv(g, eta);
  Vec dp = deriv(g, psi);
  dp.array() += ramp_amp * 2.0 / g.L;
  GoodUnknowns r;
  r.Z = ((G.array() + de.array() * dp.array()) / (1.0 + de.array().square())).matrix();
  r.v = (dp.array() - r.Z.array() * de.array()).matrix();
  return r;
}

Vec shape_derivative(const DirichletNeumann& dn, const Vec& eta, const Vec& psi, double ramp_amp,
                     const Vec& zeta) {
  const Grid1D& g = dn.grid();
  GoodUnknowns gu = good_unknowns(dn, eta, psi, ramp_amp);
  Vec zZ = zeta.cwiseProduct(gu.Z);
  Vec vz = zeta.cwiseProduct(gu.v);
  return -dn.apply(eta, zZ) - deriv(g, vz);
}

DecayFit fit_decay(const Grid1D& g, const Vec& f, double center) {
  std::vector<double> xs, ys;
  for (int j = 0; j < g.N; ++j) {
    double d = std::fabs(g.x(j) - center);
    d = std::fmod(d, g.L);
    if (d > 0.5 * g.L) d = g.L - d;
    if (d < 0.05 * g.L || d > 0.35 * g.L) continue;
    const double a = std::fabs(f[j]);
    if (!(a >= 1e-13)) continue;
    xs.push_back(d);
    ys.push_back(std::log(a));
  }
  if (xs.size() < 8) throw InsufficientDecayData("fewer than 8 usable points in the decay window");
  const int n = static_cast<int>(xs.size());
  double sx = 0, sy = 0, sxx = 0, sxy = 0;
  for (int i = 0; i < n; ++i) {
    sx += xs[i];
    sy += ys[i];
    sxx += xs[i] * xs[i];
    sxy += xs[i] * ys[i];
  }
  DecayFit fit;
  fit.points = n;
  fit.rate = (n * sxy - sx * sy) / (n * sxx - sx * sx);
  fit.intercept = (sy - fit.rate * sx) / n;
  const double my = sy / n;
  double ss_tot = 0, ss_res = 0;
  for (int i = 0; i < n; ++i) {
    const double p = fit.intercept + fit.rate * xs[i];
    ss_res += (ys[i] - p) * (ys[i] - p);
    ss_tot += (ys[i] - my) * (ys[i] - my);
  }
  fit.r2 = ss_tot > 0 ? 1.0 - ss_res / ss_tot : 1.0;
  return fit;
}

DecayFit decay_profile(const DirichletNeumann& dn, const Vec& eta, const Vec& psi, double ramp_amp,
                       double center) {
  return fit_decay(dn.grid(), dn.apply(eta, psi, ramp_amp), center);
}

}  // namespace wwlab
