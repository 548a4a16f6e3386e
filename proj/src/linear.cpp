#include "wwlab/linear.hpp"

#include <algorithm>
#include <cmath>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

namespace wwlab {

FourierBasis::FourierBasis(const Grid1D& g) : g_(g), n_(g.N - 1), fine_(make_grid(g.L, 2 * g.N)) {
  auto fill = [&](const Grid1D& grid, Mat& M) {
    M.resize(grid.N, n_);
    const double c0 = 1.0 / std::sqrt(g_.L), c1 = std::sqrt(2.0 / g_.L);
    for (int j = 0; j < grid.N; ++j) {
      const double x = grid.x(j);
      M(j, 0) = c0;
      for (int m = 1; m < g_.N / 2; ++m) {
        M(j, 2 * m - 1) = c1 * std::cos(g_.xi(m) * x);
        M(j, 2 * m) = c1 * std::sin(g_.xi(m) * x);
      }
    }
  };
  fill(g_, B_);
  fill(fine_, Bf_);
  D_ = Mat::Zero(n_, n_);
  for (int m = 1; m < g_.N / 2; ++m) {
    D_(2 * m, 2 * m - 1) = -g_.xi(m);
    D_(2 * m - 1, 2 * m) = g_.xi(m);
  }
}

double FourierBasis::xi_of(int i) const { return g_.xi((i + 1) / 2); }

Vec FourierBasis::analyse(const Vec& f) const {
  if (f.size() != g_.N) throw InvalidArgument("field length does not match the basis grid");
  return g_.dx() * (B_.transpose() * f);
}

Vec FourierBasis::synthesise(const Vec& a) const { return B_ * a; }

Mat FourierBasis::multiplication(const Vec& a) const {
  Vec af = resample(g_, a, fine_) * fine_.dx();
  return Bf_.transpose() * af.asDiagonal() * Bf_;
}

WaveCoefficients wave_coefficients(const DirichletNeumann& dn, const SolitaryWave& Q) {
  const Grid1D& g = Q.U.grid;
  WaveCoefficients w;
  w.c = Q.c;
  w.g = Q.params.g;
  w.b = Q.params.b;
  w.deta = deriv(g, Q.U.eta);
  GoodUnknowns gu = good_unknowns(dn, Q.U.eta, Q.U.phi_periodic, Q.U.phi_ramp_amp);
  w.Z = gu.Z;
  w.v = gu.v;
  w.dZ = deriv(g, w.Z);
  w.dv = deriv(g, w.v);
  const Eigen::ArrayXd s = 1.0 + w.deta.array().square();
  w.q3 = s.pow(-1.5).matrix();
  w.q1 = s.rsqrt().matrix();
  w.dphi = reconstruct_dphi(Q.U);
  return w;
}

double OperatorMatrix::symmetry_defect() const {
  const double s = A.cwiseAbs().maxCoeff();
  return s > 0 ? (A - A.transpose()).cwiseAbs().maxCoeff() / s : 0.0;
}

Mat dn_matrix(const DirichletNeumann& dn, const FourierBasis& B, const Vec& eta, double k) {
  StripProblem sp(dn, eta, k);
  const int n = B.size();
  Mat G(n, n);
  for (int j = 0; j < n; ++j) G.col(j) = B.analyse(sp.apply(B.values().col(j)));
  return G;
}

namespace {

struct Blocks {
  Mat a11, a12, a21, a22;
  Mat assemble(int n) const {
    Mat A(2 * n, 2 * n);
    A << a11, a12, a21, a22;
    return A;
  }
};

Vec shifted(const Vec& v, double c) { return (v.array() - c).matrix(); }

Blocks l_form(const FourierBasis& B, double b, double g, const Vec& q3, const Vec& a, const Vec& w,
              const Mat& G) {
  const int n = B.size();
  const Mat& D = B.derivative();
  Mat Mw = B.multiplication(w);
  Blocks r;
  r.a11 = b * D.transpose() * B.multiplication(q3) * D + g * Mat::Identity(n, n) + B.multiplication(a);
  r.a12 = Mw * D;
  r.a21 = D.transpose() * Mw;
  r.a22 = G;
  return r;
}

Blocks lambda_form(const FourierBasis& B, double b, double g, const Vec& q3, const Vec& Z, const Vec& Zdv,
                   const Vec& w, const Mat& G) {
  const Mat MZ = B.multiplication(Z);
  Blocks r = l_form(B, b, g, q3, Zdv, w, G);
  r.a11 += MZ * G * MZ;
  r.a12 -= MZ * G;
  r.a21 -= G * MZ;
  return r;
}

// L_c: [[-P + g + (v-c)Z', (v-c)∂x], [-∂x((v-c)·), G]]
Blocks lc_blocks(const FourierBasis& B, const WaveCoefficients& w, const Mat& G) {
  const Vec vc = shifted(w.v, w.c);
  return l_form(B, w.b, w.g, w.q3, vc.cwiseProduct(w.dZ), vc, G);
}

// Λ_c: [[-P + g + ZG(Z·) + Zv', (v-c)∂x - ZG], [-∂x((v-c)·) - G(Z·), G]]
Blocks lambda_blocks(const FourierBasis& B, const WaveCoefficients& w, const Mat& G) {
  return lambda_form(B, w.b, w.g, w.q3, w.Z, w.Z.cwiseProduct(w.dv), shifted(w.v, w.c), G);
}

Mat conjugate(const Mat& Lambda, const Mat& MZ, int n) {
  Mat Rinv = Mat::Identity(2 * n, 2 * n);
  Rinv.block(n, 0, n, n) = MZ;
  return Rinv.transpose() * Lambda * Rinv;
}

double rel_fro(const Mat& A, const Mat& B) { return (A - B).norm() / B.norm(); }

WaveCoefficients resample_coeffs(const WaveCoefficients& w, const Grid1D& from, const Grid1D& to) {
  WaveCoefficients r = w;
  auto rs = [&](const Vec& f) { return resample(from, f, to); };
  r.deta = rs(w.deta);
  r.Z = rs(w.Z);
  r.v = rs(w.v);
  r.dZ = rs(w.dZ);
  r.dv = rs(w.dv);
  r.q3 = rs(w.q3);
  r.q1 = rs(w.q1);
  r.dphi = rs(w.dphi);
  return r;
}

double e0_coeffs(const Vec& u, int n) { return u.head(n).norm() + u.tail(n).norm(); }

}  // namespace

Mat assemble_l_form(const FourierBasis& B, double b, double g, const Vec& q3, const Vec& a, const Vec& w,
                    const Mat& G) {
  return l_form(B, b, g, q3, a, w, G).assemble(B.size());
}

Mat assemble_lambda_form(const FourierBasis& B, double b, double g, const Vec& q3, const Vec& Z,
                         const Vec& Zdv, const Vec& w, const Mat& G) {
  return lambda_form(B, b, g, q3, Z, Zdv, w, G).assemble(B.size());
}

OperatorMatrix assemble_Lambda(const DirichletNeumann& dn, const FourierBasis& B, const SolitaryWave& Q) {
  WaveCoefficients w = wave_coefficients(dn, Q);
  Mat G = dn_matrix(dn, B, Q.U.eta);
  OperatorMatrix op{"Lambda_c", lambda_blocks(B, w, G).assemble(B.size()), B.size(), 0.0, B.grid()};
  return op;
}

OperatorMatrix assemble_Lc(const DirichletNeumann& dn, const FourierBasis& B, const SolitaryWave& Q) {
  WaveCoefficients w = wave_coefficients(dn, Q);
  Mat G = dn_matrix(dn, B, Q.U.eta);
  OperatorMatrix op{"L_c", lc_blocks(B, w, G).assemble(B.size()), B.size(), 0.0, B.grid()};
  return op;
}

Mat assemble_R(const FourierBasis& B, const WaveCoefficients& w, bool inverse) {
  const int n = B.size();
  Mat R = Mat::Identity(2 * n, 2 * n);
  R.block(n, 0, n, n) = (inverse ? 1.0 : -1.0) * B.multiplication(w.Z);
  return R;
}

ConjugationCheck check_conjugation(const DirichletNeumann& dn, const SolitaryWave& Q) {
  const Grid1D& g = Q.U.grid;
  FourierBasis B(g);
  const int n = B.size();
  WaveCoefficients w = wave_coefficients(dn, Q);
  Mat G = dn_matrix(dn, B, Q.U.eta);
  Mat L = lc_blocks(B, w, G).assemble(n);

  ConjugationCheck r;
  Mat Lt = conjugate(lambda_blocks(B, w, G).assemble(n), B.multiplication(w.Z), n);
  r.truncated_defect = rel_fro(Lt, L);

  // Same identity with the products formed on a basis twice as large. G is
  // embedded on the resolved modes; its contributions cancel exactly.
  Grid1D g2 = make_grid(g.L, 2 * g.N);
  FourierBasis B2(g2);
  const int n2 = B2.size();
  WaveCoefficients w2 = resample_coeffs(w, g, g2);
  Mat G2 = Mat::Zero(n2, n2);
  G2.topLeftCorner(n, n) = G;
  Mat Lp = conjugate(lambda_blocks(B2, w2, G2).assemble(n2), B2.multiplication(w2.Z), n2);
  Mat low(2 * n, 2 * n);
  low << Lp.block(0, 0, n, n), Lp.block(0, n2, n, n), Lp.block(n2, 0, n, n), Lp.block(n2, n2, n, n);
  r.padded_defect = rel_fro(low, L);
  return r;
}

Mat symplectic_J(int n) {
  Mat J = Mat::Zero(2 * n, 2 * n);
  J.block(0, n, n, n) = Mat::Identity(n, n);
  J.block(n, 0, n, n) = -Mat::Identity(n, n);
  return J;
}

Vec x0_gram(const FourierBasis& B) {
  const int n = B.size();
  Vec d(2 * n);
  for (int i = 0; i < n; ++i) {
    const double k = B.xi_of(i);
    d[i] = 1.0 + k * k;
    d[n + i] = k * k / std::sqrt(1.0 + k * k);
  }
  return d;
}

double x0_norm_coeffs(const FourierBasis& B, const Vec& u) {
  const int n = B.size();
  Vec d = x0_gram(B);
  double a = 0.0, b = 0.0;
  for (int i = 0; i < n; ++i) {
    a += d[i] * u[i] * u[i];
    b += d[n + i] * u[n + i] * u[n + i];
  }
  return std::sqrt(a) + std::sqrt(b);
}

Vec lambda_on_ramp(const FourierBasis& B, const WaveCoefficients& w) {
  const int n = B.size();
  const double s = 2.0 / B.grid().L;
  Vec r(2 * n);
  r.head(n) = B.analyse(s * (shifted(w.v, w.c) + w.Z.cwiseProduct(w.deta)));
  r.tail(n) = B.analyse(-s * w.deta);
  return r;
}

KernelReport kernel_identities(const DirichletNeumann& dn, const SolitaryWave& Q, const SpeedDerivative& dQ) {
  const Grid1D& g = Q.U.grid;
  FourierBasis B(g);
  const int n = B.size();
  WaveCoefficients w = wave_coefficients(dn, Q);
  Mat G = dn_matrix(dn, B, Q.U.eta);
  Mat Lam = lambda_blocks(B, w, G).assemble(n);
  Mat L = lc_blocks(B, w, G).assemble(n);
  auto stack = [&](const Vec& a, const Vec& b) {
    Vec u(2 * n);
    u << B.analyse(a), B.analyse(b);
    return u;
  };
  KernelReport r;
  Vec dx = stack(w.deta, w.dphi);
  r.dx_norm = e0_coeffs(dx, n);
  r.op_norm = Lam.cwiseAbs().maxCoeff();
  r.lambda_dx = e0_coeffs(Lam * dx, n);
  r.lc_rdx = e0_coeffs(L * stack(w.deta, w.v), n);
  Vec dc = stack(dQ.deta, dQ.dphi_periodic);
  Vec lhs = Lam * dc + dQ.dphi_ramp * lambda_on_ramp(B, w);
  const Vec jdx = stack(w.dphi, -w.deta);
  r.jdx_norm = e0_coeffs(jdx, n);
  r.lambda_dc = e0_coeffs(lhs - jdx, n);
  return r;
}

DispersionCheck dispersion_symbol(const PhysicalParams& p, double c, const Vec& xi) {
  DispersionCheck r;
  r.m.resize(xi.size());
  for (int i = 0; i < xi.size(); ++i) {
    const double k = std::fabs(xi[i]);
    const double y = p.H * k;
    const double ratio = y < 1e-8 ? 1.0 + y * y / 3.0 : y / std::tanh(y);  // y/tanh y
    r.m[i] = p.b * k * k + p.g - c * c / p.H * ratio;
  }
  r.min_value = xi.size() ? r.m.minCoeff() : 0.0;
  r.positive = r.min_value > 0.0;
  return r;
}

StableDecomposition stable_decomposition(const Vec& U1, const Vec& U2, const WaveCoefficients& w,
                                         const Grid1D& g) {
  const double ne = inner(g, w.deta, w.deta);
  if (!(ne > 0.0)) throw InvalidArgument("degenerate wave: |∂xη| = 0");
  // W = R∂xQ = (η', v), JW = (v, -η').
  const Vec& W1 = w.deta;
  const Vec& W2 = w.v;
  Vec JW1 = w.v, JW2 = -w.deta;
  StableDecomposition d;
  d.U1 = U1;
  d.U2 = U2;
  const double njw = inner(g, JW1, JW1) + inner(g, JW2, JW2);
  d.alpha = (inner(g, U1, JW1) + inner(g, U2, JW2)) / njw;
  d.beta = (inner(g, U1, w.deta) - d.alpha * inner(g, JW1, w.deta)) / ne;
  d.V1 = U1 - d.alpha * JW1 - d.beta * W1;
  d.V2 = U2 - d.alpha * JW2 - d.beta * W2;
  d.orth_jw = inner(g, d.V1, JW1) + inner(g, d.V2, JW2);
  d.orth_deta = inner(g, d.V1, w.deta);
  Vec r1 = d.alpha * JW1 + d.beta * W1 + d.V1 - U1;
  Vec r2 = d.alpha * JW2 + d.beta * W2 + d.V2 - U2;
  d.reconstruction = std::max(r1.cwiseAbs().maxCoeff(), r2.cwiseAbs().maxCoeff());
  return d;
}

CoercivityResult coercivity_rayleigh(const OperatorMatrix& Lc, const FourierBasis& B,
                                     const WaveCoefficients& w) {
  const int n = B.size();
  const int m = 2 * n - 1;
  // Drop the constant mode of U2, the direction (0, 1) on which the X⁰
  // seminorm vanishes.
  std::vector<int> keep;
  for (int i = 0; i < 2 * n; ++i)
    if (i != n) keep.push_back(i);
  Vec gram = x0_gram(B);
  Mat Ls = 0.5 * (Lc.A + Lc.A.transpose());
  Mat A(m, m);
  Vec s(m);
  for (int i = 0; i < m; ++i) {
    if (!(gram[keep[i]] > 0.0)) throw NumericalDomainError("X0 Gram matrix is not positive after the quotient");
    s[i] = 1.0 / std::sqrt(gram[keep[i]]);
  }
  for (int i = 0; i < m; ++i)
    for (int j = 0; j < m; ++j) A(i, j) = s[i] * Ls(keep[i], keep[j]) * s[j];

  CoercivityResult r;
  Eigen::SelfAdjointEigenSolver<Mat> full(A, Eigen::EigenvaluesOnly);
  const Vec& ev = full.eigenvalues();
  r.tol = 1e-8 * ev.cwiseAbs().maxCoeff();
  for (int i = 0; i < std::min<int>(6, m); ++i) r.lowest.push_back(ev[i]);
  for (int i = 0; i < m; ++i)
    if (ev[i] <= r.tol) ++r.nonpositive;

  // Constraints (U, JR∂xQ) = 0 and (U1, ∂xη) = 0 in the scaled variables.
  Vec c1(2 * n), c2 = Vec::Zero(2 * n);
  c1 << B.analyse(w.v), B.analyse(-w.deta);
  c2.head(n) = B.analyse(w.deta);
  Mat C(m, 2);
  for (int i = 0; i < m; ++i) {
    C(i, 0) = s[i] * c1[keep[i]];
    C(i, 1) = s[i] * c2[keep[i]];
  }
  Eigen::HouseholderQR<Mat> qr(C);
  Mat Q = qr.householderQ();
  Mat P = Q.rightCols(m - 2);
  Eigen::SelfAdjointEigenSolver<Mat> con(P.transpose() * A * P);
  r.min_constrained = con.eigenvalues()[0];
  Vec y = P * con.eigenvectors().col(0);
  r.minimizer = Vec::Zero(2 * n);
  for (int i = 0; i < m; ++i) r.minimizer[keep[i]] = s[i] * y[i];
  return r;
}

namespace {
double slope(const std::vector<double>& x, const std::vector<double>& y) {
  const int n = static_cast<int>(x.size());
  double mx = 0, my = 0;
  for (int i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= n;
  my /= n;
  double sxy = 0, sxx = 0;
  for (int i = 0; i < n; ++i) {
    sxy += (x[i] - mx) * (y[i] - my);
    sxx += (x[i] - mx) * (x[i] - mx);
  }
  return sxx > 0 ? sxy / sxx : 0.0;
}
}  // namespace

LinearEvolution evolve_linear(const OperatorMatrix& L, const FourierBasis& B, const Vec& U0, double T,
                              double dt, int record_every) {
  if (!(dt > 0.0) || !(T >= 0.0)) throw InvalidArgument("evolve_linear needs dt > 0 and T >= 0");
  const int n = L.n;
  if (U0.size() != 2 * n) throw InvalidArgument("initial data size does not match the operator");
  Mat A = symplectic_J(n) * L.A;
  const int steps = static_cast<int>(std::llround(T / dt));
  LinearEvolution out;
  Vec u = U0;
  const double n0 = x0_norm_coeffs(B, U0);
  if (!(n0 > 0.0)) throw InvalidArgument("initial data has zero X0 norm");
  auto rec = [&](int s) {
    const double t = s * dt;
    const double nu = x0_norm_coeffs(B, u);
    out.t.push_back(t);
    out.norm.push_back(nu);
    out.C = std::max(out.C, nu / ((1.0 + t) * n0));
  };
  rec(0);
  for (int s = 1; s <= steps; ++s) {
    Vec k1 = A * u;
    Vec k2 = A * (u + 0.5 * dt * k1);
    Vec k3 = A * (u + 0.5 * dt * k2);
    Vec k4 = A * (u + dt * k3);
    u += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!u.allFinite()) throw SolverFailure("NaN in linear evolution", static_cast<double>(s) * dt);
    if (s % record_every == 0 || s == steps) rec(s);
  }
  std::vector<double> lt, ln, tt;
  for (size_t i = out.t.size() / 2; i < out.t.size(); ++i) {
    if (out.t[i] <= 0.0) continue;
    lt.push_back(std::log(out.t[i]));
    tt.push_back(out.t[i]);
    ln.push_back(std::log(out.norm[i]));
  }
  if (lt.size() >= 2) {
    out.log_exponent = slope(lt, ln);
    out.exp_rate = slope(tt, ln);
  }
  out.final_state = u;
  return out;
}

SolitaryWave scaled_wave(const DirichletNeumann& dn_unit, const PhysicalParams& p, double eps,
                         const NewtonOptions& opt) {
  if (dn_unit.depth() != 1.0) throw InvalidArgument("scaled wave needs a unit-depth DN operator");
  const double c = p.speed(eps);
  PhysicalParams ps;
  ps.g = p.alpha(c);
  ps.b = p.beta(c);
  ps.H = 1.0;
  return solitary_wave(dn_unit, ps, eps, opt);
}

namespace {
// L(k) = L_c of the scaled wave plus βk²(1+η'²)^{-1/2} in the first block
// and G_k in place of G.
struct LkAssembler {
  const DirichletNeumann& dn;
  FourierBasis B;
  WaveCoefficients w;
  Blocks base;
  Mat Mq1;
  Vec eta;
  LkAssembler(const DirichletNeumann& d, const SolitaryWave& Qs)
      : dn(d), B(Qs.U.grid), w(wave_coefficients(d, Qs)), eta(Qs.U.eta) {
    base = lc_blocks(B, w, Mat::Zero(B.size(), B.size()));
    Mq1 = B.multiplication(w.q1);
  }
  OperatorMatrix operator()(double k) const {
    Blocks b = base;
    b.a11 += w.b * k * k * Mq1;
    b.a22 = dn_matrix(dn, B, eta, k);
    return OperatorMatrix{"L(k)", b.assemble(B.size()), B.size(), k, B.grid()};
  }
};
}  // namespace

OperatorMatrix assemble_Lk(const DirichletNeumann& dn, const FourierBasis& B, const SolitaryWave& Qs,
                           double k) {
  if (std::fabs(Qs.c - 1.0) > 1e-12) throw InvalidArgument("L(k) needs the scaled wave (c = 1)");
  if (B.grid() != Qs.U.grid) throw InvalidArgument("basis grid differs from the wave grid");
  return LkAssembler(dn, Qs)(k);
}

SpectrumResult spectrum_JL(const OperatorMatrix& L) {
  Mat A = symplectic_J(L.n) * L.A;
  Eigen::EigenSolver<Mat> es(A, false);
  SpectrumResult r;
  r.k = L.k;
  const auto& ev = es.eigenvalues();
  r.eigenvalues.assign(ev.data(), ev.data() + ev.size());
  r.max_real = -1e300;
  for (const cplx& s : r.eigenvalues) {
    r.max_real = std::max(r.max_real, s.real());
    r.scale = std::max(r.scale, std::abs(s));
  }
  // Sorting by real part keeps the nearest-partner search cheap enough.
  std::vector<cplx> sorted = r.eigenvalues;
  std::sort(sorted.begin(), sorted.end(), [](cplx a, cplx b) { return a.real() < b.real(); });
  for (const cplx& s : r.eigenvalues) {
    double best = 1e300;
    for (const cplx& t : sorted) best = std::min(best, std::abs(t + s));
    r.pm_symmetry = std::max(r.pm_symmetry, best);
  }
  return r;
}

namespace {
struct Unstable {
  double sigma = 0.0, imag = 0.0;
  std::vector<cplx> others;
};
Unstable extract_unstable(const SpectrumResult& s, double real_tol) {
  Unstable u;
  for (const cplx& e : s.eigenvalues) {
    if (e.real() <= real_tol * s.scale) continue;
    if (std::fabs(e.imag()) <= 1e-6 * s.scale) {
      if (e.real() > u.sigma) {
        if (u.sigma > 0.0) u.others.push_back(cplx(u.sigma, u.imag));
        u.sigma = e.real();
        u.imag = e.imag();
      } else {
        u.others.push_back(e);
      }
    } else {
      u.others.push_back(e);
    }
  }
  return u;
}
}  // namespace

TransverseScan transverse_scan(const PhysicalParams& p, double eps, double L, int N, const std::vector<double>& ks,
                               double real_tol) {
  if (N % 4 != 0) throw InvalidArgument("transverse scan needs N divisible by 4 (for the 1.5N check)");
  const double Ls = L / p.H;
  Grid1D g1 = make_grid(Ls, N), g2 = make_grid(Ls, 3 * N / 2);
  DirichletNeumann dn1(g1, 1.0), dn2(g2, 1.0);
  SolitaryWave q1 = scaled_wave(dn1, p, eps), q2 = scaled_wave(dn2, p, eps);
  LkAssembler a1(dn1, q1), a2(dn2, q2);
  TransverseScan scan;
  for (double k : ks) {
    TransversePoint pt;
    pt.k = k;
    SpectrumResult s1 = spectrum_JL(a1(k));
    SpectrumResult sm = spectrum_JL(a1(-k));
    SpectrumResult s2 = spectrum_JL(a2(k));
    Unstable u1 = extract_unstable(s1, real_tol), um = extract_unstable(sm, real_tol),
             u2 = extract_unstable(s2, real_tol);
    pt.sigma = u1.sigma;
    pt.imag = u1.imag;
    pt.sigma_minus = um.sigma;
    pt.sigma_fine = u2.sigma;
    pt.pm_symmetry = std::max(s1.pm_symmetry, s2.pm_symmetry);
    if (u1.sigma > 0.0)
      pt.converged = std::fabs(u2.sigma - u1.sigma) < 0.1 * u1.sigma;
    else
      pt.converged = u2.sigma == 0.0;
    pt.spurious = u1.others;
    if (u1.sigma > 0.0 && !pt.converged) pt.spurious.push_back(cplx(u1.sigma, u1.imag));
    scan.points.push_back(pt);
  }
  for (const auto& pt : scan.points)
    if (pt.sigma > 0.0 && pt.converged && pt.k != 0.0) {
      scan.branch_exists = true;
      scan.k_max_unstable = std::max(scan.k_max_unstable, std::fabs(pt.k));
    }
  int beyond = 0;
  bool all_stable = true;
  for (const auto& pt : scan.points) {
    if (std::fabs(pt.k) <= scan.k_max_unstable) continue;
    ++beyond;
    if (pt.sigma > 0.0) all_stable = false;
  }
  scan.vanishes_beyond = scan.branch_exists && beyond > 0 && all_stable;
  return scan;
}

}  // namespace wwlab
