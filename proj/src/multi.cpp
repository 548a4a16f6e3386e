#include "wwlab/multi.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>

#include "wwlab/evolution.hpp"
#include "wwlab/parallel.hpp"

namespace wwlab {

namespace {

bool is_zero_wave(const SolitaryWave& Q) { return Q.U.eta.size() == 0 || Q.U.eta.cwiseAbs().maxCoeff() == 0.0; }

double l2(const Grid1D& g, const Vec& f) { return l2_norm(g, f); }

// Pieces of the nonlinear φ equation.
// N = ½(G + φ'η')²/(1+η'²), K = b∂x(η'/√(1+η'²)).
Vec n_term(const Vec& G, const Vec& dphi, const Vec& de) {
  const Eigen::ArrayXd q = G.array() + dphi.array() * de.array();
  return (0.5 * q.square() / (1.0 + de.array().square())).matrix();
}

Vec k_term(const Grid1D& g, double b, const Vec& de) {
  const Eigen::ArrayXd s = 1.0 + de.array().square();
  return b * deriv(g, (de.array() / s.sqrt()).matrix());
}

SurfaceState sum_states(const SurfaceState& a, const SurfaceState& b) {
  SurfaceState M = a;
  M.eta += b.eta;
  M.phi_periodic += b.phi_periodic;
  M.phi_ramp_amp += b.phi_ramp_amp;
  return M;
}

const PhysicalParams& params_of(const TwoSolitonConfig& cfg) {
  return is_zero_wave(cfg.wave1) ? cfg.wave2.params : cfg.wave1.params;
}

// Field of the superposition with wave centres at (y1, y2).
SurfaceState state_at(const TwoSolitonConfig& cfg, double y1, double y2) {
  auto [a, b] = place_waves(cfg, y1, y2);
  return sum_states(a.U, b.U);
}

// R_M and its lab time derivative for waves already placed on the grid.
ResidualRM residual_placed(const DirichletNeumann& dn, const SolitaryWave& Q1, const SolitaryWave& Q2,
                           const PhysicalParams& p) {
  const Grid1D& g = Q1.U.grid;
  const double c1 = Q1.c, c2 = Q2.c, b = p.b;
  const Vec& e1 = Q1.U.eta;
  const Vec& e2 = Q2.U.eta;
  const Vec eM = e1 + e2;
  StripProblem s1(dn, e1), s2(dn, e2), sM(dn, eM);
  const Vec G1 = s1.apply(Q1.U.phi_periodic, Q1.U.phi_ramp_amp);
  const Vec G2 = s2.apply(Q2.U.phi_periodic, Q2.U.phi_ramp_amp);
  const Vec GM = sM.apply(Q1.U.phi_periodic + Q2.U.phi_periodic, Q1.U.phi_ramp_amp + Q2.U.phi_ramp_amp);
  const Vec GM1 = sM.apply(Q1.U.phi_periodic, Q1.U.phi_ramp_amp);
  const Vec GM2 = sM.apply(Q2.U.phi_periodic, Q2.U.phi_ramp_amp);

  const Vec d1 = reconstruct_dphi(Q1.U), d2 = reconstruct_dphi(Q2.U), dM = d1 + d2;
  const Vec de1 = deriv(g, e1), de2 = deriv(g, e2), deM = de1 + de2;

  ResidualRM r;
  r.R1 = G1 + G2 - GM;
  r.defect_check = (r.R1 - (-c1 * de1 - c2 * de2 - (GM1 + GM2))).cwiseAbs().maxCoeff();
  // the single-solve and split forms of G[η_M]φ_M must agree
  r.defect_check = std::max(r.defect_check, (GM - GM1 - GM2).cwiseAbs().maxCoeff());

  const Vec N1 = n_term(G1, d1, de1), N2 = n_term(G2, d2, de2), NM = n_term(GM, dM, deM);
  const Vec K1 = k_term(g, b, de1), K2 = k_term(g, b, de2), KM = k_term(g, b, deM);
  r.R21 = drop_nyquist(g, d1.cwiseProduct(d2));
  r.R22 = drop_nyquist(g, -NM + N1 + N2);
  r.R23 = drop_nyquist(g, -KM + K1 + K2);
  r.R2 = r.R21 + r.R22 + r.R23;

  // Lab time derivatives with ∂tQ_i = -c_i ∂xQ_i.
  const Vec eMt = -c1 * de1 - c2 * de2;
  const Vec phiMt = -c1 * d1 - c2 * d2;
  const Eigen::ArrayXd sM2 = 1.0 + deM.array().square();
  const Vec ZM = ((GM.array() + dM.array() * deM.array()) / sM2).matrix();
  const Vec vM = dM - ZM.cwiseProduct(deM);
  const Vec GMt = sM.apply(drop_mean(g, phiMt - eMt.cwiseProduct(ZM))) - deriv(g, vM.cwiseProduct(eMt));
  // G[η](const) = 0, so removing the mean above is exact
  const Vec G1t = -c1 * deriv(g, G1), G2t = -c2 * deriv(g, G2);
  r.dR1 = G1t + G2t - GMt;

  const Vec deMt = deriv(g, eMt), dMt = deriv(g, phiMt);
  const Eigen::ArrayXd q = GM.array() + dM.array() * deM.array();
  const Eigen::ArrayXd qt = GMt.array() + dMt.array() * deM.array() + dM.array() * deMt.array();
  const Vec NMt = (q * qt / sM2 - q.square() * deM.array() * deMt.array() / sM2.square()).matrix();
  const Vec KMt = b * deriv(g, (sM2.pow(-1.5) * deMt.array()).matrix());
  const Vec N1t = -c1 * deriv(g, N1), N2t = -c2 * deriv(g, N2);
  const Vec K1t = -c1 * deriv(g, K1), K2t = -c2 * deriv(g, K2);
  const Vec R21t = -c1 * deriv(g, d1).cwiseProduct(d2) - c2 * d1.cwiseProduct(deriv(g, d2));
  r.dR2 = drop_nyquist(g, R21t - NMt + N1t + N2t - KMt + K1t + K2t);

  r.e0 = l2(g, r.R1) + l2(g, r.R2);
  r.e1 = r.e0 + l2(g, deriv(g, r.R1)) + l2(g, deriv(g, r.R2)) + l2(g, r.dR1) + l2(g, r.dR2);
  r.norms.l2_eta = l2(g, r.R1);
  r.norms.l2_phi = l2(g, r.R2);
  r.norms.es = r.e1;
  return r;
}

void require_ordered(const TwoSolitonConfig& cfg) {
  if (!is_zero_wave(cfg.wave1) && !is_zero_wave(cfg.wave2) && !(cfg.c1() < cfg.c2()))
    throw InvalidArgument("this operation needs c1 < c2");
}

}  // namespace

void TwoSolitonConfig::validate() const {
  if (wave1.U.grid != wave2.U.grid) throw InvalidArgument("the two waves live on different grids");
  const bool z1 = is_zero_wave(wave1), z2 = is_zero_wave(wave2);
  // Equal speeds are admitted so the residual of two identical waves can be evaluated;
  // everything that moves the waves apart needs c1 < c2 (see require_ordered).
  if (!z1 && !z2 && !(wave1.c <= wave2.c)) throw InvalidArgument("two-soliton data needs c1 <= c2");
  double w = 0.0;
  if (!z1) w = std::max(w, wave1.width());
  if (!z2) w = std::max(w, wave2.width());
  if (!(h >= 4.0 * w)) {
    std::ostringstream os;
    os << "separation h = " << h << " is below 4 widths (" << 4.0 * w << ")";
    throw InvalidArgument(os.str());
  }
}

void TwoSolitonConfig::check_window(double t) const {
  const double half = 0.5 * wave1.U.grid.L;
  auto check = [&](const SolitaryWave& Q, double y, int i) {
    if (is_zero_wave(Q)) return;
    if (std::fabs(y) + 8.0 * Q.width() > half) {
      std::ostringstream os;
      os << "wave " << i << " core leaves the box at t = " << t << " (centre " << y << ")";
      throw WindowViolation(os.str());
    }
  };
  check(wave1, y1(t), 1);
  check(wave2, y2(t), 2);
}

TwoSolitonConfig make_two_soliton(const DirichletNeumann& dn, const PhysicalParams& p, double eps1, double eps2,
                                  double h) {
  TwoSolitonConfig cfg;
  cfg.wave1 = solitary_wave(dn, p, eps1);
  cfg.wave2 = solitary_wave(dn, p, eps2);
  cfg.h = h;
  cfg.frame_speed = cfg.cm();
  cfg.validate();
  return cfg;
}

std::pair<SolitaryWave, SolitaryWave> place_waves(const TwoSolitonConfig& cfg, double y1, double y2) {
  return {translate(cfg.wave1, y1 - cfg.wave1.center), translate(cfg.wave2, y2 - cfg.wave2.center)};
}

SurfaceState superpose(const TwoSolitonConfig& cfg, double t) {
  cfg.check_window(t);
  return state_at(cfg, cfg.y1(t), cfg.y2(t));
}

ResidualRM residual_RM(const DirichletNeumann& dn, const TwoSolitonConfig& cfg, double t) {
  cfg.validate();
  cfg.check_window(t);
  auto [Q1, Q2] = place_waves(cfg, cfg.y1(t), cfg.y2(t));
  return residual_placed(dn, Q1, Q2, params_of(cfg));
}

LogLinearFit fit_log_linear(const std::vector<double>& x, const std::vector<double>& norms) {
  if (x.size() != norms.size() || x.size() < 2) throw InvalidArgument("fit needs at least two matching points");
  LogLinearFit f;
  f.x = x;
  for (double v : norms) {
    if (!(v > 0.0)) throw InvalidArgument("fit needs positive norms");
    f.y.push_back(std::log(v));
  }
  const int n = static_cast<int>(x.size());
  double mx = 0, my = 0;
  for (int i = 0; i < n; ++i) {
    mx += x[i];
    my += f.y[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (int i = 0; i < n; ++i) {
    sxx += (x[i] - mx) * (x[i] - mx);
    sxy += (x[i] - mx) * (f.y[i] - my);
    syy += (f.y[i] - my) * (f.y[i] - my);
  }
  if (!(sxx > 0.0)) throw InvalidArgument("fit abscissae are all equal");
  f.rate = sxy / sxx;
  f.prefactor = std::exp(my - f.rate * mx);
  f.r2 = syy > 0.0 ? sxy * sxy / (sxx * syy) : 1.0;
  f.poor = f.r2 < 0.9;
  return f;
}

ResidualDecay decay_fit(const DirichletNeumann& dn, const TwoSolitonConfig& cfg, const std::vector<double>& times,
                        const std::vector<double>& hs) {
  require_ordered(cfg);
  ResidualDecay d;
  const int nt_ = static_cast<int>(times.size());
  std::vector<double> nt(times.size()), nh(hs.size());
  parallel_for(nt_ + static_cast<int>(hs.size()), [&](int i) {
    if (i < nt_) {
      nt[i] = residual_RM(dn, cfg, times[i]).e0;
    } else {
      TwoSolitonConfig c = cfg;
      c.h = hs[i - nt_];
      nh[i - nt_] = residual_RM(dn, c, 0.0).e0;
    }
  });
  d.in_t = fit_log_linear(times, nt);
  d.in_h = fit_log_linear(hs, nh);
  const double dc = cfg.c2() - cfg.c1();
  d.eps0 = -d.in_t.rate / dc;
  d.consistency = std::fabs(std::fabs(d.in_h.rate) - std::fabs(d.in_t.rate) / dc) / std::fabs(d.in_h.rate);
  return d;
}

InteractionValue interaction_integral(double eps, double eps0, double c1, double c2, double h, double t) {
  if (!(eps > 0.0)) throw InvalidArgument("interaction rate must be positive");
  if (!(eps0 < eps)) throw InvalidArgument("eps0 must be below eps");
  if (!(c1 < c2)) throw InvalidArgument("interaction needs c1 < c2");
  if (h < 0.0 || t < 0.0) throw InvalidArgument("h and t must be non-negative");
  const double d = h + (c2 - c1) * t;
  InteractionValue v;
  v.lhs = std::exp(-eps * d) * (d + 1.0 / eps);
  v.rhs = std::exp(-eps * h) * std::exp(-eps0 * (c2 - c1) * t);
  v.ratio = v.lhs / v.rhs;
  return v;
}

InteractionSup interaction_sup(double eps, double eps0, double c1, double c2, const std::vector<double>& hs,
                               const std::vector<double>& ts) {
  InteractionSup s;
  std::vector<double> hsorted = hs;
  std::sort(hsorted.begin(), hsorted.end());
  for (double t : ts) {
    double prev = INFINITY;
    for (double h : hsorted) {
      const InteractionValue v = interaction_integral(eps, eps0, c1, c2, h, t);
      s.C = std::max(s.C, v.ratio);
      if (v.lhs > prev) s.monotone_in_h = false;
      prev = v.lhs;
    }
  }
  return s;
}

double smooth_step(double s) {
  if (s <= 0.0) return 0.0;
  if (s >= 1.0) return 1.0;
  return std::pow(s, 5) * (126.0 + s * (-420.0 + s * (540.0 + s * (-315.0 + 70.0 * s))));
}

double smooth_step_deriv(double s) {
  if (s <= 0.0 || s >= 1.0) return 0.0;
  // 630 s⁴(1-s)⁴
  return 630.0 * std::pow(s * (1.0 - s), 4);
}

CutoffPair cutoffs(const TwoSolitonConfig& cfg, const Grid1D& g, double t) {
  const double L = g.L, w = 0.25 * cfg.h;
  if (!(w > 0.0)) throw InvalidArgument("cutoffs need h > 0");
  const double a = -0.25 * cfg.h + (cfg.cm() - cfg.frame_speed) * t;
  const double qb = 0.5 * L - 0.5 * w - a;
  CutoffPair c;
  c.chi1.resize(g.N);
  c.chi2.resize(g.N);
  c.dchi1.resize(g.N);
  c.dchi2.resize(g.N);
  for (int j = 0; j < g.N; ++j) {
    double q = std::fmod(g.x(j) - a, L);
    if (q < 0.0) q += L;
    double ct, dct;
    if (q <= w) {
      ct = 1.0 - smooth_step(q / w);
      dct = -smooth_step_deriv(q / w) / w;
    } else if (q < qb) {
      ct = 0.0;
      dct = 0.0;
    } else if (q <= qb + w) {
      ct = smooth_step((q - qb) / w);
      dct = smooth_step_deriv((q - qb) / w) / w;
    } else {
      ct = 1.0;
      dct = 0.0;
    }
    const double r = std::sqrt(ct * ct + (1.0 - ct) * (1.0 - ct));
    c.chi1[j] = ct / r;
    c.chi2[j] = (1.0 - ct) / r;
    c.dchi1[j] = (1.0 - ct) / (r * r * r) * dct;
    c.dchi2[j] = -ct / (r * r * r) * dct;
  }
  return c;
}

LMOperator assemble_LM(const DirichletNeumann& dn, const FourierBasis& B, const TwoSolitonConfig& cfg, double t) {
  cfg.validate();
  cfg.check_window(t);
  const Grid1D& g = B.grid();
  const PhysicalParams& p = params_of(cfg);
  const double y1 = cfg.y1(t), y2 = cfg.y2(t);
  const SurfaceState M = state_at(cfg, y1, y2);
  const GoodUnknowns gu = good_unknowns(dn, M.eta, M.phi_periodic, M.phi_ramp_amp);
  const double dt = 1e-4;
  auto Z_at = [&](double s) {
    const SurfaceState Ms = state_at(cfg, y1 + cfg.c1() * s, y2 + cfg.c2() * s);
    return good_unknowns(dn, Ms.eta, Ms.phi_periodic, Ms.phi_ramp_amp).Z;
  };
  LMOperator op;
  op.Z = gu.Z;
  op.v = gu.v;
  op.dtZ = (Z_at(dt) - Z_at(-dt)) / (2.0 * dt);
  op.aM = op.v.cwiseProduct(deriv(g, op.Z)) + op.dtZ;
  op.q3 = (1.0 + deriv(g, M.eta).array().square()).pow(-1.5).matrix();
  op.G = dn_matrix(dn, B, M.eta);
  const Vec w = (op.v.array() - cfg.frame_speed).matrix();
  op.L.name = "L_M";
  op.L.n = B.size();
  op.L.grid = g;
  op.L.A = assemble_l_form(B, p.b, p.g, op.q3, op.aM, w, op.G);
  return op;
}

Mat assemble_LambdaM(const FourierBasis& B, const TwoSolitonConfig& cfg, const LMOperator& op) {
  const PhysicalParams& p = params_of(cfg);
  const Vec w = (op.v.array() - cfg.frame_speed).matrix();
  const Vec Zdv = op.Z.cwiseProduct(deriv(B.grid(), op.v));
  return assemble_lambda_form(B, p.b, p.g, op.q3, op.Z, Zdv, w, op.G);
}

Mat transport_matrix(const FourierBasis& B) {
  const int n = B.size();
  Mat A = Mat::Zero(2 * n, 2 * n);
  A.block(0, n, n, n) = B.derivative();
  A.block(n, 0, n, n) = -B.derivative();
  return A;
}

Mat energy_matrix(const FourierBasis& B, const TwoSolitonConfig& cfg, const Mat& Lf, double t) {
  const int n = B.size();
  if (Lf.rows() != 2 * n || Lf.cols() != 2 * n) throw InvalidArgument("operator size does not match the basis");
  const CutoffPair cp = cutoffs(cfg, B.grid(), t);
  const Mat& D = B.derivative();
  Mat E = Lf;
  const double s1 = cfg.c1() - cfg.frame_speed, s2 = cfg.c2() - cfg.frame_speed;
  const Mat M1 = B.multiplication(cp.chi1), M2 = B.multiplication(cp.chi2);
  const Mat T = s1 * (M1 * D * M1) + s2 * (M2 * D * M2);
  E.block(0, n, n, n) -= T;
  E.block(n, 0, n, n) += T;
  return E;
}

Vec growth_metric(const FourierBasis& B) {
  Vec d = x0_gram(B);
  d.tail(B.size()).array() += 1.0;
  return d;
}

double growth_norm(const FourierBasis& B, const Vec& u) {
  return x0_norm_coeffs(B, u) + u.tail(B.size()).norm();
}

Vec LMLattice::apply_JL(double t, const Vec& u) const {
  if (times.size() < 2) throw InvalidArgument("lattice needs at least two nodes");
  const double tol = 1e-9 * step;
  if (t < times.front() - tol || t > times.back() + tol) {
    std::ostringstream os;
    os << "time " << t << " is outside the lattice [" << times.front() << ", " << times.back() << "]";
    throw InvalidArgument(os.str());
  }
  int k = static_cast<int>(std::floor((t - t0) / step));
  k = std::clamp(k, 0, static_cast<int>(times.size()) - 2);
  const double th = (t - times[k]) / step;
  const Vec y = (1.0 - th) * (L[k] * u) + th * (L[k + 1] * u);
  Vec r(2 * n);
  r.head(n) = y.tail(n);
  r.tail(n) = -y.head(n);
  return r;
}

Mat LMLattice::L_at(double t) const {
  int k = static_cast<int>(std::floor((t - t0) / step));
  k = std::clamp(k, 0, static_cast<int>(times.size()) - 2);
  const double th = (t - times[k]) / step;
  return (1.0 - th) * L[k] + th * L[k + 1];
}

LMLattice build_lattice(const DirichletNeumann& dn, const FourierBasis& B, const TwoSolitonConfig& cfg, double T,
                        double step) {
  if (!(step > 0.0) || !(T > 0.0)) throw InvalidArgument("lattice needs T > 0 and step > 0");
  LMLattice lat;
  lat.t0 = 0.0;
  lat.step = step;
  lat.n = B.size();
  const int nodes = static_cast<int>(std::ceil(T / step - 1e-9)) + 1;
  const Grid1D& g = B.grid();
  lat.times.resize(nodes);
  lat.L.resize(nodes);
  lat.Z.resize(nodes);
  lat.dZ.resize(nodes);
  parallel_for(nodes, [&](int k) {
    const double t = k * step;
    LMOperator op = assemble_LM(dn, B, cfg, t);
    lat.times[k] = t;
    lat.L[k] = std::move(op.L.A);
    lat.dZ[k] = op.dtZ + cfg.frame_speed * deriv(g, op.Z);
    lat.Z[k] = std::move(op.Z);
  });
  return lat;
}

GrowthResult evolve_linearized_about_M(const LMLattice& lat, const FourierBasis& B, const TwoSolitonConfig& cfg,
                                       const Vec& U0, double T, double dt, int record_every) {
  if (!(dt > 0.0) || !(T > 0.0) || record_every < 1) throw InvalidArgument("bad growth run parameters");
  const int n = B.size();
  if (U0.size() != 2 * n) throw InvalidArgument("initial data size does not match the basis");
  const double n0 = growth_norm(B, U0);
  if (!(n0 > 0.0)) throw InvalidArgument("initial data has zero norm");
  // With the frame at c_m the cutoffs do not move, so the transport part of E is fixed.
  const bool static_cut = cfg.frame_speed == cfg.cm();
  Mat S;
  if (static_cut) S = lat.L[0] - energy_matrix(B, cfg, lat.L[0], 0.0);
  auto e1 = [&](double t, const Vec& u) {
    if (static_cut) {
      int k = std::clamp(static_cast<int>(std::floor((t - lat.t0) / lat.step)), 0,
                         static_cast<int>(lat.times.size()) - 2);
      const double th = (t - lat.times[k]) / lat.step;
      return (1.0 - th) * u.dot(lat.L[k] * u) + th * u.dot(lat.L[k + 1] * u) - u.dot(S * u);
    }
    return u.dot(energy_matrix(B, cfg, lat.L_at(t), t) * u);
  };
  GrowthResult out;
  const int steps = static_cast<int>(std::llround(T / dt));
  Vec u = U0;
  auto rec = [&](int s) {
    const double t = s * dt;
    const double nu = growth_norm(B, u);
    out.t.push_back(t);
    out.norm.push_back(nu);
    out.E1.push_back(e1(t, u));
    out.max_ratio = std::max(out.max_ratio, nu / n0);
  };
  rec(0);
  for (int s = 1; s <= steps; ++s) {
    const double t = (s - 1) * dt;
    Vec k1 = lat.apply_JL(t, u);
    Vec k2 = lat.apply_JL(t + 0.5 * dt, u + 0.5 * dt * k1);
    Vec k3 = lat.apply_JL(t + 0.5 * dt, u + 0.5 * dt * k2);
    Vec k4 = lat.apply_JL(t + dt, u + dt * k3);
    u += dt / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!u.allFinite()) throw SolverFailure("NaN in the linearised evolution about M", s * dt);
    if (s % record_every == 0 || s == steps) rec(s);
  }
  // log|U| = a + k log(1+t) + r t
  const int m = static_cast<int>(out.t.size());
  Mat A(m, 3);
  Vec y(m);
  for (int i = 0; i < m; ++i) {
    A(i, 0) = 1.0;
    A(i, 1) = std::log1p(out.t[i]);
    A(i, 2) = out.t[i];
    y[i] = std::log(out.norm[i]);
  }
  const Vec c = A.colPivHouseholderQr().solve(y);
  out.poly_power = c[1];
  out.exp_rate = c[2];
  return out;
}

E1Drift e1_drift(const DirichletNeumann& dn, const FourierBasis& B, const TwoSolitonConfig& cfg, double t,
                 double dt) {
  if (!(dt > 0.0) || t - dt < 0.0) throw InvalidArgument("e1_drift needs 0 < dt <= t");
  const int n = B.size();
  const Mat L0 = assemble_LM(dn, B, cfg, t).L.A;
  const Mat Ep = energy_matrix(B, cfg, assemble_LM(dn, B, cfg, t + dt).L.A, t + dt);
  const Mat Em = energy_matrix(B, cfg, assemble_LM(dn, B, cfg, t - dt).L.A, t - dt);
  const Mat E0 = energy_matrix(B, cfg, L0, t);
  const Mat J = symplectic_J(n);
  Mat K = (Ep - Em) / (2.0 * dt) + E0 * J * L0 - L0 * J * E0;
  K = 0.5 * (K + K.transpose()).eval();
  const Vec s = growth_metric(B).cwiseSqrt().cwiseInverse();
  const Mat Ks = s.asDiagonal() * K * s.asDiagonal();
  Eigen::SelfAdjointEigenSolver<Mat> es(Ks, Eigen::EigenvaluesOnly);
  E1Drift d;
  d.sup = es.eigenvalues().cwiseAbs().maxCoeff();
  d.h = cfg.h;
  return d;
}

namespace {

// Good-unknown forcing F = -(R̃1, R̃2 - Z R̃1) and its frame time derivative.
struct ForcingNode {
  Vec F, dF;
};

class Forcing {
 public:
  Forcing(std::vector<double> t, std::vector<ForcingNode> nodes, double step)
      : t_(std::move(t)), nodes_(std::move(nodes)), step_(step) {}
  Vec operator()(double t) const {
    int k = std::clamp(static_cast<int>(std::floor(t / step_)), 0, static_cast<int>(t_.size()) - 2);
    const double s = (t - t_[k]) / step_;
    const double h00 = 2 * s * s * s - 3 * s * s + 1, h10 = s * s * s - 2 * s * s + s;
    const double h01 = -2 * s * s * s + 3 * s * s, h11 = s * s * s - s * s;
    return h00 * nodes_[k].F + h10 * step_ * nodes_[k].dF + h01 * nodes_[k + 1].F +
           h11 * step_ * nodes_[k + 1].dF;
  }

 private:
  std::vector<double> t_;
  std::vector<ForcingNode> nodes_;
  double step_;
};

Vec e0_split(const FourierBasis& B, const Vec& u) {
  const int n = B.size();
  Vec r(2);
  r << u.head(n).norm(), u.tail(n).norm();
  return r;
}

}  // namespace

CorrectionResult first_order_correction(const DirichletNeumann& dn, const FourierBasis& B,
                                        const TwoSolitonConfig& cfg, const LMLattice& lat, double eps0,
                                        double T_max, double dt) {
  if (!(eps0 > 0.0)) throw InvalidArgument("eps0 must be positive");
  if (!(dt > 0.0) || !(T_max > 0.0)) throw InvalidArgument("bad correction run parameters");
  if (lat.times.empty() || T_max > lat.times.back() + 1e-9)
    throw InvalidArgument("the lattice does not reach T_max");
  const int per_node = static_cast<int>(std::llround(lat.step / dt));
  if (std::fabs(per_node * dt - lat.step) > 1e-9 * lat.step)
    throw InvalidArgument("lattice step must be a multiple of dt");
  const int steps = static_cast<int>(std::llround(T_max / dt));
  if (steps % per_node != 0) throw InvalidArgument("T_max must be a lattice node");
  const int n = B.size();
  const Grid1D& g = B.grid();
  const double fs = cfg.frame_speed;
  const double dc = cfg.c2() - cfg.c1();

  CorrectionResult out;
  out.eps0 = eps0;
  out.delta = std::exp(-eps0 * cfg.h);
  const double idelta = 1.0 / out.delta;
  if (is_zero_wave(cfg.wave1) || is_zero_wave(cfg.wave2)) {
    // M is a single exact wave: R_M ≡ 0 and so V₁ ≡ 0.
    for (int k = 0; k * per_node <= steps; ++k) {
      out.t.push_back(lat.times[k]);
      out.V1.push_back(Vec::Zero(2 * n));
      out.norm_e0.push_back(0.0);
    }
    return out;
  }
  require_ordered(cfg);

  // Forcing at the lattice nodes up to T_max.
  const int nodes = steps / per_node + 1;
  std::vector<double> nt;
  std::vector<ForcingNode> fn;
  std::vector<Vec> Rt;  // R̃ coefficients, for the self check
  for (int k = 0; k < nodes; ++k) {
    const double t = lat.times[k];
    const ResidualRM r = residual_RM(dn, cfg, t);
    const Vec R1 = r.R1 * idelta, R2 = r.R2 * idelta;
    const Vec R1t = (r.dR1 + fs * deriv(g, r.R1)) * idelta;
    const Vec R2t = (r.dR2 + fs * deriv(g, r.R2)) * idelta;
    const Vec& Z = lat.Z[k];
    const Vec& Zt = lat.dZ[k];
    ForcingNode f;
    f.F.resize(2 * n);
    f.dF.resize(2 * n);
    f.F.head(n) = -B.analyse(R1);
    f.F.tail(n) = -B.analyse(R2 - Z.cwiseProduct(R1));
    f.dF.head(n) = -B.analyse(R1t);
    f.dF.tail(n) = -B.analyse(R2t - Zt.cwiseProduct(R1) - Z.cwiseProduct(R1t));
    Vec rc(2 * n);
    rc.head(n) = B.analyse(R1);
    rc.tail(n) = B.analyse(R2);
    Rt.push_back(rc);
    nt.push_back(t);
    fn.push_back(std::move(f));
  }
  const Forcing F(nt, fn, lat.step);
  auto rhs_w = [&](double t, const Vec& w, bool forced) {
    Vec r = lat.apply_JL(t, w);
    if (forced) r += F(t);
    return r;
  };
  auto rk4 = [&](double t, const Vec& w, double h, bool forced) {
    Vec k1 = rhs_w(t, w, forced);
    Vec k2 = rhs_w(t + 0.5 * h, w + 0.5 * h * k1, forced);
    Vec k3 = rhs_w(t + 0.5 * h, w + 0.5 * h * k2, forced);
    Vec k4 = rhs_w(t + h, w + h * k3, forced);
    return Vec(w + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4));
  };

  // Backward from W(T_max) = 0; W kept at the lattice nodes and at T_max/2.
  std::vector<Vec> Wn(nodes);
  Vec w = Vec::Zero(2 * n);
  Wn[nodes - 1] = w;
  const int half = steps / 2;
  Vec w_half;
  for (int s = steps; s > 0; --s) {
    w = rk4(s * dt, w, -dt, true);
    if (!w.allFinite()) throw SolverFailure("NaN in the V1 integration", (s - 1) * dt);
    if ((s - 1) % per_node == 0) Wn[(s - 1) / per_node] = w;
    if (s - 1 == half) w_half = w;
  }

  auto to_v = [&](const Vec& W, const Vec& Z) {
    Vec v(2 * n);
    v.head(n) = W.head(n);
    v.tail(n) = W.tail(n) + B.analyse(Z.cwiseProduct(B.synthesise(W.head(n))));
    return v;
  };
  for (int k = 0; k < nodes; ++k) {
    out.t.push_back(nt[k]);
    out.V1.push_back(to_v(Wn[k], lat.Z[k]));
    out.norm_e0.push_back(e0_split(B, out.V1.back()).sum());
  }
  const double v0 = out.norm_e0[0];
  if (!(v0 > 0.0)) return out;  // no forcing (a single wave): V₁ ≡ 0

  // Tail: the part of V₁(0) forced from [T/2, T], continued geometrically.
  Vec diff = w_half;
  for (int s = half; s > 0; --s) diff = rk4(s * dt, diff, -dt, false);
  const double q = std::exp(-eps0 * dc * 0.5 * T_max);
  out.tail_estimate = e0_split(B, to_v(diff, lat.Z[0])).sum() * q / (1.0 - q) / v0;

  std::vector<double> ft, fnrm;
  for (int k = 0; k < nodes; ++k)
    if (nt[k] <= 0.5 * T_max) {
      ft.push_back(nt[k]);
      fnrm.push_back(out.norm_e0[k]);
    }
  if (ft.size() >= 2) out.decay_rate = fit_log_linear(ft, fnrm).rate;

  // ∂tV₁ at a node from W by finite differences on a refined local step.
  const double hf = dt / 16.0;
  auto dV = [&](int k) {
    const double t = nt[k];
    Vec dW;
    if (k == 0) {
      std::vector<Vec> Ws{Wn[0]};
      for (int i = 1; i <= 4; ++i) Ws.push_back(rk4(t + (i - 1) * hf, Ws.back(), hf, true));
      dW = (-25.0 * Ws[0] + 48.0 * Ws[1] - 36.0 * Ws[2] + 16.0 * Ws[3] - 3.0 * Ws[4]) / (12.0 * hf);
    } else {
      const Vec p1 = rk4(t, Wn[k], hf, true), p2 = rk4(t + hf, p1, hf, true);
      const Vec m1 = rk4(t, Wn[k], -hf, true), m2 = rk4(t - hf, m1, -hf, true);
      dW = (-p2 + 8.0 * p1 - 8.0 * m1 + m2) / (12.0 * hf);
    }
    const Vec W1 = B.synthesise(Wn[k].head(n)), dW1 = B.synthesise(dW.head(n));
    Vec d(2 * n);
    d.head(n) = dW.head(n);
    d.tail(n) = dW.tail(n) + B.analyse(lat.dZ[k].cwiseProduct(W1) + lat.Z[k].cwiseProduct(dW1));
    return d;
  };

  std::vector<int> checks{0};
  for (int k : {nodes / 4, nodes / 2})
    if (k > 0 && k < nodes - 1 && std::find(checks.begin(), checks.end(), k) == checks.end()) checks.push_back(k);
  const Mat J = symplectic_J(n);
  double forcing = 0.0;
  for (const Vec& r : Rt) forcing = std::max(forcing, e0_split(B, r).sum());
  Vec dV0;
  for (int k : checks) {
    const LMOperator op = assemble_LM(dn, B, cfg, nt[k]);
    const Mat Lam = assemble_LambdaM(B, cfg, op);
    const Vec d = dV(k);
    if (k == 0) dV0 = d;
    const Vec defect = d - J * (Lam * out.V1[k]) + Rt[k];
    Vec resolved = defect;
    for (int i = 0; i < n; ++i)
      if (std::fabs(B.xi_of(i)) > 2.0 * g.xi_max() / 3.0) resolved[i] = resolved[n + i] = 0.0;
    out.self_defect = std::max(out.self_defect, e0_split(B, defect).sum() / forcing);
    out.self_defect_resolved = std::max(out.self_defect_resolved, e0_split(B, resolved).sum() / forcing);
  }

  // Nonlinear defects at t = 0 (lab time derivatives; ∂t|x = ∂t|y - fs∂y).
  {
    auto [Q1, Q2] = place_waves(cfg, cfg.y1(0.0), cfg.y2(0.0));
    const PhysicalParams& p = params_of(cfg);
    const SurfaceState M = sum_states(Q1.U, Q2.U);
    const Vec eMt = -cfg.c1() * deriv(g, Q1.U.eta) - cfg.c2() * deriv(g, Q2.U.eta);
    const Vec pMt = -cfg.c1() * reconstruct_dphi(Q1.U) - cfg.c2() * reconstruct_dphi(Q2.U);
    const StateRate fM = rhs(dn, M, p);
    out.defect_M = l2(g, eMt - fM.deta) + l2(g, drop_nyquist(g, pMt) - fM.dphi);

    const Vec v1 = B.synthesise(out.V1[0].head(n)), v2 = B.synthesise(out.V1[0].tail(n));
    const Vec v1t = B.synthesise(dV0.head(n)) - fs * deriv(g, v1);
    const Vec v2t = B.synthesise(dV0.tail(n)) - fs * deriv(g, v2);
    SurfaceState U = M;
    U.eta += out.delta * v1;
    U.phi_periodic += out.delta * v2;
    const StateRate fU = rhs(dn, U, p);
    out.defect_corrected = l2(g, eMt + out.delta * v1t - fU.deta) +
                           l2(g, drop_nyquist(g, pMt + out.delta * v2t) - fU.dphi);
  }

  if (out.tail_estimate > 0.1) {
    std::ostringstream os;
    os << "T_max = " << T_max << " too small: tail estimate " << out.tail_estimate << " of |V1(0)|";
    throw TMaxTooSmall(os.str());
  }
  return out;
}

}  // namespace wwlab
