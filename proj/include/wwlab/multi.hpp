// Two-soliton superposition M, its defect R_M, cutoffs and the E₁ energy,
// the linearisation about M and the first Duhamel correction V₁.
//
// Everything is computed on one periodic box in a frame moving with speed
// frame_speed (by default c_m = (c₁+c₂)/2). Frame coordinate y = x - c_m t - h/2,
// so wave 1 sits at y₁(t) = -h/2 + (c₁-c_m)t and wave 2 at y₂(t) = h/2 + (c₂-c_m)t.
#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "wwlab/dn.hpp"
#include "wwlab/linear.hpp"
#include "wwlab/solitary.hpp"

namespace wwlab {

struct WindowViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct TwoSolitonConfig {
  SolitaryWave wave1, wave2;  // centred at 0 on the same grid; a zero state is allowed
  double h = 20.0;
  double frame_speed = 0.0;
  double c1() const { return wave1.c; }
  double c2() const { return wave2.c; }
  double cm() const { return 0.5 * (wave1.c + wave2.c); }
  double y1(double t) const { return -0.5 * h + (wave1.c - frame_speed) * t; }
  double y2(double t) const { return 0.5 * h + (wave2.c - frame_speed) * t; }
  // c₁ < c₂ and h ≥ 4·(wider width); waves with zero η are exempt.
  void validate() const;
  // Throws WindowViolation when a core (8 widths) leaves the box at time t.
  void check_window(double t) const;
};

// Both waves on dn's grid, frame at c_m.
TwoSolitonConfig make_two_soliton(const DirichletNeumann& dn, const PhysicalParams& p, double eps1,
                                  double eps2, double h);

// Waves placed at given frame positions.
std::pair<SolitaryWave, SolitaryWave> place_waves(const TwoSolitonConfig& cfg, double y1, double y2);
SurfaceState superpose(const TwoSolitonConfig& cfg, double t);

struct ResidualRM {
  Vec R1, R2;
  Vec R21, R22, R23;
  Vec dR1, dR2;           // lab-frame time derivatives from ∂tQ_i = -c_i∂xQ_i
  NormReport norms;       // x0 unused; es = E¹ norm
  double e0 = 0.0, e1 = 0.0;
  double defect_check = 0.0;  // max|R1 - (∂tη_M - G[η_M]φ_M)|
};
ResidualRM residual_RM(const DirichletNeumann& dn, const TwoSolitonConfig& cfg, double t);

struct LogLinearFit {
  std::vector<double> x, y;  // y = log(norm)
  double rate = 0.0, prefactor = 0.0, r2 = 0.0;
  bool poor = false;         // R² < 0.9
};
LogLinearFit fit_log_linear(const std::vector<double>& x, const std::vector<double>& norms);

struct ResidualDecay {
  LogLinearFit in_t, in_h;
  double eps0 = 0.0;          // -r_t/(c₂-c₁)
  double consistency = 0.0;   // ||r_h| - |r_t|/(c₂-c₁)| / |r_h|
};
ResidualDecay decay_fit(const DirichletNeumann& dn, const TwoSolitonConfig& cfg,
                        const std::vector<double>& times, const std::vector<double>& hs);

struct InteractionValue {
  double lhs = 0.0, rhs = 0.0, ratio = 0.0;
};
// ∫ e^{-ε|x-c₁t|} e^{-ε|x-h-c₂t|} dx in closed form, and the bound e^{-εh}e^{-ε₀(c₂-c₁)t}.
InteractionValue interaction_integral(double eps, double eps0, double c1, double c2, double h, double t);
struct InteractionSup {
  double C = 0.0;
  bool monotone_in_h = true;
};
InteractionSup interaction_sup(double eps, double eps0, double c1, double c2, const std::vector<double>& hs,
                               const std::vector<double>& ts);

// χ⁰ = 1 - S with S the degree-9 smooth step, S(s) = s⁵(126 - 420s + 540s² - 315s³ + 70s⁴).
double smooth_step(double s);
double smooth_step_deriv(double s);

struct CutoffPair {
  Vec chi1, chi2, dchi1, dchi2;
};
// Main transition of χ̃₁ over y ∈ [-h/4, 0] (shifted by (c_m - frame_speed)t);
// the periodic back transition has width h/4 and is centred at the box edge.
CutoffPair cutoffs(const TwoSolitonConfig& cfg, const Grid1D& g, double t);

struct LMOperator {
  OperatorMatrix L;  // frame operator L[M] - frame_speed·∂xJ
  Vec aM, Z, v, dtZ, q3;  // a_M, Z_M, v_M, lab ∂tZ_M, (1+η_M'²)^{-3/2}
  Mat G;
};
// ∂tZ_M by centred differences with dt = 1e-4.
LMOperator assemble_LM(const DirichletNeumann& dn, const FourierBasis& B, const TwoSolitonConfig& cfg,
                       double t);
// Λ[M] - frame_speed·∂xJ, reusing the pieces of an assembled L[M].
Mat assemble_LambdaM(const FourierBasis& B, const TwoSolitonConfig& cfg, const LMOperator& op);

// Galerkin matrix of A = ∂xJ = [[0, ∂x], [-∂x, 0]].
Mat transport_matrix(const FourierBasis& B);
// E = L^f - Σ (c_i - frame_speed) χ_i A χ_i, so E₁(U) = (E U, U).
Mat energy_matrix(const FourierBasis& B, const TwoSolitonConfig& cfg, const Mat& Lf, double t);
// Metric of |U|²_{X⁰} + |U₂|²_{L²}.
Vec growth_metric(const FourierBasis& B);
double growth_norm(const FourierBasis& B, const Vec& u);  // |U|_{X⁰} + |U₂|_{L²}

// L^f assembled on a time lattice; the operator between nodes is linear in t.
struct LMLattice {
  double t0 = 0.0, step = 5.0;
  std::vector<double> times;
  std::vector<Mat> L;
  std::vector<Vec> Z, dZ;  // Z_M and its frame time derivative, nodal
  int n = 0;
  // (J L(t)) u with linear interpolation.
  Vec apply_JL(double t, const Vec& u) const;
  Mat L_at(double t) const;
};
LMLattice build_lattice(const DirichletNeumann& dn, const FourierBasis& B, const TwoSolitonConfig& cfg,
                        double T, double step);

struct GrowthResult {
  std::vector<double> t, norm, E1;
  double exp_rate = 0.0;   // r in log|U| = a + k log(1+t) + r t
  double poly_power = 0.0; // k
  double max_ratio = 0.0;  // max |U(t)| / |U(0)|
};
GrowthResult evolve_linearized_about_M(const LMLattice& lat, const FourierBasis& B,
                                       const TwoSolitonConfig& cfg, const Vec& U0, double T, double dt,
                                       int record_every = 20);

// sup_U |dE₁/dt| / (|U|²_{X⁰} + |U₂|²_{L²}) at time t, with Ė from L^f(t ± dt).
struct E1Drift {
  double sup = 0.0;
  double h = 0.0;
};
E1Drift e1_drift(const DirichletNeumann& dn, const FourierBasis& B, const TwoSolitonConfig& cfg, double t,
                 double dt = 0.05);

struct CorrectionResult {
  std::vector<double> t;
  std::vector<Vec> V1;           // coefficients (U1; U2), original unknown
  std::vector<double> norm_e0;   // E⁰ norm of V₁(t)
  double delta = 0.0, eps0 = 0.0;
  double tail_estimate = 0.0;    // relative to |V₁(0)|
  // |∂tV₁ - JΛV₁ + R̃_M| / sup_t|R̃_M| at three lattice times, on all modes and on |ξ| ≤ 2ξmax/3.
  double self_defect = 0.0, self_defect_resolved = 0.0;
  double decay_rate = 0.0;       // fitted rate of |V₁(t)|_{E⁰}
  double defect_M = 0.0;         // |∂tM - F(M)|_{E⁰} at t = 0
  double defect_corrected = 0.0; // |∂t(M+δV₁) - F(M+δV₁)|_{E⁰} at t = 0
};
struct TMaxTooSmall : std::runtime_error {
  using std::runtime_error::runtime_error;
};
// Backward integration from V₁(T_max) = 0 on the lattice (which must reach T_max).
// With one zero wave M is exact and V₁ ≡ 0 is returned without integrating.
CorrectionResult first_order_correction(const DirichletNeumann& dn, const FourierBasis& B,
                                        const TwoSolitonConfig& cfg, const LMLattice& lat, double eps0,
                                        double T_max, double dt);

}  // namespace wwlab
