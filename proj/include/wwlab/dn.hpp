// Dirichlet-Neumann operator through the flattened strip z in [-1, 0].
//
// Discretisation: Fourier in x, Legendre-Gauss-Lobatto in z. The weak form
// a(u,w) = Σ ω_k ∇w·P∇u (+ k²(H+η) w u for the transverse problem) is
// assembled with the exact quadrature of the LGL rule, so the discrete DN map
// ψ ↦ (A φ̃)|_{z=0} is symmetric by construction. Interior unknowns are solved
// by CG preconditioned with the flat strip operator, which is diagonal in
// (Fourier mode, vertical eigenvector).
#pragma once

#include <memory>

#include "wwlab/grid.hpp"
#include "wwlab/state.hpp"

namespace wwlab {

struct DNConfig {
  int Nz = 32;             // vertical polynomial degree (Nz+1 nodes)
  double tol = 1e-13;      // CG residual relative to |A E ψ|
  int max_iter = 400;
  bool flat_correction = true;  // make the η = 0 symbol exact
};

struct SolveStats {
  int iterations = 0;
  double residual = 0.0;
};

// LGL rule mapped to [-1, 0]; z[0] = -1 (bottom), z[Nz] = 0 (surface).
struct VerticalRule {
  Vec z, w;
  Mat D;
};
VerticalRule lgl_rule(int Nz);

struct StripField {
  Grid1D grid;
  int Nz = 0;
  RowMat values;  // (Nz+1) x N, row i is the level z_i
  Vec top() const { return values.row(values.rows() - 1).transpose(); }
};

class DirichletNeumann;

// Coefficients and preconditioner for one surface η and transverse k.
class StripProblem {
 public:
  StripProblem(const DirichletNeumann& dn, const Vec& eta, double k = 0.0);

  // Full strip solution with φ̃(·,0) = ψ.
  StripField solve(const Vec& psi, SolveStats* stats = nullptr) const;
  // Correction u with u(·,0)=0 such that φ0 + u solves the strip problem.
  StripField solve_correction(const StripField& phi0, double tol, SolveStats* stats = nullptr) const;
  // G[η]ψ (or G_k), periodic ψ.
  Vec apply(const Vec& psi, SolveStats* stats = nullptr) const;
  // Same with a ramp component amp·S added to ψ (k = 0 only).
  Vec apply(const Vec& psi, double ramp_amp, SolveStats* stats = nullptr) const;

  // Weak-form operator on a full strip field.
  RowMat apply_form(const RowMat& u) const;
  // max |A φ̃| over rows below the surface.
  double interior_residual(const StripField& phi) const;
  double min_det_P() const;

  const Vec& eta() const { return eta_; }
  double k() const { return k_; }

 private:
  RowMat precondition(const RowMat& r) const;
  void cg(RowMat& u, const RowMat& b, double tol, double ref, SolveStats* stats) const;
  Vec dn_from_strip(const RowMat& phi, const Vec& psi) const;

  const DirichletNeumann& dn_;
  Vec eta_, deta_;
  double k_;
  double Heff_;
  RowMat c11_, c12_, c22_, c00_;
};

class DirichletNeumann {
 public:
  DirichletNeumann(const Grid1D& grid, double H, DNConfig cfg = {});

  const Grid1D& grid() const { return grid_; }
  double depth() const { return H_; }
  const DNConfig& config() const { return cfg_; }
  const VerticalRule& rule() const { return rule_; }

  // cosh(Hκ(z+1))/cosh(Hκ) extension, κ = sqrt(ξ²+k²), in overflow-safe form.
  StripField harmonic_lift(const Vec& psi, double k = 0.0) const;

  Vec apply(const Vec& eta, const Vec& psi, SolveStats* stats = nullptr) const;
  Vec apply(const Vec& eta, const Vec& psi, double ramp_amp, SolveStats* stats = nullptr) const;
  Vec apply_transverse(const Vec& eta, const Vec& f, double k, SolveStats* stats = nullptr) const;

  // κ tanh(Hκ)
  double exact_symbol(double xi, double k = 0.0) const;
  // Symbol of the uncorrected discrete flat operator (m = 0..N/2).
  double discrete_flat_symbol(int m, double k = 0.0) const;

  // Internal data shared with StripProblem.
  struct Vertical {
    Mat K;        // Dzᵀ W Dz
    Mat S;        // W_I^{-1/2} Q: generalised eigenvectors of (K_II, W_I)
    Vec lambda;   // eigenvalues
    Vec KtS;      // K_TI S
  };
  const Vertical& vertical() const { return vert_; }
  double xi_eff(int m) const { return m == grid_.N / 2 ? 0.0 : grid_.xi(m); }

 private:
  Grid1D grid_;
  double H_;
  DNConfig cfg_;
  VerticalRule rule_;
  Vertical vert_;
};

struct GoodUnknowns {
  Vec Z, v;
};

// Z = (Gψ + η'ψ')/(1+η'²), v = ψ' - Zη'. ψ carries an optional ramp.
GoodUnknowns good_unknowns(const DirichletNeumann& dn, const Vec& eta, const Vec& psi,
                           double ramp_amp = 0.0);

// D_η(G[η]ψ)·ζ = -G[η](ζZ) - ∂x(vζ)
Vec shape_derivative(const DirichletNeumann& dn, const Vec& eta, const Vec& psi, double ramp_amp,
                     const Vec& zeta);

struct DecayFit {
  double rate = 0.0;
  double intercept = 0.0;
  double r2 = 0.0;
  int points = 0;
};

struct InsufficientDecayData : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Least-squares slope of log|f| against |x - center| on the window
// [0.05L, 0.35L]; values below 1e-13 are dropped.
DecayFit fit_decay(const Grid1D& g, const Vec& f, double center = 0.0);
DecayFit decay_profile(const DirichletNeumann& dn, const Vec& eta, const Vec& psi,
                       double ramp_amp, double center = 0.0);

}  // namespace wwlab
