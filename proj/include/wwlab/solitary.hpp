// Solitary waves: long-wave seed, Newton refinement of the traveling system,
// speed derivative and the momentum slope.
#pragma once

#include <string>
#include <vector>

#include "wwlab/dn.hpp"
#include "wwlab/state.hpp"

namespace wwlab {

struct SolitaryWave {
  PhysicalParams params;
  double eps = 0.0;
  double c = 0.0;
  double center = 0.0;
  SurfaceState U;
  double residual_norm = -1.0;  // E⁰ norm of (r1, r2); negative if unknown

  double alpha() const { return params.alpha(c); }
  double beta() const { return params.beta(c); }
  // sech² rate of the leading-order profile (1/length).
  double kappa() const;
  // Tail e-folding length of η, 1/(2κ).
  double width() const { return 0.5 / kappa(); }
};

// η/H = -ε² sech²(κX), φ/(cH) = -2ε sqrt(β-1/3) tanh(κX), κ = ε/(2 sqrt(β-1/3)).
SolitaryWave asymptotic_profile(const PhysicalParams& p, const Grid1D& g, double eps,
                                double center = 0.0);

struct TravelingResidual {
  Vec r1, r2;
  double e0 = 0.0;  // |r1|_{L²} + |r2|_{L²}
};
TravelingResidual traveling_residual(const DirichletNeumann& dn, const SolitaryWave& Q);

struct NewtonOptions {
  double tol = 1e-11;
  int max_iter = 12;
  double fd_step = 1e-7;    // relative to the largest unknown
};

struct NewtonLog {
  std::vector<double> residuals;
  int jacobians = 0;
};

struct NoConvergence : SolverFailure {
  SolitaryWave last;
  NoConvergence(const std::string& w, double r, SolitaryWave q)
      : SolverFailure(w, r), last(std::move(q)) {}
};

// Newton on (η even, φ periodic part odd, ramp amplitude) about x = 0 with
// the closing condition ∂xφ = 0 at the box edge. The result is re-centred at
// seed.center by a Fourier shift.
SolitaryWave refine_newton(const DirichletNeumann& dn, const SolitaryWave& seed,
                           const NewtonOptions& opt = {}, NewtonLog* log = nullptr);

// Seed plus Newton, stepping ε up from a safe value when the direct solve fails.
SolitaryWave solitary_wave(const DirichletNeumann& dn, const PhysicalParams& p, double eps,
                           const NewtonOptions& opt = {});

// Translate a wave by a (periodic part by Fourier shift; the ramp is fixed).
SolitaryWave translate(const SolitaryWave& Q, double a);

struct SpeedDerivative {
  Vec deta, dphi_periodic;
  double dphi_ramp = 0.0;
  double dc = 0.0;  // dc/dε
};
// Fourth-order difference of refined waves at ε ± dε, ε ± 2dε with matched centres.
SpeedDerivative speed_derivative(const DirichletNeumann& dn, const PhysicalParams& p, double eps,
                                 double deps = 1e-3, const NewtonOptions& opt = {});

double momentum(const SurfaceState& U);  // ∫ η ∂xφ

struct GrillakisResult {
  double value = 0.0;      // d/dc ∫η∂xφ, equal to (∂cQ, J∂xQ)
  double leading = 0.0;    // same slope from the leading-order formulas
  double momentum = 0.0;
};
GrillakisResult grillakis_sign(const DirichletNeumann& dn, const PhysicalParams& p, double eps,
                               double deps = 1e-3, const NewtonOptions& opt = {});

// Parity defects about the centre: max|η(x0+a)-η(x0-a)|, max|φ(x0+a)+φ(x0-a)|.
std::pair<double, double> parity_defect(const SolitaryWave& Q);

}  // namespace wwlab
