// Surface state, the ramp carrier for the non-decaying part of φ, and the
// physical parameter set.
#pragma once

#include "wwlab/grid.hpp"

namespace wwlab {

// S(x) = 2x/L on the box. G[η] of a linear function is known exactly
// (G[η]x = -∂xη), so the carrier never has to be made periodic.
struct RampCarrier {
  Grid1D grid;
  Vec values() const;  // S at the nodes
  double slope() const { return 2.0 / grid.L; }
};

struct SurfaceState {
  Grid1D grid;
  Vec eta;
  Vec phi_periodic;
  double phi_ramp_amp = 0.0;

  static SurfaceState zero(const Grid1D& g);
  void validate(double H) const;  // length and non-cavitation checks
};

// φ = amp·S + φ_periodic and its derivative.
Vec reconstruct_phi(const SurfaceState& U);
Vec reconstruct_dphi(const SurfaceState& U);

struct PhysicalParams {
  double g = 1.0;
  double b = 0.4;
  double H = 1.0;

  // Speed of the solitary wave with α = gH/c² = 1 + ε².
  double speed(double eps) const;
  double alpha(double c) const { return g * H / (c * c); }
  double beta(double c) const { return b / (H * c * c); }
  double eps_of_speed(double c) const;
  void validate_wave(double eps) const;  // α > 1, β > 1/3 + 0.01
};

// Parameters (g, b, H) such that the wave of amplitude ε has the given β.
PhysicalParams params_from_beta(double eps, double beta, double g = 1.0, double H = 1.0);

}  // namespace wwlab
