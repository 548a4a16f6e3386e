#include "wwlab/state.hpp"

#include <cmath>

namespace wwlab {

Vec RampCarrier::values() const { return grid.nodes() * (2.0 / grid.L); }

SurfaceState SurfaceState::zero(const Grid1D& g) {
  return SurfaceState{g, Vec::Zero(g.N), Vec::Zero(g.N), 0.0};
}

void SurfaceState::validate(double H) const {
  if (eta.size() != grid.N || phi_periodic.size() != grid.N)
    throw InvalidArgument("surface fields do not match the grid");
  if (!(H + eta.minCoeff() > 0.0)) throw InvalidArgument("cavitation: H + eta <= 0");
  if (!eta.allFinite() || !phi_periodic.allFinite() || !std::isfinite(phi_ramp_amp))
    throw NumericalDomainError("non-finite surface state");
}

Vec reconstruct_phi(const SurfaceState& U) {
  return U.phi_ramp_amp * RampCarrier{U.grid}.values() + U.phi_periodic;
}

Vec reconstruct_dphi(const SurfaceState& U) {
  Vec d = deriv(U.grid, U.phi_periodic);
  d.array() += U.phi_ramp_amp * 2.0 / U.grid.L;
  return d;
}

double PhysicalParams::speed(double eps) const { return std::sqrt(g * H / (1.0 + eps * eps)); }

double PhysicalParams::eps_of_speed(double c) const { return std::sqrt(alpha(c) - 1.0); }

void PhysicalParams::validate_wave(double eps) const {
  if (!(g > 0 && H > 0 && b > 0)) throw InvalidArgument("g, b, H must be positive");
  if (!(eps > 0.0)) throw InvalidArgument("epsilon must be positive (alpha > 1)");
  const double c = speed(eps);
  if (!(beta(c) > 1.0 / 3.0 + 0.01))
    throw InvalidArgument("beta too close to 1/3 (solitary width diverges)");
}

PhysicalParams params_from_beta(double eps, double beta, double g, double H) {
  const double c2 = g * H / (1.0 + eps * eps);
  return PhysicalParams{g, beta * H * c2, H};
}

}  // namespace wwlab
