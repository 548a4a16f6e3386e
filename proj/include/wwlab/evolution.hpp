// Nonlinear Zakharov system: right-hand side, RK4 stepping with a high-mode
// filter, and the conserved quantities.
#pragma once

#include <string>
#include <vector>

#include "wwlab/dn.hpp"
#include "wwlab/state.hpp"

namespace wwlab {

struct EvolutionConfig {
  double dt = 0.05;
  double T = 1.0;
  int filter_order = 8;
  double filter_strength = 36.0;  // exp(-strength) at the Nyquist mode; 0 disables
  int checkpoint_stride = 0;      // 0: keep only the final state
  double frame_speed = 0.0;       // evolve in the frame x - frame_speed·t
  void validate() const;
};

struct StateRate {
  Vec deta, dphi;  // dφ/dt acts on the periodic part; the ramp is time invariant
};

StateRate rhs(const DirichletNeumann& dn, const SurfaceState& U, const PhysicalParams& p,
              double frame_speed = 0.0);

struct Conserved {
  double energy = 0.0;
  double mass = 0.0;
  double momentum = 0.0;
};
Conserved conserved_quantities(const DirichletNeumann& dn, const SurfaceState& U,
                               const PhysicalParams& p);

struct Trajectory {
  std::vector<double> times;
  std::vector<Conserved> series;
  std::vector<double> checkpoint_times;
  std::vector<SurfaceState> checkpoints;
  SurfaceState final_state;
  bool cfl_warning = false;
};

struct EvolutionAborted : std::runtime_error {
  SurfaceState last_good;
  double t = 0.0;
  EvolutionAborted(const std::string& w, SurfaceState s, double time)
      : std::runtime_error(w), last_good(std::move(s)), t(time) {}
};

// Advisory bound 2.8/max|ω| with ω² = (g + bξ²) ξ tanh(Hξ) at the grid cutoff.
double stable_dt_bound(const Grid1D& g, const PhysicalParams& p);

Trajectory evolve(const DirichletNeumann& dn, const SurfaceState& U0, const EvolutionConfig& cfg,
                  const PhysicalParams& p, bool track_conserved = true);

// One classical RK4 step (no filter).
SurfaceState rk4_step(const DirichletNeumann& dn, const SurfaceState& U, double dt,
                      const PhysicalParams& p, double frame_speed = 0.0);
void apply_filter(SurfaceState& U, const EvolutionConfig& cfg);

// (x, φ) ↦ (-x, -φ): η(x) ↦ η(-x), φ(x) ↦ -φ(-x).
SurfaceState reverse(const SurfaceState& U);

}  // namespace wwlab
