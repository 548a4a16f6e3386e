#include "wwlab/evolution.hpp"

#include <algorithm>
#include <cmath>

namespace wwlab {

void EvolutionConfig::validate() const {
  if (!(dt > 0.0)) throw InvalidArgument("dt must be positive");
  if (!(T >= 0.0)) throw InvalidArgument("T must be non-negative");
  if (std::fabs(T / dt - std::round(T / dt)) > 1e-9 * std::max(1.0, T / dt))
    throw InvalidArgument("T must be a whole number of steps dt");
  if (filter_strength < 0.0) throw InvalidArgument("filter strength must be >= 0");
  if (filter_order < 2) throw InvalidArgument("filter order must be >= 2");
}

StateRate rhs(const DirichletNeumann& dn, const SurfaceState& U, const PhysicalParams& p,
              double frame_speed) {
  const Grid1D& g = U.grid;
  U.validate(p.H);
  Vec G = dn.apply(U.eta, U.phi_periodic, U.phi_ramp_amp);
  Vec de = deriv(g, U.eta);
  Vec dphi = reconstruct_dphi(U);
  const auto s = (1.0 + de.array().square());
  Vec num = G + de.cwiseProduct(dphi);
  Vec curv = (de.array() / s.sqrt()).matrix();
  Vec f = -0.5 * dphi.cwiseProduct(dphi) + (0.5 * num.array().square() / s).matrix() - p.g * U.eta +
          p.b * deriv(g, curv);
  StateRate r;
  r.deta = G;
  r.dphi = drop_nyquist(g, f);
  if (frame_speed != 0.0) {
    r.deta += frame_speed * de;
    r.dphi += frame_speed * dphi;
  }
  return r;
}

Conserved conserved_quantities(const DirichletNeumann& dn, const SurfaceState& U, const PhysicalParams& p) {
  const Grid1D& g = U.grid;
  Vec G = dn.apply(U.eta, U.phi_periodic, U.phi_ramp_amp);
  Vec phi = reconstruct_phi(U);
  Vec de = deriv(g, U.eta);
  Conserved c;
  // G[η]φ is mean free, so the pairing does not depend on the additive
  // constant in φ; the linear carrier contributes through φ itself.
  c.energy = 0.5 * inner(g, phi, G) + 0.5 * p.g * inner(g, U.eta, U.eta) +
             p.b * integrate(g, ((1.0 + de.array().square()).sqrt() - 1.0).matrix());
  c.mass = integrate(g, U.eta);
  c.momentum = inner(g, U.eta, reconstruct_dphi(U));
  return c;
}

double stable_dt_bound(const Grid1D& g, const PhysicalParams& p) {
  const double k = g.xi_max();
  const double w = std::sqrt((p.g + p.b * k * k) * k * std::tanh(p.H * k));
  return 2.8 / w;
}

SurfaceState rk4_step(const DirichletNeumann& dn, const SurfaceState& U, double dt, const PhysicalParams& p,
                      double frame_speed) {
  auto add = [](const SurfaceState& a, const StateRate& r, double h) {
    SurfaceState b = a;
    b.eta += h * r.deta;
    b.phi_periodic += h * r.dphi;
    return b;
  };
  StateRate k1 = rhs(dn, U, p, frame_speed);
  StateRate k2 = rhs(dn, add(U, k1, 0.5 * dt), p, frame_speed);
  StateRate k3 = rhs(dn, add(U, k2, 0.5 * dt), p, frame_speed);
  StateRate k4 = rhs(dn, add(U, k3, dt), p, frame_speed);
  SurfaceState out = U;
  out.eta += dt / 6.0 * (k1.deta + 2.0 * k2.deta + 2.0 * k3.deta + k4.deta);
  out.phi_periodic += dt / 6.0 * (k1.dphi + 2.0 * k2.dphi + 2.0 * k3.dphi + k4.dphi);
  return out;
}

void apply_filter(SurfaceState& U, const EvolutionConfig& cfg) {
  if (cfg.filter_strength <= 0.0) return;
  const Grid1D& g = U.grid;
  const double km = g.xi_max();
  auto sym = [&](double k) {
    return cplx(std::exp(-cfg.filter_strength * std::pow(std::fabs(k) / km, cfg.filter_order)), 0.0);
  };
  U.eta = apply_multiplier(g, sym, U.eta);
  U.phi_periodic = apply_multiplier(g, sym, U.phi_periodic);
}

Trajectory evolve(const DirichletNeumann& dn, const SurfaceState& U0, const EvolutionConfig& cfg,
                  const PhysicalParams& p, bool track_conserved) {
  cfg.validate();
  U0.validate(p.H);
  Trajectory tr;
  tr.cfl_warning = cfg.dt > stable_dt_bound(U0.grid, p);
  const int steps = static_cast<int>(std::llround(cfg.T / cfg.dt));
  SurfaceState U = U0;
  auto record = [&](int n) {
    const double t = n * cfg.dt;
    if (track_conserved) {
      tr.times.push_back(t);
      tr.series.push_back(conserved_quantities(dn, U, p));
    }
    if (cfg.checkpoint_stride > 0 && n % cfg.checkpoint_stride == 0) {
      tr.checkpoint_times.push_back(t);
      tr.checkpoints.push_back(U);
    }
  };
  record(0);
  for (int n = 1; n <= steps; ++n) {
    SurfaceState next;
    try {
      next = rk4_step(dn, U, cfg.dt, p, cfg.frame_speed);
    } catch (const InvalidArgument& e) {
      throw EvolutionAborted(std::string("evolution aborted: ") + e.what(), U, (n - 1) * cfg.dt);
    }
    apply_filter(next, cfg);
    if (!next.eta.allFinite() || !next.phi_periodic.allFinite())
      throw EvolutionAborted("NaN detected during evolution", U, (n - 1) * cfg.dt);
    U = std::move(next);
    record(n);
  }
  tr.final_state = U;
  return tr;
}

SurfaceState reverse(const SurfaceState& U) {
  SurfaceState R = U;
  const int N = U.grid.N;
  for (int j = 0; j < N; ++j) {
    const int r = (N - j) % N;
    R.eta[j] = U.eta[r];
    R.phi_periodic[j] = -U.phi_periodic[r];
  }
  return R;
}

}  // namespace wwlab
