// Measurement suites shared by the command line driver and the acceptance run.
#pragma once

#include <cstdint>
#include <vector>

#include "wwlab/dn.hpp"

namespace wwlab {

// Random real field with coefficients on |ξ| ≤ frac·ξmax, deterministic in seed.
Vec random_band_limited(const Grid1D& g, std::uint64_t seed, double frac = 0.5, bool mean_free = true);

struct DNCheck {
  double flat_symbol_error = 0.0;  // max|G[0]ψ - ξtanh(Hξ)ψ| / max|ξtanh(Hξ)ψ|
  double constant_error = 0.0;     // max|G[η]·1|
  double symmetry_ratio = 0.0;     // max |(u,Gv) - (v,Gu)| / (|𝔓u||𝔓v|)
  std::vector<double> shape_steps, shape_errors;
  double shape_order = 0.0;        // smallest observed order between successive steps
};
// η is the test surface; ψ, ζ and the symmetry pairs are random band-limited fields.
DNCheck dn_check(const DirichletNeumann& dn, const Vec& eta, int pairs, std::uint64_t seed);

}  // namespace wwlab
