// Linearisation about one solitary wave: Galerkin matrices of Λ_c, L_c and
// L(k) in a real orthonormal Fourier basis, spectra, constrained coercivity,
// the stable decomposition and linear evolution.
#pragma once

#include <string>
#include <vector>

#include "wwlab/dn.hpp"
#include "wwlab/solitary.hpp"

namespace wwlab {

// Orthonormal (in L² of the box) basis 1/√L, √(2/L)cos(ξ_m x), √(2/L)sin(ξ_m x),
// m = 1..N/2-1; the Nyquist mode is left out. Index 0 is the constant,
// 2m-1 the cosine and 2m the sine of mode m.
class FourierBasis {
 public:
  explicit FourierBasis(const Grid1D& g);
  const Grid1D& grid() const { return g_; }
  int size() const { return n_; }
  double xi_of(int i) const;  // wavenumber of basis function i
  const Mat& values() const { return B_; }  // N x n nodal values
  Vec analyse(const Vec& f) const;           // coefficients (exact for Nyquist-free f)
  Vec synthesise(const Vec& a) const;
  const Mat& derivative() const { return D_; }  // n x n matrix of ∂x
  // Galerkin matrix (e_i, a e_j) of the multiplication by a nodal field,
  // integrated on a 2N grid so that no aliasing enters.
  Mat multiplication(const Vec& a) const;

 private:
  Grid1D g_;
  int n_;
  Mat B_, D_;
  Grid1D fine_;
  Mat Bf_;
};

// Coefficient fields of the linearisation about Q (nodal, on the wave grid).
struct WaveCoefficients {
  double c = 0.0, g = 0.0, b = 0.0;
  Vec deta, Z, v, dZ, dv;
  Vec q3;  // (1+η'²)^{-3/2}
  Vec q1;  // (1+η'²)^{-1/2}
  Vec dphi;
};
WaveCoefficients wave_coefficients(const DirichletNeumann& dn, const SolitaryWave& Q);

// Operator on stacked coefficients (U1; U2), 2n x 2n.
struct OperatorMatrix {
  std::string name;
  Mat A;
  int n = 0;
  double k = 0.0;
  Grid1D grid;
  double symmetry_defect() const;  // max|A - Aᵀ| / max|A|
};

// Galerkin matrix of G[η] (or G_k) in the basis.
Mat dn_matrix(const DirichletNeumann& dn, const FourierBasis& B, const Vec& eta, double k = 0.0);

// Generic symmetric forms shared with the two-soliton code:
// [[-b∂x(q3∂x·) + g + a, w∂x], [-∂x(w·), G]] and
// [[-b∂x(q3∂x·) + g + ZG(Z·) + Zv', w∂x - ZG], [-∂x(w·) - G(Z·), G]].
Mat assemble_l_form(const FourierBasis& B, double b, double g, const Vec& q3, const Vec& a, const Vec& w,
                    const Mat& G);
Mat assemble_lambda_form(const FourierBasis& B, double b, double g, const Vec& q3, const Vec& Z,
                         const Vec& Zdv, const Vec& w, const Mat& G);

OperatorMatrix assemble_Lambda(const DirichletNeumann& dn, const FourierBasis& B,
                               const SolitaryWave& Q);
OperatorMatrix assemble_Lc(const DirichletNeumann& dn, const FourierBasis& B,
                           const SolitaryWave& Q);
// R_c and its inverse as 2n x 2n matrices.
Mat assemble_R(const FourierBasis& B, const WaveCoefficients& w, bool inverse);

struct ConjugationCheck {
  double padded_defect = 0.0;     // on the resolved modes, products taken on a 2x basis
  double truncated_defect = 0.0;  // same identity with every product truncated
};
ConjugationCheck check_conjugation(const DirichletNeumann& dn, const SolitaryWave& Q);

// J = [[0, I], [-I, 0]]
Mat symplectic_J(int n);
// Diagonal of the X⁰ Gram matrix in the basis: (1+ξ²) for U1, ξ²/√(1+ξ²) for U2.
Vec x0_gram(const FourierBasis& B);
// |U1|_{H¹} + |𝔓U2|_{L²} from coefficients.
double x0_norm_coeffs(const FourierBasis& B, const Vec& u);

// Λ_c applied to (0, S) with S = 2x/L the ramp carrier, projected on the basis.
Vec lambda_on_ramp(const FourierBasis& B, const WaveCoefficients& w);

struct KernelReport {
  double lambda_dx = 0.0;       // E⁰ norm of Λ_c ∂xQ
  double lc_rdx = 0.0;          // E⁰ norm of L_c R_c ∂xQ
  double lambda_dc = 0.0;       // E⁰ norm of Λ_c ∂cQ - J∂xQ
  double op_norm = 0.0;         // max|Λ_c|
  double dx_norm = 0.0;         // E⁰ norm of ∂xQ
  double jdx_norm = 0.0;        // E⁰ norm of J∂xQ
};
KernelReport kernel_identities(const DirichletNeumann& dn, const SolitaryWave& Q,
                               const SpeedDerivative& dQ);

// m(ξ) = bξ² + g - c²ξ/tanh(Hξ), with m(0) = g - c²/H.
struct DispersionCheck {
  Vec m;
  double min_value = 0.0;
  bool positive = false;
};
DispersionCheck dispersion_symbol(const PhysicalParams& p, double c, const Vec& xi);

struct StableDecomposition {
  double alpha = 0.0, beta = 0.0;
  Vec V1, V2;
  Vec U1, U2;
  double orth_jw = 0.0, orth_deta = 0.0;  // (V, JR∂xQ), (V1, ∂xη)
  double reconstruction = 0.0;            // max|αJW + βW + V - U|
};
StableDecomposition stable_decomposition(const Vec& U1, const Vec& U2, const WaveCoefficients& w,
                                         const Grid1D& g);

struct CoercivityResult {
  double min_constrained = 0.0;
  Vec minimizer;                    // coefficients of the minimiser
  std::vector<double> lowest;       // smallest unconstrained generalised eigenvalues
  int nonpositive = 0;              // unconstrained eigenvalues ≤ tol
  double tol = 0.0;
};
CoercivityResult coercivity_rayleigh(const OperatorMatrix& Lc, const FourierBasis& B,
                                     const WaveCoefficients& w);

struct LinearEvolution {
  std::vector<double> t, norm;  // X⁰ norm series
  double C = 0.0;               // max |U(t)| / ((1+t)|U⁰|)
  double log_exponent = 0.0;    // slope of log|U| against log t on the second half
  double exp_rate = 0.0;        // slope of log|U| against t on the second half
  Vec final_state;
};
LinearEvolution evolve_linear(const OperatorMatrix& L, const FourierBasis& B, const Vec& U0,
                              double T, double dt, int record_every = 1);

// Scaled wave (H = 1, c = 1, g = α, b = β) with the same ε and shape.
SolitaryWave scaled_wave(const DirichletNeumann& dn_unit, const PhysicalParams& p, double eps,
                         const NewtonOptions& opt = {});
OperatorMatrix assemble_Lk(const DirichletNeumann& dn, const FourierBasis& B,
                           const SolitaryWave& Qs, double k);

struct SpectrumResult {
  double k = 0.0;
  std::vector<cplx> eigenvalues;
  double max_real = 0.0;
  double pm_symmetry = 0.0;  // max over σ of dist(-σ, spectrum)
  double scale = 0.0;        // spectral radius
};
SpectrumResult spectrum_JL(const OperatorMatrix& L);

struct TransversePoint {
  double k = 0.0;
  double sigma = 0.0;       // unstable real eigenvalue, 0 if none
  double sigma_minus = 0.0; // same at -k
  double sigma_fine = 0.0;  // at 1.5N
  double imag = 0.0;        // imaginary part of the unstable eigenvalue
  bool converged = false;   // moves < 10% under N → 1.5N
  double pm_symmetry = 0.0;
  std::vector<cplx> spurious;  // unstable eigenvalues rejected by the refinement test
};
struct TransverseScan {
  std::vector<TransversePoint> points;
  double k_max_unstable = 0.0;  // largest k with an accepted σ > 0
  bool branch_exists = false;
  bool vanishes_beyond = false; // an accepted-stable k above the band exists
};
// Unstable real eigenvalues are those with Re σ > real_tol·scale and
// |Im σ| ≤ 1e-6·scale.
TransverseScan transverse_scan(const PhysicalParams& p, double eps, double L, int N,
                               const std::vector<double>& ks, double real_tol = 1e-6);

}  // namespace wwlab
