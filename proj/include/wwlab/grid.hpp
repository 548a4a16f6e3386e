// Periodic grid, FFT-based multipliers and the norms used throughout.
#pragma once

#include <complex>
#include <functional>
#include <map>
#include <stdexcept>
#include <string>
#include <utility>

#include <Eigen/Dense>

namespace wwlab {

using Vec = Eigen::VectorXd;
using CVec = Eigen::VectorXcd;
using Mat = Eigen::MatrixXd;
using cplx = std::complex<double>;

// Error categories surfaced to the CLI.
struct InvalidArgument : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};
struct NumericalDomainError : std::domain_error {
  using std::domain_error::domain_error;
};
struct SolverFailure : std::runtime_error {
  double last_residual = 0.0;
  SolverFailure(const std::string& what, double r)
      : std::runtime_error(what), last_residual(r) {}
};

struct Grid1D {
  double L = 0.0;
  int N = 0;

  double dx() const { return L / N; }
  double x(int j) const { return -0.5 * L + j * dx(); }
  Vec nodes() const;
  // Wavenumber of the m-th coefficient, m in [-N/2, N/2].
  double xi(int m) const;
  // FFT-ordered wavenumbers: 0, 1, .., N/2-1, -N/2, .., -1 (times 2π/L).
  Vec wavenumbers() const;
  double xi_max() const { return M_PI * N / L; }
  bool operator==(const Grid1D& o) const { return L == o.L && N == o.N; }
  bool operator!=(const Grid1D& o) const { return !(*this == o); }
};

Grid1D make_grid(double L, int N);

// Half-spectrum transforms (N/2+1 coefficients). forward is unnormalised,
// inverse divides by N, so inverse(forward(f)) == f.
CVec forward(const Grid1D& g, const Vec& f);
Vec inverse(const Grid1D& g, const CVec& fh);

// Batched row transforms on a row-major (rows x N) block.
using RowMat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
using CRowMat = Eigen::Matrix<cplx, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;
void forward_rows(const Grid1D& g, const RowMat& in, CRowMat& out);
void inverse_rows(const Grid1D& g, const CRowMat& in, RowMat& out);

using Symbol = std::function<cplx(double)>;

// Coefficient-wise multiplication. At the Nyquist mode the Hermitian average
// (s(ξ)+s(-ξ))/2 is used so that real input gives real output.
Vec apply_multiplier(const Grid1D& g, const Symbol& symbol, const Vec& f);

Vec deriv(const Grid1D& g, const Vec& f, int order = 1);
Vec drop_nyquist(const Grid1D& g, const Vec& f);
Vec drop_mean(const Grid1D& g, const Vec& f);
// f(x - a) by Fourier phase shift.
Vec shift(const Grid1D& g, const Vec& f, double a);
// 𝔓 = (1-∂²)^{-1/4} ∂
Vec frac_op(const Grid1D& g, const Vec& f);
// Periodic antiderivative with value 0 at x = -L/2; requires mean-free input.
Vec antiderivative(const Grid1D& g, const Vec& f);
// Band-limited interpolation onto another grid with the same L.
Vec resample(const Grid1D& from, const Vec& f, const Grid1D& to);

double integrate(const Grid1D& g, const Vec& f);
double inner(const Grid1D& g, const Vec& a, const Vec& b);
double l2_norm(const Grid1D& g, const Vec& f);
double h1_norm(const Grid1D& g, const Vec& f);
// |U1|_{H^1} + |𝔓U2|_{L^2}
double x0_norm(const Grid1D& g, const Vec& u1, const Vec& u2);

// Keys are (time order α, space order β); each entry is the pair of fields
// ∂_t^α ∂_x^β (U1, U2).
using EsSnapshots = std::map<std::pair<int, int>, std::pair<Vec, Vec>>;
double es_norm(const Grid1D& g, const EsSnapshots& snaps, int s);

struct NormReport {
  double x0 = 0.0;
  double l2_eta = 0.0;
  double l2_phi = 0.0;
  double es = -1.0;  // negative when not computed
};

}  // namespace wwlab
