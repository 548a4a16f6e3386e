#include "wwlab/grid.hpp"

#include <fftw3.h>

#include <cmath>
#include <cstring>
#include <memory>
#include <mutex>
#include <tuple>

namespace wwlab {

namespace {

// FFTW's planner is not thread safe; execution on distinct buffers is.
// Each thread keeps its own plans and scratch buffers.
std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

struct Plan {
  fftw_plan fwd = nullptr;
  fftw_plan inv = nullptr;
  double* r = nullptr;
  fftw_complex* c = nullptr;
  int n = 0, rows = 0;
  ~Plan() {
    std::lock_guard<std::mutex> lk(planner_mutex());
    if (fwd) fftw_destroy_plan(fwd);
    if (inv) fftw_destroy_plan(inv);
    if (r) fftw_free(r);
    if (c) fftw_free(c);
  }
};

Plan& get_plan(int n, int rows) {
  thread_local std::map<std::pair<int, int>, std::unique_ptr<Plan>> cache;
  auto key = std::make_pair(n, rows);
  auto it = cache.find(key);
  if (it != cache.end()) return *it->second;
  auto p = std::make_unique<Plan>();
  p->n = n;
  p->rows = rows;
  const int nc = n / 2 + 1;
  std::lock_guard<std::mutex> lk(planner_mutex());
  p->r = fftw_alloc_real(static_cast<size_t>(n) * rows);
  p->c = fftw_alloc_complex(static_cast<size_t>(nc) * rows);
  int dims[1] = {n};
  p->fwd = fftw_plan_many_dft_r2c(1, dims, rows, p->r, nullptr, 1, n, p->c, nullptr, 1, nc,
                                  FFTW_ESTIMATE);
  p->inv = fftw_plan_many_dft_c2r(1, dims, rows, p->c, nullptr, 1, nc, p->r, nullptr, 1, n,
                                  FFTW_ESTIMATE);
  auto& ref = *p;
  cache.emplace(key, std::move(p));
  return ref;
}

}  // namespace

Grid1D make_grid(double L, int N) {
  if (!(L > 0.0) || !std::isfinite(L)) throw InvalidArgument("grid length must be positive");
  if (N < 16 || N % 2 != 0) throw InvalidArgument("grid size must be even and >= 16");
  return Grid1D{L, N};
}

Vec Grid1D::nodes() const {
  Vec x(N);
  for (int j = 0; j < N; ++j) x[j] = this->x(j);
  return x;
}

double Grid1D::xi(int m) const { return 2.0 * M_PI * m / L; }

Vec Grid1D::wavenumbers() const {
  Vec k(N);
  for (int m = 0; m < N; ++m) k[m] = xi(m < N / 2 ? m : m - N);
  return k;
}

CVec forward(const Grid1D& g, const Vec& f) {
  if (f.size() != g.N) throw InvalidArgument("field length does not match grid");
  Plan& p = get_plan(g.N, 1);
  std::memcpy(p.r, f.data(), sizeof(double) * g.N);
  fftw_execute(p.fwd);
  CVec out(g.N / 2 + 1);
  std::memcpy(static_cast<void*>(out.data()), p.c, sizeof(fftw_complex) * (g.N / 2 + 1));
  return out;
}

Vec inverse(const Grid1D& g, const CVec& fh) {
  if (fh.size() != g.N / 2 + 1) throw InvalidArgument("spectrum length does not match grid");
  Plan& p = get_plan(g.N, 1);
  std::memcpy(p.c, fh.data(), sizeof(fftw_complex) * (g.N / 2 + 1));
  fftw_execute(p.inv);
  Vec out(g.N);
  const double s = 1.0 / g.N;
  for (int j = 0; j < g.N; ++j) out[j] = p.r[j] * s;
  return out;
}

void forward_rows(const Grid1D& g, const RowMat& in, CRowMat& out) {
  const int rows = static_cast<int>(in.rows());
  const int nc = g.N / 2 + 1;
  Plan& p = get_plan(g.N, rows);
  std::memcpy(p.r, in.data(), sizeof(double) * g.N * rows);
  fftw_execute(p.fwd);
  out.resize(rows, nc);
  std::memcpy(static_cast<void*>(out.data()), p.c, sizeof(fftw_complex) * nc * rows);
}

void inverse_rows(const Grid1D& g, const CRowMat& in, RowMat& out) {
  const int rows = static_cast<int>(in.rows());
  const int nc = g.N / 2 + 1;
  Plan& p = get_plan(g.N, rows);
  std::memcpy(p.c, in.data(), sizeof(fftw_complex) * nc * rows);
  fftw_execute(p.inv);
  out.resize(rows, g.N);
  const double s = 1.0 / g.N;
  for (long i = 0; i < static_cast<long>(rows) * g.N; ++i) out.data()[i] = p.r[i] * s;
}

Vec apply_multiplier(const Grid1D& g, const Symbol& symbol, const Vec& f) {
  CVec fh = forward(g, f);
  const int h = g.N / 2;
  for (int m = 0; m <= h; ++m) {
    cplx s;
    if (m == h) {
      s = 0.5 * (symbol(g.xi(h)) + symbol(-g.xi(h)));
    } else {
      s = symbol(g.xi(m));
    }
    if (std::isnan(s.real()) || std::isnan(s.imag()))
      throw NumericalDomainError("multiplier symbol is NaN at a grid wavenumber");
    fh[m] *= s;
  }
  return inverse(g, fh);
}

Vec deriv(const Grid1D& g, const Vec& f, int order) {
  CVec fh = forward(g, f);
  const int h = g.N / 2;
  for (int m = 0; m <= h; ++m) {
    cplx ik(0.0, g.xi(m));
    fh[m] *= std::pow(ik, order);
  }
  if (order % 2 == 1) fh[h] = 0.0;
  return inverse(g, fh);
}

Vec drop_nyquist(const Grid1D& g, const Vec& f) {
  CVec fh = forward(g, f);
  fh[g.N / 2] = 0.0;
  return inverse(g, fh);
}

Vec drop_mean(const Grid1D& g, const Vec& f) {
  (void)g;
  return (f.array() - f.mean()).matrix();
}

Vec shift(const Grid1D& g, const Vec& f, double a) {
  CVec fh = forward(g, f);
  const int h = g.N / 2;
  for (int m = 0; m < h; ++m) fh[m] *= std::exp(cplx(0.0, -g.xi(m) * a));
  fh[h] *= std::cos(g.xi(h) * a);
  return inverse(g, fh);
}

Vec frac_op(const Grid1D& g, const Vec& f) {
  return apply_multiplier(
      g, [](double k) { return cplx(0.0, k) * std::pow(1.0 + k * k, -0.25); }, f);
}

Vec antiderivative(const Grid1D& g, const Vec& f) {
  CVec fh = forward(g, f);
  const int h = g.N / 2;
  fh[0] = 0.0;
  fh[h] = 0.0;
  for (int m = 1; m < h; ++m) fh[m] /= cplx(0.0, g.xi(m));
  Vec F = inverse(g, fh);
  return (F.array() - F[0]).matrix();
}

Vec resample(const Grid1D& from, const Vec& f, const Grid1D& to) {
  if (from.L != to.L) throw InvalidArgument("resample requires equal box lengths");
  CVec fh = forward(from, f);
  CVec th = CVec::Zero(to.N / 2 + 1);
  const int hf = from.N / 2, ht = to.N / 2;
  const int m_max = std::min(hf, ht) - 1;
  const double scale = static_cast<double>(to.N) / from.N;
  for (int m = 0; m <= m_max; ++m) th[m] = fh[m] * scale;
  // Nodes of both grids start at -L/2, so no phase correction is needed.
  return inverse(to, th);
}

double integrate(const Grid1D& g, const Vec& f) { return g.dx() * f.sum(); }

double inner(const Grid1D& g, const Vec& a, const Vec& b) {
  if (a.size() != g.N || b.size() != g.N) throw InvalidArgument("grid mismatch in inner product");
  return g.dx() * a.dot(b);
}

double l2_norm(const Grid1D& g, const Vec& f) { return std::sqrt(inner(g, f, f)); }

double h1_norm(const Grid1D& g, const Vec& f) {
  Vec d = deriv(g, f);
  return std::sqrt(inner(g, f, f) + inner(g, d, d));
}

double x0_norm(const Grid1D& g, const Vec& u1, const Vec& u2) {
  if (u1.size() != g.N || u2.size() != g.N) throw InvalidArgument("grid mismatch in x0_norm");
  return h1_norm(g, u1) + l2_norm(g, frac_op(g, u2));
}

double es_norm(const Grid1D& g, const EsSnapshots& snaps, int s) {
  double total = 0.0;
  for (int a = 0; a <= s; ++a) {
    for (int b = 0; a + b <= s; ++b) {
      auto it = snaps.find({a, b});
      if (it == snaps.end())
        throw InvalidArgument("missing derivative snapshot (" + std::to_string(a) + "," +
                              std::to_string(b) + ")");
      total += l2_norm(g, it->second.first) + l2_norm(g, it->second.second);
    }
  }
  return total;
}

}  // namespace wwlab
