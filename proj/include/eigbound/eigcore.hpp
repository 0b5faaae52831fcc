#pragma once

// Self-contained Hermitian and symmetric tridiagonal eigensolvers, norms,
// Gerschgorin disks and the structured test matrices used throughout.
//
// eig_dense (cyclic Jacobi) and eig_tridiag (Sturm bisection + inverse
// iteration) share no code, so each can serve as the oracle of the other.

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstddef>
#include <limits>
#include <numeric>
#include <random>
#include <stdexcept>
#include <utility>
#include <vector>

#include "eigbound/matrix.hpp"

namespace eigbound {

class ConvergenceError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

namespace tol {
inline constexpr double residual = 1e-12;
inline constexpr double orthogonality = 1e-12;
inline constexpr int jacobi_max_sweeps = 30;
inline constexpr double eps = std::numeric_limits<double>::epsilon();
}  // namespace tol

namespace detail {

template <typename T>
void sort_spectrum(std::vector<double>& values, std::optional<Matrix<T>>& vectors) {
  std::vector<std::size_t> order(values.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });
  std::vector<double> sorted(values.size());
  for (std::size_t i = 0; i < order.size(); ++i) sorted[i] = values[order[i]];
  values = std::move(sorted);
  if (vectors) {
    Matrix<T> v(vectors->rows(), vectors->cols());
    for (std::size_t j = 0; j < order.size(); ++j)
      for (std::size_t i = 0; i < v.rows(); ++i) v(i, j) = (*vectors)(i, order[j]);
    vectors = std::move(v);
  }
}

}  // namespace detail

/// Full spectrum of a Hermitian matrix by cyclic Jacobi sweeps.
///
/// Each rotation first removes the phase of a(p,q) with a diagonal unitary,
/// then applies the real symmetric Jacobi rotation. Throws ConvergenceError
/// if off-diagonal mass survives tol::jacobi_max_sweeps sweeps.
inline Spectrum<cdouble> eig_dense(const DenseHermitian& a, bool want_vectors = true) {
  const std::size_t n = a.order();
  CMatrix m = a.entries();
  std::optional<CMatrix> v;
  if (want_vectors) v = CMatrix::identity(n);

  const double fro = frobenius_norm(m);
  const double abs_floor =
      std::max(tol::eps * 1e-3 * fro / static_cast<double>(n), std::numeric_limits<double>::min());

  bool converged = false;
  for (int sweep = 0; sweep < tol::jacobi_max_sweeps && !converged; ++sweep) {
    int rotations = 0;
    for (std::size_t p = 0; p + 1 < n; ++p) {
      for (std::size_t q = p + 1; q < n; ++q) {
        const cdouble h = m(p, q);
        const double r = std::abs(h);
        if (r == 0.0) continue;
        const double app = m(p, p).real();
        const double aqq = m(q, q).real();
        if (r <= abs_floor || r <= 0.25 * tol::eps * std::min(std::fabs(app), std::fabs(aqq))) {
          m(p, q) = m(q, p) = 0.0;
          continue;
        }
        ++rotations;
        const cdouble u = h / r;
        const double theta = (aqq - app) / (2.0 * r);
        double t = 1.0 / (std::fabs(theta) + std::sqrt(theta * theta + 1.0));
        if (theta < 0.0) t = -t;
        const double c = 1.0 / std::sqrt(t * t + 1.0);
        const double s = t * c;
        // G = diag(1, conj(u)) * [[c, s], [-s, c]] restricted to (p, q).
        const cdouble gpp = c, gpq = s;
        const cdouble gqp = -s * std::conj(u), gqq = c * std::conj(u);
        for (std::size_t k = 0; k < n; ++k) {
          const cdouble kp = m(k, p), kq = m(k, q);
          m(k, p) = kp * gpp + kq * gqp;
          m(k, q) = kp * gpq + kq * gqq;
        }
        for (std::size_t k = 0; k < n; ++k) {
          const cdouble pk = m(p, k), qk = m(q, k);
          m(p, k) = std::conj(gpp) * pk + std::conj(gqp) * qk;
          m(q, k) = std::conj(gpq) * pk + std::conj(gqq) * qk;
        }
        m(p, p) = app - t * r;
        m(q, q) = aqq + t * r;
        m(p, q) = m(q, p) = 0.0;
        if (v) {
          for (std::size_t k = 0; k < n; ++k) {
            const cdouble kp = (*v)(k, p), kq = (*v)(k, q);
            (*v)(k, p) = kp * gpp + kq * gqp;
            (*v)(k, q) = kp * gpq + kq * gqq;
          }
        }
      }
    }
    converged = rotations == 0;
  }
  if (!converged) throw ConvergenceError("eig_dense: Jacobi sweeps did not converge");

  Spectrum<cdouble> out;
  out.values.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.values[i] = m(i, i).real();
  out.vectors = std::move(v);
  detail::sort_spectrum(out.values, out.vectors);
  return out;
}

struct Disk {
  double center = 0.0;
  double radius = 0.0;
  friend bool operator==(const Disk&, const Disk&) = default;
};

inline std::vector<Disk> gerschgorin_disks(const SymTridiagonal& t) {
  std::vector<Disk> d(t.order());
  for (std::size_t i = 0; i < t.order(); ++i)
    d[i] = {t.diag(i), std::fabs(t.off_before(i)) + std::fabs(t.off(i))};
  return d;
}

/// Interval containing the whole spectrum (union of the Gerschgorin disks).
inline std::pair<double, double> gerschgorin_interval(const SymTridiagonal& t) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (const Disk& d : gerschgorin_disks(t)) {
    lo = std::min(lo, d.center - d.radius);
    hi = std::max(hi, d.center + d.radius);
  }
  return {lo, hi};
}

namespace detail {

inline double pivot_floor(const SymTridiagonal& t) {
  double bmax = 0.0;
  for (double b : t.offdiag()) bmax = std::max(bmax, b * b);
  return std::numeric_limits<double>::min() * std::max(1.0, bmax);
}

inline std::size_t sturm_count(const SymTridiagonal& t, double x, double pivmin) {
  std::size_t count = 0;
  double q = 1.0;
  for (std::size_t i = 0; i < t.order(); ++i) {
    const double b = t.off_before(i);
    q = (t.diag(i) - x) - (i == 0 ? 0.0 : b * b / q);
    if (std::fabs(q) < pivmin) q = q < 0.0 ? -pivmin : pivmin;
    if (q < 0.0) ++count;
  }
  return count;
}

}  // namespace detail

/// Number of eigenvalues strictly below x (LDL^T inertia; zero pivots are
/// replaced by a tiny positive value).
inline std::size_t sturm_count(const SymTridiagonal& t, double x) {
  return detail::sturm_count(t, x, detail::pivot_floor(t));
}

/// Absolute floor of the bisection width: eps^2 times the largest Gerschgorin
/// bound. Above it intervals shrink to 2 ulp of the eigenvalue itself, so
/// small eigenvalues of graded matrices keep their relative accuracy.
inline double bisection_tolerance(const SymTridiagonal& t) {
  const auto [lo, hi] = gerschgorin_interval(t);
  const double scale = std::max(std::fabs(lo), std::fabs(hi));
  return scale > 0.0 ? tol::eps * tol::eps * scale : std::numeric_limits<double>::min();
}

/// Eigenvalue of 0-based rank `index` by Sturm bisection.
inline double bisect_eigenvalue(const SymTridiagonal& t, std::size_t index) {
  if (index >= t.order()) throw std::out_of_range("bisect_eigenvalue: index out of range");
  if (t.order() == 1) return t.diag(0);
  const double pivmin = detail::pivot_floor(t);
  const double floor = bisection_tolerance(t);
  auto [lo, hi] = gerschgorin_interval(t);
  const double pad = 4.0 * tol::eps * std::max(std::fabs(lo), std::fabs(hi)) + pivmin;
  lo -= pad;
  hi += pad;
  for (int it = 0; it < 512; ++it) {
    if (hi - lo <= std::max(floor, 2.0 * tol::eps * std::max(std::fabs(lo), std::fabs(hi)))) break;
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    if (detail::sturm_count(t, mid, pivmin) > index)
      hi = mid;
    else
      lo = mid;
  }
  return 0.5 * (lo + hi);
}

inline std::vector<double> eigenvalues_by_bisection(const SymTridiagonal& t) {
  std::vector<double> w(t.order());
  for (std::size_t i = 0; i < w.size(); ++i) w[i] = bisect_eigenvalue(t, i);
  std::sort(w.begin(), w.end());
  return w;
}

namespace detail {

/// LU with partial pivoting of (T - shift I); U has two superdiagonals.
class ShiftedTridiagonalLU {
 public:
  ShiftedTridiagonalLU(const SymTridiagonal& t, double shift, double pivot_replacement)
      : n_(t.order()), u0_(n_), u1_(n_), u2_(n_), mult_(n_), swap_(n_, false) {
    double c0 = t.diag(0) - shift, c1 = t.off(0), c2 = 0.0;
    for (std::size_t i = 0; i + 1 < n_; ++i) {
      const double n0 = t.off(i), n1 = t.diag(i + 1) - shift, n2 = t.off(i + 1);
      if (std::fabs(c0) >= std::fabs(n0)) {
        if (std::fabs(c0) < pivot_replacement) c0 = std::copysign(pivot_replacement, c0);
        const double m = n0 / c0;
        u0_[i] = c0; u1_[i] = c1; u2_[i] = c2;
        mult_[i] = m;
        c0 = n1 - m * c1;
        c1 = n2 - m * c2;
      } else {
        const double m = c0 / n0;
        u0_[i] = n0; u1_[i] = n1; u2_[i] = n2;
        mult_[i] = m;
        swap_[i] = true;
        const double r0 = c1 - m * n1;
        const double r1 = c2 - m * n2;
        c0 = r0;
        c1 = r1;
      }
      c2 = 0.0;
      if (std::fabs(u0_[i]) < pivot_replacement) u0_[i] = std::copysign(pivot_replacement, u0_[i]);
    }
    if (std::fabs(c0) < pivot_replacement) c0 = std::copysign(pivot_replacement, c0);
    u0_[n_ - 1] = c0;
  }

  void solve(std::vector<double>& y) const {
    for (std::size_t i = 0; i + 1 < n_; ++i) {
      if (swap_[i]) std::swap(y[i], y[i + 1]);
      y[i + 1] -= mult_[i] * y[i];
    }
    for (std::size_t ii = n_; ii-- > 0;) {
      double s = y[ii];
      if (ii + 1 < n_) s -= u1_[ii] * y[ii + 1];
      if (ii + 2 < n_) s -= u2_[ii] * y[ii + 2];
      y[ii] = s / u0_[ii];
    }
  }

 private:
  std::size_t n_;
  std::vector<double> u0_, u1_, u2_, mult_;
  std::vector<bool> swap_;
};

inline double norm2(const std::vector<double>& x) {
  double s = 0.0;
  for (double v : x) s += v * v;
  return std::sqrt(s);
}

inline double tridiag_residual(const SymTridiagonal& t, const std::vector<double>& x, double lambda) {
  double s = 0.0;
  for (std::size_t i = 0; i < t.order(); ++i) {
    double r = (t.diag(i) - lambda) * x[i];
    if (i > 0) r += t.off(i - 1) * x[i - 1];
    if (i + 1 < t.order()) r += t.off(i) * x[i + 1];
    s += r * r;
  }
  return std::sqrt(s);
}

inline double one_norm(const SymTridiagonal& t) {
  double r = 0.0;
  for (std::size_t i = 0; i < t.order(); ++i)
    r = std::max(r, std::fabs(t.diag(i)) + std::fabs(t.off_before(i)) + std::fabs(t.off(i)));
  return r;
}

}  // namespace detail

/// Eigenvectors for ascending eigenvalues `values` by inverse iteration.
/// Eigenvalues closer than 1e-3 * ||T||_1 form a cluster whose vectors are
/// reorthogonalized (modified Gram-Schmidt) at every step.
/// Throws ConvergenceError when a residual target is missed.
inline RMatrix inverse_iteration(const SymTridiagonal& t, const std::vector<double>& values) {
  const std::size_t n = t.order();
  const std::size_t m = values.size();
  RMatrix vecs(n, m);
  if (m == 0) return vecs;
  if (n == 1) {
    for (std::size_t j = 0; j < m; ++j) vecs(0, j) = 1.0;
    return vecs;
  }
  const double tnorm = std::max(detail::one_norm(t), std::numeric_limits<double>::min());
  const double cluster_gap = 1e-3 * tnorm;
  const double target = 0.25 * tol::residual * tnorm;
  const double pivot_replacement = tol::eps * tnorm;
  constexpr int max_iterations = 8;

  std::size_t group_start = 0;
  double previous_shift = 0.0;
  for (std::size_t j = 0; j < m; ++j) {
    const double lambda = values[j];
    double shift = lambda;
    if (j > 0) {
      if (lambda - values[j - 1] > cluster_gap) group_start = j;
      const double pertol = 10.0 * tol::eps * std::max(std::fabs(lambda), tnorm * tol::eps);
      if (shift - previous_shift < pertol && j > group_start) shift = previous_shift + pertol;
    }
    previous_shift = shift;

    const detail::ShiftedTridiagonalLU lu(t, shift, pivot_replacement);
    std::mt19937_64 rng(0x9e3779b97f4a7c15ULL + j);
    std::uniform_real_distribution<double> dist(-1.0, 1.0);
    std::vector<double> x(n);
    for (double& xi : x) xi = dist(rng);

    bool ok = false;
    for (int it = 0; it < max_iterations && !ok; ++it) {
      const double scale = detail::norm2(x);
      for (double& xi : x) xi /= scale;
      lu.solve(x);
      for (std::size_t g = group_start; g < j; ++g) {
        double dot = 0.0;
        for (std::size_t i = 0; i < n; ++i) dot += vecs(i, g) * x[i];
        for (std::size_t i = 0; i < n; ++i) x[i] -= dot * vecs(i, g);
      }
      const double nx = detail::norm2(x);
      if (nx == 0.0 || !std::isfinite(nx)) break;
      for (double& xi : x) xi /= nx;
      ok = it >= 1 && detail::tridiag_residual(t, x, lambda) <= target;
    }
    if (!ok) throw ConvergenceError("inverse_iteration: no convergence for eigenvalue rank " + std::to_string(j));
    for (std::size_t i = 0; i < n; ++i) vecs(i, j) = x[i];
  }
  return vecs;
}

/// Full spectrum of a symmetric tridiagonal matrix. Eigenvalues by Sturm
/// bisection; eigenvectors by inverse iteration, falling back to Jacobi on
/// the dense embedding when inverse iteration fails.
inline Spectrum<double> eig_tridiag(const SymTridiagonal& t, bool want_vectors = true) {
  Spectrum<double> out;
  out.values = eigenvalues_by_bisection(t);
  if (!want_vectors) return out;
  try {
    out.vectors = inverse_iteration(t, out.values);
  } catch (const ConvergenceError&) {
    const Spectrum<cdouble> dense = eig_dense(t.to_dense(), true);
    RMatrix v(t.order(), t.order());
    for (std::size_t i = 0; i < t.order(); ++i)
      for (std::size_t j = 0; j < t.order(); ++j) v(i, j) = (*dense.vectors)(i, j).real();
    out.vectors = std::move(v);
  }
  return out;
}

inline double spectral_norm(const DenseHermitian& a) {
  const auto s = eig_dense(a, false);
  return std::max(std::fabs(s.values.front()), std::fabs(s.values.back()));
}

inline double spectral_norm(const SymTridiagonal& t) {
  const double lo = bisect_eigenvalue(t, 0);
  const double hi = bisect_eigenvalue(t, t.order() - 1);
  return std::max(std::fabs(lo), std::fabs(hi));
}

/// Largest singular value of a general (possibly rectangular) matrix via the
/// Hermitian dilation [[0, B^H], [B, 0]].
inline double spectral_norm(const CMatrix& b) {
  if (b.rows() == 0 || b.cols() == 0) return 0.0;
  const std::size_t r = b.rows(), c = b.cols();
  CMatrix dil(r + c, r + c);
  for (std::size_t i = 0; i < r; ++i)
    for (std::size_t j = 0; j < c; ++j) dil(c + i, j) = b(i, j);
  return eig_dense(DenseHermitian(std::move(dil)), false).values.back();
}

/// max_i ||A v_i - lambda_i v_i||_2 over the stored eigenpairs.
inline double max_residual(const DenseHermitian& a, const Spectrum<cdouble>& s) {
  const std::size_t n = a.order();
  double worst = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      cdouble r = -s.values[j] * (*s.vectors)(i, j);
      for (std::size_t k = 0; k < n; ++k) r += a(i, k) * (*s.vectors)(k, j);
      acc += std::norm(r);
    }
    worst = std::max(worst, std::sqrt(acc));
  }
  return worst;
}

inline double max_residual(const SymTridiagonal& t, const Spectrum<double>& s) {
  double worst = 0.0;
  for (std::size_t j = 0; j < s.size(); ++j)
    worst = std::max(worst, detail::tridiag_residual(t, s.vectors->column(j), s.values[j]));
  return worst;
}

/// ||V^H V - I||_max
template <typename T>
double orthogonality_error(const Matrix<T>& v) {
  double worst = 0.0;
  for (std::size_t a = 0; a < v.cols(); ++a)
    for (std::size_t b = a; b < v.cols(); ++b) {
      T dot{};
      for (std::size_t i = 0; i < v.rows(); ++i) dot += conj(v(i, a)) * v(i, b);
      worst = std::max(worst, std::abs(dot - (a == b ? T{1} : T{})));
    }
  return worst;
}

// ---------------------------------------------------------------------------
// Test-matrix generators

/// W+_{2n+1}: diagonal (n, n-1, ..., 1, 0, 1, ..., n), unit off-diagonals.
inline SymTridiagonal wilkinson_plus(int n) {
  if (n < 1) throw std::invalid_argument("wilkinson_plus: n must be >= 1");
  const std::size_t order = 2 * static_cast<std::size_t>(n) + 1;
  std::vector<double> d(order);
  for (std::size_t i = 0; i < order; ++i)
    d[i] = std::fabs(static_cast<double>(i) - static_cast<double>(n));
  return {std::move(d), std::vector<double>(order - 1, 1.0)};
}

struct WilkinsonSplit {
  SymTridiagonal a;  ///< W+ with the two couplings of the centre row removed
  SymTridiagonal e;  ///< only those two couplings
};

inline WilkinsonSplit wilkinson_split(int n) {
  if (n < 2) throw std::invalid_argument("wilkinson_split: n must be >= 2");
  SymTridiagonal w = wilkinson_plus(n);
  std::vector<double> off = w.offdiag();
  std::vector<double> eoff(off.size(), 0.0);
  const std::size_t c = static_cast<std::size_t>(n);
  off[c - 1] = off[c] = 0.0;
  eoff[c - 1] = eoff[c] = 1.0;
  return {SymTridiagonal(w.diag(), std::move(off)),
          SymTridiagonal(std::vector<double>(w.order(), 0.0), std::move(eoff))};
}

/// The 1000 x 1000 deflation example: diagonal (100, 999, 998, ..., 2, 1)
/// read literally from its tridiag{} display (leading 100, then 999 down to
/// 1), all off-diagonals 1.
inline SymTridiagonal aed_example_1000() {
  constexpr std::size_t n = 1000;
  std::vector<double> d(n);
  d[0] = 100.0;
  for (std::size_t i = 1; i < n; ++i) d[i] = static_cast<double>(n - i);
  return {std::move(d), std::vector<double>(n - 1, 1.0)};
}

}  // namespace eigbound
