#pragma once

// Aggressive early deflation for symmetric tridiagonal matrices and a small
// implicit-QR driver that uses it.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "eigbound/eigcore.hpp"
#include "eigbound/log_scalar.hpp"
#include "eigbound/matrix.hpp"
#include "eigbound/tribounds.hpp"

namespace eigbound {

/// Window data for the trailing k x k block A2 = V D V^T of T.
/// D is ordered by decreasing magnitude; column i of V belongs to D[i].
struct AedOutcome {
  std::size_t k = 0;
  double coupling = 0.0;  ///< b_{n-k}
  std::vector<double> d;
  RMatrix v;
  std::vector<double> spike;  ///< t = b_{n-k} * V(1, :)
  std::vector<bool> deflatable;
  std::size_t count = 0;
  double tol = 0.0;
  double scale = 0.0;

  double spike_norm() const {
    double s = 0.0;
    for (double x : spike) s += x * x;
    return std::sqrt(s);
  }
};

inline AedOutcome aed_transform(const SymTridiagonal& t, std::size_t k) {
  const std::size_t n = t.order();
  if (k < 1 || k >= n) throw std::out_of_range("aed_transform: window k must lie in 1..n-1");
  const Spectrum<double> s = eig_tridiag(t.principal(n - k, k), true);
  std::vector<std::size_t> order(k);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::stable_sort(order.begin(), order.end(),
                   [&](std::size_t a, std::size_t b) { return std::fabs(s.values[a]) > std::fabs(s.values[b]); });
  AedOutcome out;
  out.k = k;
  out.coupling = t.off(n - k - 1);
  out.d.resize(k);
  out.v = RMatrix(k, k);
  out.spike.resize(k);
  out.deflatable.assign(k, false);
  for (std::size_t c = 0; c < k; ++c) {
    out.d[c] = s.values[order[c]];
    for (std::size_t r = 0; r < k; ++r) out.v(r, c) = (*s.vectors)(r, order[c]);
    out.spike[c] = out.coupling * out.v(0, c);
  }
  return out;
}

/// Flags window eigenvalues with |t_i| <= tol * scale.
inline AedOutcome deflation_decide(AedOutcome outcome, double tol, double scale) {
  if (!(tol > 0.0)) throw std::invalid_argument("deflation_decide: tol must be positive");
  if (!(scale > 0.0)) throw std::invalid_argument("deflation_decide: scale must be positive");
  outcome.tol = tol;
  outcome.scale = scale;
  outcome.count = 0;
  for (std::size_t i = 0; i < outcome.k; ++i) {
    outcome.deflatable[i] = std::fabs(outcome.spike[i]) <= tol * scale;
    outcome.count += outcome.deflatable[i] ? 1 : 0;
  }
  return outcome;
}

/// diag(I, V)^T T diag(I, V): A1, then D, with the spike in row/column n-k.
inline RMatrix arrow_matrix(const SymTridiagonal& t, const AedOutcome& o) {
  const std::size_t n = t.order(), m = n - o.k;
  RMatrix a(n, n);
  for (std::size_t i = 0; i < m; ++i) {
    a(i, i) = t.diag(i);
    if (i + 1 < m) a(i, i + 1) = a(i + 1, i) = t.off(i);
  }
  for (std::size_t c = 0; c < o.k; ++c) {
    a(m + c, m + c) = o.d[c];
    a(m - 1, m + c) = a(m + c, m - 1) = o.spike[c];
  }
  return a;
}

struct DeflationCheck {
  std::size_t index = 0;  ///< position in AedOutcome::d
  double value = 0.0;
  double spike = 0.0;               ///< |t_i|
  std::optional<LogScalar> bound;   ///< early-deflation bound at the best depth
  double observed = 0.0;            ///< distance to the nearest eigenvalue of T
  bool within_spike = false;        ///< observed <= |t_i| + slack
};

struct DeflationReport {
  std::vector<DeflationCheck> checks;
  double slack = 0.0;
  bool sound() const {
    return std::all_of(checks.begin(), checks.end(), [](const DeflationCheck& c) { return c.within_spike; });
  }
  double max_observed() const {
    double m = 0.0;
    for (const auto& c : checks) m = std::max(m, c.observed);
    return m;
  }
};

/// Compares every deflated window eigenvalue with the spectrum of T.
/// |t_i| is the residual of the unit vector e_i in arrow coordinates, so some
/// eigenvalue of T lies within |t_i|.
inline DeflationReport deflation_soundness_check(const SymTridiagonal& t, std::size_t k, const AedOutcome& o,
                                                 double slack = 1e-12) {
  if (o.k != k || k < 1 || k >= t.order()) throw std::invalid_argument("deflation_soundness_check: outcome does not match k");
  const auto full = eig_tridiag(t, false).values;
  const double alpha = default_alpha(t, k);
  DeflationReport r;
  r.slack = slack;
  for (std::size_t i = 0; i < o.k; ++i) {
    if (!o.deflatable[i]) continue;
    DeflationCheck c;
    c.index = i;
    c.value = o.d[i];
    c.spike = std::fabs(o.spike[i]);
    const auto it = std::lower_bound(full.begin(), full.end(), c.value);
    c.observed = std::numeric_limits<double>::infinity();
    if (it != full.end()) c.observed = std::fabs(*it - c.value);
    if (it != full.begin()) c.observed = std::min(c.observed, std::fabs(*std::prev(it) - c.value));
    if (o.coupling != 0.0) {
      const AedScanEntry e = aed_best_depth(t, k, c.value, alpha);
      c.bound = e.bound;
    } else {
      c.bound = LogScalar::zero();
    }
    c.within_spike = c.observed <= c.spike + slack;
    r.checks.push_back(c);
  }
  return r;
}

/// One implicit symmetric QR step with the Wilkinson shift (eigenvalue of the
/// trailing 2 x 2 closest to a_n), chasing the bulge with Givens rotations.
inline SymTridiagonal qr_sweep(const SymTridiagonal& t) {
  const std::size_t n = t.order();
  if (n < 2) throw std::invalid_argument("qr_sweep: order must be at least 2");
  std::vector<double> d = t.diag(), e = t.offdiag();
  if (std::all_of(e.begin(), e.end(), [](double x) { return x == 0.0; })) return t;

  const double bn = e[n - 2];
  const double delta = 0.5 * (d[n - 2] - d[n - 1]);
  double mu = d[n - 1];
  if (bn != 0.0) mu -= bn * bn / (delta + (delta >= 0.0 ? 1.0 : -1.0) * std::hypot(delta, bn));

  double x = d[0] - mu, z = e[0];
  for (std::size_t k = 0; k + 1 < n; ++k) {
    const double r = std::hypot(x, z);
    const double c = r == 0.0 ? 1.0 : x / r;
    const double s = r == 0.0 ? 0.0 : z / r;
    if (k > 0) e[k - 1] = r;
    const double dk = d[k], dk1 = d[k + 1], ek = e[k];
    d[k] = c * c * dk + 2.0 * c * s * ek + s * s * dk1;
    d[k + 1] = s * s * dk - 2.0 * c * s * ek + c * c * dk1;
    e[k] = c * s * (dk1 - dk) + (c * c - s * s) * ek;
    if (k + 2 < n) {
      z = s * e[k + 1];
      e[k + 1] *= c;
      x = e[k];
    }
  }
  return {std::move(d), std::move(e)};
}

namespace detail {

/// Householder reduction of a dense symmetric matrix to tridiagonal form;
/// the transform is diag(1, Q) so row/column 0 keeps its leading entry.
inline SymTridiagonal householder_tridiagonal(RMatrix a) {
  const std::size_t n = a.rows();
  for (std::size_t k = 0; k + 2 < n; ++k) {
    double alpha = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) alpha += a(i, k) * a(i, k);
    alpha = std::sqrt(alpha);
    if (alpha == 0.0) continue;
    if (a(k + 1, k) > 0.0) alpha = -alpha;
    std::vector<double> v(n, 0.0);
    v[k + 1] = a(k + 1, k) - alpha;
    for (std::size_t i = k + 2; i < n; ++i) v[i] = a(i, k);
    double vnorm2 = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) vnorm2 += v[i] * v[i];
    if (vnorm2 == 0.0) continue;
    // A <- H A H with H = I - 2 v v^T / (v^T v)
    std::vector<double> p(n, 0.0);
    for (std::size_t i = k; i < n; ++i)
      for (std::size_t j = k + 1; j < n; ++j) p[i] += a(i, j) * v[j];
    for (double& x : p) x *= 2.0 / vnorm2;
    double kappa = 0.0;
    for (std::size_t i = k + 1; i < n; ++i) kappa += v[i] * p[i];
    kappa /= vnorm2;
    for (std::size_t i = k; i < n; ++i) p[i] -= kappa * v[i];
    for (std::size_t i = k; i < n; ++i)
      for (std::size_t j = k; j < n; ++j) a(i, j) -= v[i] * p[j] + p[i] * v[j];
  }
  std::vector<double> d(n), e(n > 0 ? n - 1 : 0);
  for (std::size_t i = 0; i < n; ++i) d[i] = a(i, i);
  for (std::size_t i = 0; i + 1 < n; ++i) e[i] = a(i + 1, i);
  return {std::move(d), std::move(e)};
}

inline bool negligible(double b, double ai, double ai1, double tol) {
  return std::fabs(b) <= tol * (std::fabs(ai) + std::fabs(ai1));
}

}  // namespace detail

struct QrAedPass {
  std::size_t block_order = 0;
  std::size_t negligible_subdiagonals = 0;  ///< present when the pass began
  std::size_t subdiag_deflations = 0;       ///< 1 x 1 blocks locked by splitting
  std::size_t aed_deflations = 0;
  bool aed_ran = false;
  bool swept = false;
};

struct QrAedResult {
  Spectrum<double> spectrum;  ///< locked eigenvalues, ascending
  std::vector<QrAedPass> passes;
  std::size_t sweeps = 0;
  bool converged = false;
  std::size_t aed_total() const {
    std::size_t s = 0;
    for (const auto& p : passes) s += p.aed_deflations;
    return s;
  }
  std::size_t subdiag_total() const {
    std::size_t s = 0;
    for (const auto& p : passes) s += p.subdiag_deflations;
    return s;
  }
};

/// Alternates early deflation on a trailing window with Wilkinson-shift QR
/// sweeps. Deflated values are locked immediately; survivors are folded back
/// into tridiagonal form and their spikes recomputed on the next pass.
/// Deflation scale is ||T||_2; a subdiagonal is negligible when
/// |b_i| <= tol (|a_i| + |a_{i+1}|).
inline QrAedResult run_qr_with_aed(const SymTridiagonal& t, std::size_t window, double tol, std::size_t max_sweeps) {
  if (window < 1) throw std::invalid_argument("run_qr_with_aed: window must be at least 1");
  if (!(tol > 0.0)) throw std::invalid_argument("run_qr_with_aed: tol must be positive");
  QrAedResult res;
  const double scale = std::max(spectral_norm(t), std::numeric_limits<double>::min());
  std::vector<double> locked;
  std::vector<SymTridiagonal> stack{t};

  while (!stack.empty()) {
    SymTridiagonal b = std::move(stack.back());
    stack.pop_back();
    const std::size_t n = b.order();
    if (n == 1) {
      locked.push_back(b.diag(0));
      continue;
    }
    QrAedPass pass;
    pass.block_order = n;

    std::vector<std::size_t> cuts;
    for (std::size_t i = 0; i + 1 < n; ++i)
      if (detail::negligible(b.off(i), b.diag(i), b.diag(i + 1), tol)) cuts.push_back(i);
    if (!cuts.empty()) {
      pass.negligible_subdiagonals = cuts.size();
      std::size_t first = 0;
      cuts.push_back(n - 1);
      for (std::size_t c : cuts) {
        const std::size_t size = c + 1 - first;
        if (size == 1) {
          locked.push_back(b.diag(first));
          ++pass.subdiag_deflations;
        } else {
          stack.push_back(b.principal(first, size));
        }
        first = c + 1;
      }
      res.passes.push_back(pass);
      continue;
    }

    const std::size_t k = std::min(window, n - 1);
    const AedOutcome o = deflation_decide(aed_transform(b, k), tol, scale);
    pass.aed_ran = true;
    pass.aed_deflations = o.count;
    if (o.count > 0) {
      const std::size_t m = n - k;
      std::vector<std::size_t> keep;
      for (std::size_t i = 0; i < k; ++i) {
        if (o.deflatable[i])
          locked.push_back(o.d[i]);
        else
          keep.push_back(i);
      }
      std::vector<double> d(b.diag().begin(), b.diag().begin() + static_cast<long>(m));
      std::vector<double> e(b.offdiag().begin(), b.offdiag().begin() + static_cast<long>(m - 1));
      if (!keep.empty()) {
        RMatrix w(keep.size() + 1, keep.size() + 1);
        w(0, 0) = b.diag(m - 1);
        for (std::size_t c = 0; c < keep.size(); ++c) {
          w(c + 1, c + 1) = o.d[keep[c]];
          w(0, c + 1) = w(c + 1, 0) = o.spike[keep[c]];
        }
        const SymTridiagonal tail = detail::householder_tridiagonal(std::move(w));
        for (std::size_t c = 1; c < tail.order(); ++c) d.push_back(tail.diag(c));
        for (std::size_t c = 0; c + 1 < tail.order(); ++c) e.push_back(tail.off(c));
      }
      stack.emplace_back(std::move(d), std::move(e));
    } else {
      if (res.sweeps >= max_sweeps) {
        res.passes.push_back(pass);
        res.converged = false;
        std::sort(locked.begin(), locked.end());
        res.spectrum.values = std::move(locked);
        return res;
      }
      stack.push_back(qr_sweep(b));
      ++res.sweeps;
      pass.swept = true;
    }
    res.passes.push_back(pass);
  }
  res.converged = true;
  std::sort(locked.begin(), locked.end());
  res.spectrum.values = std::move(locked);
  return res;
}

}  // namespace eigbound
