#pragma once

// First-order perturbation of a multiple eigenvalue lambda0 of a Hermitian A:
// the r eigenvalues near lambda0 of A + eps E are lambda0 + eps mu_i + O(eps^2)
// with mu_i the eigenvalues of Q1^H E Q1.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <stdexcept>
#include <vector>

#include "eigbound/eigcore.hpp"
#include "eigbound/matrix.hpp"

namespace eigbound {

struct MultipleEigContext {
  DenseHermitian a;
  double lambda0 = 0.0;
  std::size_t r = 0;
  std::size_t first_rank = 0;  ///< 0-based ascending rank of the cluster in eig(A)
  CMatrix q1;                  ///< n x r orthonormal basis of the eigenspace
  CMatrix q2;                  ///< n x (n - r) complement
  std::vector<double> rest;    ///< eigenvalues belonging to q2, ascending
  double gap = 0.0;            ///< distance from lambda0 to `rest` (+inf if empty)
};

/// Context for the ranks first..first+r-1 of A's ascending spectrum.
inline MultipleEigContext make_context(const DenseHermitian& a, std::size_t first, std::size_t r) {
  const std::size_t n = a.order();
  if (r < 1 || first + r > n) throw std::out_of_range("make_context: rank range outside the spectrum");
  const Spectrum<cdouble> s = eig_dense(a, true);
  MultipleEigContext c;
  c.a = a;
  c.r = r;
  c.first_rank = first;
  c.q1 = CMatrix(n, r);
  c.q2 = CMatrix(n, n - r);
  double sum = 0.0;
  for (std::size_t j = 0, in = 0, out = 0; j < n; ++j) {
    const bool inside = j >= first && j < first + r;
    for (std::size_t i = 0; i < n; ++i) (inside ? c.q1(i, in) : c.q2(i, out)) = (*s.vectors)(i, j);
    if (inside) {
      sum += s.values[j];
      ++in;
    } else {
      c.rest.push_back(s.values[j]);
      ++out;
    }
  }
  c.lambda0 = sum / static_cast<double>(r);
  c.gap = std::numeric_limits<double>::infinity();
  for (double v : c.rest) c.gap = std::min(c.gap, std::fabs(v - c.lambda0));
  return c;
}

/// Groups ascending eigenvalues into clusters of diameter <= cluster_tol *
/// ||A||_2 and returns a context for every cluster of size >= 2.
inline std::vector<MultipleEigContext> detect_multiple(const DenseHermitian& a, double cluster_tol) {
  if (!(cluster_tol > 0.0)) throw std::invalid_argument("detect_multiple: cluster_tol must be positive");
  const auto w = eig_dense(a, false).values;
  std::vector<MultipleEigContext> out;
  if (w.empty()) return out;
  const double width = cluster_tol * std::max(std::max(std::fabs(w.front()), std::fabs(w.back())),
                                              std::numeric_limits<double>::min());
  for (std::size_t start = 0; start < w.size();) {
    std::size_t end = start + 1;
    while (end < w.size() && w[end] - w[start] <= width) ++end;
    if (end - start >= 2) out.push_back(make_context(a, start, end - start));
    start = end;
  }
  return out;
}

/// Eigenvalues of the r x r compression Q1^H E Q1, ascending.
inline std::vector<double> compressed_eigenvalues(const MultipleEigContext& ctx, const DenseHermitian& e) {
  if (e.order() != ctx.a.order()) throw std::invalid_argument("E must match the order of A");
  return eig_dense(DenseHermitian(ctx.q1.adjoint() * e.entries() * ctx.q1), false).values;
}

/// lambda0 + eps mu_i, ascending.
inline std::vector<double> first_order_eigs(const MultipleEigContext& ctx, const DenseHermitian& e, double eps) {
  if (!(eps >= 0.0)) throw std::invalid_argument("first_order_eigs: eps must be nonnegative");
  std::vector<double> mu = compressed_eigenvalues(ctx, e);
  for (double& m : mu) m = ctx.lambda0 + eps * m;
  return mu;
}

struct ExpansionPoint {
  double eps = 0.0;
  double error = 0.0;      ///< max_i |lambda_i(A + eps E) - prediction_i|
  double gap_bound = 0.0;  ///< 2 x^2 / (g + sqrt(g^2 + 4 x^2)), x = ||eps E||
  double block_gap = 0.0;  ///< g: eig(lambda0 I + eps Q1^H E Q1) vs eig(Lambda + eps Q2^H E Q2)
  double floor = 0.0;      ///< 64 ulp of ||A + eps E||, the oracle resolution
  bool within_bound = false;
};

struct ExpansionFit {
  std::vector<ExpansionPoint> points;
  std::optional<double> slope;  ///< least-squares slope of log error vs log eps
  bool exact = false;           ///< every error at or below its floor
  bool all_within_bound() const {
    return std::all_of(points.begin(), points.end(), [](const ExpansionPoint& p) { return p.within_bound; });
  }
};

/// Fits the order of the remainder after the first-order term.
/// eps_grid must be strictly descending, positive, span at least two decades,
/// and satisfy eps ||E|| < gap / 4.
inline ExpansionFit expansion_order(const MultipleEigContext& ctx, const DenseHermitian& e,
                                    const std::vector<double>& eps_grid) {
  if (eps_grid.size() < 2) throw std::invalid_argument("expansion_order: grid needs at least two points");
  for (std::size_t i = 0; i < eps_grid.size(); ++i) {
    if (!(eps_grid[i] > 0.0)) throw std::invalid_argument("expansion_order: grid values must be positive");
    if (i > 0 && !(eps_grid[i] < eps_grid[i - 1])) throw std::invalid_argument("expansion_order: grid must descend");
  }
  if (std::log10(eps_grid.front() / eps_grid.back()) < 2.0 - 1e-12)
    throw std::invalid_argument("expansion_order: grid must span at least two decades");
  const double enorm = spectral_norm(e);
  if (!(eps_grid.front() * enorm < ctx.gap / 4.0))
    throw std::domain_error("expansion_order: eps ||E|| must stay below gap / 4");

  const std::size_t n = ctx.a.order();
  const CMatrix e_rest = ctx.q2.adjoint() * e.entries() * ctx.q2;
  ExpansionFit fit;
  std::vector<double> xs, ys;
  for (double eps : eps_grid) {
    ExpansionPoint p;
    p.eps = eps;
    const DenseHermitian pert = ctx.a + eps * e;
    const auto oracle = eig_dense(pert, false).values;
    const auto pred = first_order_eigs(ctx, e, eps);
    for (std::size_t i = 0; i < ctx.r; ++i) p.error = std::max(p.error, std::fabs(oracle[ctx.first_rank + i] - pred[i]));

    std::vector<double> other;
    if (n > ctx.r) {
      CMatrix m2 = eps * e_rest;
      for (std::size_t i = 0; i < n - ctx.r; ++i) m2(i, i) += ctx.rest[i];
      other = eig_dense(DenseHermitian(m2), false).values;
    }
    p.block_gap = std::numeric_limits<double>::infinity();
    for (double a : pred)
      for (double b : other) p.block_gap = std::min(p.block_gap, std::fabs(a - b));
    const double x = eps * enorm;
    p.gap_bound = std::isinf(p.block_gap) ? 0.0 : 2.0 * x * x / (p.block_gap + std::sqrt(p.block_gap * p.block_gap + 4.0 * x * x));
    p.floor = 64.0 * tol::eps * std::max(1.0, std::max(std::fabs(oracle.front()), std::fabs(oracle.back())));
    p.within_bound = p.error <= p.gap_bound + p.floor;
    if (p.error > p.floor) {
      xs.push_back(std::log10(eps));
      ys.push_back(std::log10(p.error));
    }
    fit.points.push_back(p);
  }
  fit.exact = xs.empty();
  if (xs.size() >= 2) {
    const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / static_cast<double>(xs.size());
    const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / static_cast<double>(ys.size());
    double sxy = 0.0, sxx = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      sxy += (xs[i] - mx) * (ys[i] - my);
      sxx += (xs[i] - mx) * (xs[i] - mx);
    }
    fit.slope = sxy / sxx;
  }
  return fit;
}

}  // namespace eigbound
