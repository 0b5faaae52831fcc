#pragma once

// Eigenvalue perturbation bounds for a Hermitian A perturbed by a Hermitian E,
// both partitioned as [[X11, X21^H], [X21, X22]] with a trailing k x k block.
//
// The bounds rest on controlling the trailing eigenvector part x2 along the
// path A + tE: ||x2|| <= ||A21|| / gap (tail bound), which survives the
// perturbation as tau_i = (||A21|| + ||E21||) / (gap_i - 2||E||).

#include <algorithm>
#include <cmath>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <string_view>

#include "eigbound/eigcore.hpp"
#include "eigbound/log_scalar.hpp"
#include "eigbound/matrix.hpp"

namespace eigbound {

enum class Formula { weyl, quad_residual, theorem1, min_of };

inline std::string_view to_string(Formula f) {
  switch (f) {
    case Formula::weyl: return "weyl";
    case Formula::quad_residual: return "quad_residual";
    case Formula::theorem1: return "theorem1";
    case Formula::min_of: return "min_of";
  }
  return "unknown";
}

/// Three-term breakdown ||E11|| + 2||E21|| tau + ||E22|| tau^2.
struct BoundTerms {
  double e11 = 0.0;
  double cross = 0.0;
  double e22 = 0.0;
};

struct BoundReport {
  std::size_t index = 0;  ///< 1-based ascending eigenvalue rank
  Formula formula = Formula::weyl;
  LogScalar bound;
  std::optional<double> tau;
  double gap = 0.0;  ///< min_j |lambda_i - lambda_j(A22)|
  bool valid = false;
  BoundTerms components;
  double weyl = 0.0;  ///< ||E||_2, sound without any gap condition

  /// Best sound bound carried by the report: min(bound, weyl) when valid.
  LogScalar best() const {
    const LogScalar w = LogScalar::from_double(weyl);
    return valid ? min(bound, w) : w;
  }
};

/// Weyl: |lambda_i(A) - lambda_i(A+E)| <= ||E||_2.
inline double weyl_bound(const DenseHermitian& e) { return spectral_norm(e); }

namespace detail {

inline double min_distance(double x, std::span<const double> values) {
  double g = std::numeric_limits<double>::infinity();
  for (double v : values) g = std::min(g, std::fabs(x - v));
  return g;
}

inline void check_rank(std::size_t i, std::size_t n) {
  if (i < 1 || i > n) throw std::out_of_range("eigenvalue rank " + std::to_string(i) + " outside 1.." + std::to_string(n));
}

}  // namespace detail

/// Spectra and block norms of (A, E, split), computed once and shared by the
/// per-index bounds.
class BlockPerturbation {
 public:
  BlockPerturbation(DenseHermitian a, DenseHermitian e, BlockSplit split)
      : a_(std::move(a)), e_(std::move(e)), split_(split) {
    if (a_.order() != e_.order()) throw std::invalid_argument("A and E must have the same order");
    split_.validate(a_.order());
    lambda_ = eig_dense(a_, false).values;
    lambda22_ = eig_dense(trailing_block(a_, split_), false).values;
    norm_a_ = std::max(std::fabs(lambda_.front()), std::fabs(lambda_.back()));
    norm_a21_ = spectral_norm(coupling_block(a_, split_));
    norm_e_ = spectral_norm(e_);
    norm_e11_ = spectral_norm(leading_block(e_, split_));
    norm_e21_ = spectral_norm(coupling_block(e_, split_));
    norm_e22_ = spectral_norm(trailing_block(e_, split_));
  }

  std::size_t order() const { return a_.order(); }
  const std::vector<double>& eigenvalues() const { return lambda_; }
  double norm_e() const { return norm_e_; }

  double gap(std::size_t i) const {
    detail::check_rank(i, order());
    return detail::min_distance(lambda_[i - 1], lambda22_);
  }

  /// tau_i, or nullopt when the denominator is not positive. The refined
  /// variant subtracts ||E|| + ||E22|| instead of 2||E||.
  std::optional<double> tau(std::size_t i, bool refined = false) const {
    const double denom = gap(i) - (refined ? norm_e_ + norm_e22_ : 2.0 * norm_e_);
    if (!(denom > 0.0)) return std::nullopt;
    return (norm_a21_ + norm_e21_) / denom;
  }

  BoundReport weyl(std::size_t i) const {
    detail::check_rank(i, order());
    BoundReport r;
    r.index = i;
    r.formula = Formula::weyl;
    r.bound = LogScalar::from_double(norm_e_);
    r.gap = gap(i);
    r.valid = true;
    r.weyl = norm_e_;
    return r;
  }

  /// ||E11|| + 2||E21|| tau + ||E22|| tau^2; valid = false (bound = +inf)
  /// when tau is undefined.
  BoundReport theorem1(std::size_t i, bool refined = false) const {
    BoundReport r;
    r.index = i;
    r.formula = Formula::theorem1;
    r.gap = gap(i);
    r.weyl = norm_e_;
    r.tau = tau(i, refined);
    r.valid = r.tau.has_value();
    if (!r.valid) {
      r.bound = LogScalar::infinity();
      return r;
    }
    const double t = *r.tau;
    r.components = {norm_e11_, 2.0 * norm_e21_ * t, norm_e22_ * t * t};
    r.bound = LogScalar::from_double(norm_e11_) + LogScalar::from_double(r.components.cross) +
              LogScalar::from_double(r.components.e22);
    return r;
  }

 private:
  DenseHermitian a_, e_;
  BlockSplit split_;
  std::vector<double> lambda_, lambda22_;
  double norm_a_ = 0, norm_a21_ = 0, norm_e_ = 0, norm_e11_ = 0, norm_e21_ = 0, norm_e22_ = 0;
};

/// Combines reports for one index; the bound is the minimum over the valid
/// constituents and their Weyl fallbacks.
inline BoundReport min_of(std::span<const BoundReport> reports) {
  if (reports.empty()) throw std::invalid_argument("min_of: no reports");
  BoundReport r = reports.front();
  r.formula = Formula::min_of;
  r.bound = LogScalar::infinity();
  r.valid = false;
  for (const BoundReport& c : reports) {
    if (c.index != r.index) throw std::invalid_argument("min_of: reports for different indices");
    r.bound = min(r.bound, c.best());
    r.valid = true;
    if (c.formula == Formula::theorem1 && c.valid) {
      r.tau = c.tau;
      r.components = c.components;
    }
  }
  return r;
}

/// ||A21||_2 / min_j |lambda - lambda_j(A22)|: bounds ||x2|| for any unit
/// eigenvector x of A with eigenvalue lambda.
inline double eigvec_tail_bound(const DenseHermitian& a, BlockSplit split, double lambda) {
  split.validate(a.order());
  const auto a22 = eig_dense(trailing_block(a, split), false).values;
  const double g = detail::min_distance(lambda, a22);
  const double scale = std::max({1.0, std::fabs(a22.front()), std::fabs(a22.back())});
  if (g <= tol::residual * scale) throw std::domain_error("eigvec_tail_bound: lambda lies in the spectrum of A22");
  return spectral_norm(coupling_block(a, split)) / g;
}

inline std::optional<double> tau(const DenseHermitian& a, const DenseHermitian& e, BlockSplit split, std::size_t i,
                                 bool refined = false) {
  return BlockPerturbation(a, e, split).tau(i, refined);
}

/// Throws std::domain_error when tau_i is undefined.
inline BoundReport theorem1_bound(const DenseHermitian& a, const DenseHermitian& e, BlockSplit split, std::size_t i,
                                  bool refined = false) {
  BoundReport r = BlockPerturbation(a, e, split).theorem1(i, refined);
  if (!r.valid) throw std::domain_error("theorem1_bound: gap does not exceed the perturbation (tau undefined)");
  return r;
}

/// Quadratic residual bound ||E||^2 / min_j |lambda_i(A) - lambda_j(A2)| for
/// block-diagonal A = diag(A1, A2) perturbed only in its off-diagonal blocks.
/// Zero gap yields valid = false with bound = +inf; `weyl` holds the fallback.
inline BoundReport quadratic_residual_bound(const DenseHermitian& a, const DenseHermitian& e, BlockSplit split,
                                            std::size_t i) {
  split.validate(a.order());
  if (a.order() != e.order()) throw std::invalid_argument("A and E must have the same order");
  detail::check_rank(i, a.order());
  if (!is_zero(coupling_block(a, split)))
    throw std::invalid_argument("quadratic_residual_bound: A must be block diagonal");
  if (!is_zero(leading_block(e, split).entries()) || !is_zero(trailing_block(e, split).entries()))
    throw std::invalid_argument("quadratic_residual_bound: perturbation has nonzero diagonal blocks");

  const auto lambda = eig_dense(a, false).values;
  const auto a2 = eig_dense(trailing_block(a, split), false).values;
  const double norm_a = std::max(std::fabs(lambda.front()), std::fabs(lambda.back()));
  const double norm_e = spectral_norm(e);

  BoundReport r;
  r.index = i;
  r.formula = Formula::quad_residual;
  r.gap = detail::min_distance(lambda[i - 1], a2);
  r.weyl = norm_e;
  r.valid = r.gap > tol::residual * std::max(1.0, norm_a);
  r.bound = r.valid ? LogScalar::from_double(norm_e * norm_e / r.gap) : LogScalar::infinity();
  return r;
}

}  // namespace eigbound
