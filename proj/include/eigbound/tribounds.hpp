#pragma once

// Tridiagonal bounds: Gerschgorin-type decay of eigenvector components,
// the Wilkinson pair-gap estimates and the early-deflation perturbation
// bound. Rows are 1-based throughout this header.

#include <algorithm>
#include <cmath>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "eigbound/eigcore.hpp"
#include "eigbound/log_scalar.hpp"
#include "eigbound/matrix.hpp"

namespace eigbound {

namespace detail {

inline void check_row(const SymTridiagonal& t, std::size_t row) {
  if (row < 1 || row > t.order())
    throw std::out_of_range("row " + std::to_string(row) + " outside 1.." + std::to_string(t.order()));
}

inline double a_at(const SymTridiagonal& t, std::size_t row) { return t.diag(row - 1); }
/// b_row couples rows row and row+1; b_0 = b_n = 0.
inline double b_at(const SymTridiagonal& t, std::size_t row) {
  return row == 0 ? 0.0 : std::fabs(t.off(row - 1));
}

}  // namespace detail

/// (|b_{k-1}| + |b_k|) / |lambda - a_k| when the disk condition
/// |lambda - a_k| > |b_{k-1}| + |b_k| holds, nullopt otherwise.
inline std::optional<double> decay_step_bound(const SymTridiagonal& t, double lambda, std::size_t k) {
  detail::check_row(t, k);
  const double radius = detail::b_at(t, k - 1) + detail::b_at(t, k);
  const double gap = std::fabs(lambda - detail::a_at(t, k));
  if (!(gap > radius)) return std::nullopt;
  return radius / gap;
}

enum class DecayDirection { toward_center, toward_edge };

struct DecayProfile {
  std::size_t start = 0;  ///< row `from`
  std::size_t end = 0;    ///< row `to`
  int step = 1;           ///< +1 or -1
  DecayDirection direction = DecayDirection::toward_center;
  std::vector<double> ratios;         ///< ratio at rows start, start+step, ...
  std::vector<LogScalar> cumulative;  ///< running products of ratios
  std::optional<std::size_t> truncated_at;  ///< first row whose disk condition failed

  std::size_t size() const { return ratios.size(); }
  bool complete() const { return !truncated_at.has_value(); }
  /// Row whose component cumulative[m] is measured against.
  std::size_t reference_row(std::size_t m) const {
    return static_cast<std::size_t>(static_cast<long>(start) + step * static_cast<long>(m + 1));
  }
};

/// Chains decay_step_bound over rows from..to (inclusive). When `from` is an
/// end row, or its outer neighbour is no larger than x_from, every prefix
/// satisfies |x_from| <= cumulative[m] * |x_{reference_row(m)}|.
inline DecayProfile decay_profile(const SymTridiagonal& t, double lambda, std::size_t from, std::size_t to) {
  detail::check_row(t, from);
  detail::check_row(t, to);
  if (from == to) throw std::invalid_argument("decay_profile: from and to must differ");
  DecayProfile p;
  p.start = from;
  p.end = to;
  p.step = to > from ? 1 : -1;
  if (to + p.step < 1 || to + p.step > t.order())
    throw std::out_of_range("decay_profile: row after `to` must exist");
  const auto edge_distance = [&](std::size_t r) { return std::min(r - 1, t.order() - r); };
  p.direction = edge_distance(to) < edge_distance(from) ? DecayDirection::toward_edge : DecayDirection::toward_center;

  LogScalar acc = LogScalar::from_double(1.0);
  for (std::size_t row = from;; row = static_cast<std::size_t>(static_cast<long>(row) + p.step)) {
    const auto r = decay_step_bound(t, lambda, row);
    if (!r) {
      p.truncated_at = row;
      break;
    }
    acc *= LogScalar::from_double(*r);
    p.ratios.push_back(*r);
    p.cumulative.push_back(acc);
    if (row == to) break;
  }
  return p;
}

/// (4 / (3n)) * (1 / (n-2)!)^2 for the top pair of the split W+ of order 2n+1.
inline LogScalar wilkinson_gap_bound(int n) {
  if (n <= 4) throw std::invalid_argument("wilkinson_gap_bound: n must exceed 4");
  return LogScalar::from_log10(1, std::log10(4.0 / (3.0 * n)) - 2.0 * log10_factorial(n - 2));
}

/// 1 / ((n - ell + 1) ((n - ell - 1)!)^2) for the ell-th pair from the top.
inline LogScalar wilkinson_pair_gap_bound(int n, int ell) {
  if (n <= 4) throw std::invalid_argument("wilkinson_pair_gap_bound: n must exceed 4");
  if (ell < 1 || n - ell - 1 < 0)
    throw std::out_of_range("wilkinson_pair_gap_bound: ell must lie in 1.." + std::to_string(n - 1));
  return LogScalar::from_log10(1, -std::log10(static_cast<double>(n - ell + 1)) - 2.0 * log10_factorial(n - ell - 1));
}

// Early deflation: T of order n, trailing window of size k, coupling b_{n-k}.

struct AedBoundInput {
  SymTridiagonal t;
  std::size_t k = 1;
  std::size_t j = 1;
  double lambda = 0.0;  ///< eigenvalue of the trailing window
  double alpha = 0.0;   ///< bound on the eigenvalue drift along the path

  void validate() const {
    const std::size_t n = t.order();
    if (k < 1 || k >= n) throw std::out_of_range("AED window k must lie in 1..n-1");
    if (j < 1 || n - k + j > n - 1) throw std::out_of_range("AED depth j must lie in 1..k-1");
    if (!(alpha >= 0.0)) throw std::invalid_argument("alpha must be nonnegative");
  }
  std::size_t coupling_row() const { return t.order() - k; }
  /// Last row of the decay chain.
  std::size_t last_row() const { return t.order() - k + j; }
};

/// |b_{n-k}|, always a valid drift bound by Weyl.
inline double default_alpha(const SymTridiagonal& t, std::size_t k) {
  if (k < 1 || k >= t.order()) throw std::out_of_range("AED window k must lie in 1..n-1");
  return detail::b_at(t, t.order() - k);
}

/// Which neighbouring off-diagonal the eta denominator subtracts.
enum class NeighborRule { stated, proof_form, conservative };

/// Leading constant of the bound: printed_half uses b_{n-k}/2; full_derivative
/// uses b_{n-k}, accounting for both off-diagonal entries of the coupling.
enum class AedConstant { printed_half, full_derivative };

inline std::string to_string(NeighborRule r) {
  switch (r) {
    case NeighborRule::stated: return "stated";
    case NeighborRule::proof_form: return "proof_form";
    case NeighborRule::conservative: return "conservative";
  }
  return "unknown";
}

class AedBoundError : public std::domain_error {
 public:
  AedBoundError(std::size_t row, const std::string& what) : std::domain_error(what), row_(row) {}
  std::size_t row() const { return row_; }

 private:
  std::size_t row_;
};

/// b_i / (|a_i - lambda| - alpha - b'), b' chosen by `rule`; nullopt when the
/// denominator is not positive.
inline std::optional<double> aed_eta(const AedBoundInput& in, std::size_t i,
                                     NeighborRule rule = NeighborRule::conservative) {
  detail::check_row(in.t, i);
  const double b_prev = detail::b_at(in.t, i - 1), b_i = detail::b_at(in.t, i);
  double sub = b_i;
  if (rule == NeighborRule::proof_form) sub = b_prev;
  if (rule == NeighborRule::conservative) sub = std::max(b_prev, b_i);
  const double denom = std::fabs(detail::a_at(in.t, i) - in.lambda) - in.alpha - sub;
  if (!(denom > 0.0)) return std::nullopt;
  return b_i / denom;
}

/// eta at rows n-k, n-k+1, ..., n-k+j.
inline std::vector<std::optional<double>> eta_sequence(const AedBoundInput& in,
                                                       NeighborRule rule = NeighborRule::conservative) {
  in.validate();
  std::vector<std::optional<double>> out;
  for (std::size_t row = in.coupling_row(); row <= in.last_row(); ++row) out.push_back(aed_eta(in, row, rule));
  return out;
}

/// First row in 1..n-k+j violating |a_i - lambda| > |b_i| + alpha.
inline std::optional<std::size_t> gap_condition_failure(const AedBoundInput& in) {
  in.validate();
  for (std::size_t row = 1; row <= in.last_row(); ++row)
    if (!(std::fabs(detail::a_at(in.t, row) - in.lambda) > detail::b_at(in.t, row) + in.alpha)) return row;
  return std::nullopt;
}

/// The stronger per-row condition |a_i - lambda| > alpha + |b_{i-1}| + |b_i|
/// on rows 1..n-k+j, under which the component chain is monotone and the
/// full_derivative bound is rigorous.
inline bool monotone_chain_holds(const AedBoundInput& in) {
  in.validate();
  for (std::size_t row = 1; row <= in.last_row(); ++row) {
    const auto eta = aed_eta(in, row, NeighborRule::proof_form);
    if (!eta || !(*eta < 1.0)) return false;
  }
  return true;
}

/// c * eta_{n-k} * prod_{i=1..j} eta_{n-k+i}^2 with c = b_{n-k}/2 (printed)
/// or b_{n-k}. Throws AedBoundError naming the row of the first failure.
inline LogScalar aed_perturbation_bound(const AedBoundInput& in, NeighborRule rule = NeighborRule::conservative,
                                        AedConstant constant = AedConstant::printed_half) {
  in.validate();
  const double b = detail::b_at(in.t, in.coupling_row());
  if (b == 0.0) return LogScalar::zero();
  if (const auto bad = gap_condition_failure(in))
    throw AedBoundError(*bad, "gap condition |a_i - lambda| > b_i + alpha fails at row " + std::to_string(*bad));
  LogScalar bound = LogScalar::from_double(constant == AedConstant::printed_half ? 0.5 * b : b);
  for (std::size_t row = in.coupling_row(); row <= in.last_row(); ++row) {
    const auto eta = aed_eta(in, row, rule);
    if (!eta) throw AedBoundError(row, "eta denominator is not positive at row " + std::to_string(row));
    const LogScalar e = LogScalar::from_double(*eta);
    bound *= row == in.coupling_row() ? e : e * e;
  }
  return bound;
}

/// Largest j in 1..k-1 for which the gap condition holds on rows 1..n-k+j and
/// every eta is defined; 0 when none.
inline std::size_t max_valid_depth(const SymTridiagonal& t, std::size_t k, double lambda, double alpha,
                                   NeighborRule rule = NeighborRule::conservative) {
  AedBoundInput in{t, k, 1, lambda, alpha};
  in.validate();
  const std::size_t n = t.order();
  for (std::size_t row = 1; row < n - k; ++row)
    if (!(std::fabs(detail::a_at(t, row) - lambda) > detail::b_at(t, row) + alpha)) return 0;
  std::size_t best = 0;
  for (std::size_t j = 0; n - k + j <= n - 1; ++j) {
    const std::size_t row = n - k + j;
    if (!(std::fabs(detail::a_at(t, row) - lambda) > detail::b_at(t, row) + alpha)) break;
    if (!aed_eta(in, row, rule)) break;
    if (j >= 1) best = j;
  }
  return best;
}

/// Per window eigenvalue: the largest valid depth, the depth in 1..max_j
/// giving the smallest bound, and that bound (nullopt when no depth is valid).
struct AedScanEntry {
  double lambda = 0.0;
  std::size_t max_j = 0;
  std::size_t j = 0;
  std::optional<LogScalar> bound;
};

inline AedScanEntry aed_best_depth(const SymTridiagonal& t, std::size_t k, double lambda, double alpha,
                                   NeighborRule rule = NeighborRule::conservative,
                                   AedConstant constant = AedConstant::printed_half) {
  AedScanEntry e{lambda, max_valid_depth(t, k, lambda, alpha, rule), 0, std::nullopt};
  if (e.max_j == 0) return e;
  // prefix products of eta^2 avoid recomputing the chain for every depth
  AedBoundInput in{t, k, e.max_j, lambda, alpha};
  LogScalar running = aed_perturbation_bound(AedBoundInput{t, k, 1, lambda, alpha}, rule, constant);
  e.j = 1;
  e.bound = running;
  for (std::size_t j = 2; j <= e.max_j; ++j) {
    const LogScalar eta = LogScalar::from_double(*aed_eta(in, in.coupling_row() + j, rule));
    running *= eta * eta;
    if (running < *e.bound) {
      e.bound = running;
      e.j = j;
    }
  }
  return e;
}

inline std::vector<AedScanEntry> aed_bound_scan(const SymTridiagonal& t, std::size_t k, double alpha,
                                                NeighborRule rule = NeighborRule::conservative,
                                                AedConstant constant = AedConstant::printed_half) {
  if (k < 1 || k >= t.order()) throw std::out_of_range("AED window k must lie in 1..n-1");
  const auto window = eig_tridiag(t.principal(t.order() - k, k), false).values;
  std::vector<AedScanEntry> out;
  out.reserve(window.size());
  for (double lambda : window) out.push_back(aed_best_depth(t, k, lambda, alpha, rule, constant));
  return out;
}

}  // namespace eigbound
