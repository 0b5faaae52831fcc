#pragma once

// Drivers behind the command-line tool. Each returns a RunReport; the case
// studies also carry their expected values as PASS/FAIL checks.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <random>
#include <stdexcept>
#include <string>
#include <vector>

#include "eigbound/aed.hpp"
#include "eigbound/blockbounds.hpp"
#include "eigbound/eigcore.hpp"
#include "eigbound/log_scalar.hpp"
#include "eigbound/matrix.hpp"
#include "eigbound/multiexp.hpp"
#include "eigbound/report.hpp"
#include "eigbound/tribounds.hpp"

namespace eigbound {

namespace detail {

inline double nearest_distance(double x, const std::vector<double>& sorted) {
  const auto it = std::lower_bound(sorted.begin(), sorted.end(), x);
  double d = std::numeric_limits<double>::infinity();
  if (it != sorted.end()) d = *it - x;
  if (it != sorted.begin()) d = std::min(d, x - *std::prev(it));
  return d;
}

/// Decades between a bound and what it must cover; negative means violated.
inline std::string decades(double bound, double observed) {
  if (observed <= 0.0) return bound > 0.0 ? fmt::pos_unbounded : "0";
  if (bound <= 0.0) return fmt::neg_unbounded;
  return fmt::num(std::log10(bound / observed));
}

inline Check at_most(std::string name, double observed, double limit) {
  return {std::move(name), observed <= limit, fmt::num(observed), "<= " + fmt::num(limit), fmt::num(limit - observed)};
}

inline Check at_least(std::string name, double observed, double limit) {
  return {std::move(name), observed >= limit, fmt::num(observed), ">= " + fmt::num(limit), fmt::num(observed - limit)};
}

inline Check within(std::string name, double observed, double lo, double hi) {
  return {std::move(name), observed >= lo && observed <= hi, fmt::num(observed),
          "[" + fmt::num(lo) + ", " + fmt::num(hi) + "]", fmt::num(std::min(observed - lo, hi - observed))};
}

inline double max_abs_eig(const std::vector<double>& w) {
  return std::max(std::fabs(w.front()), std::fabs(w.back()));
}

}  // namespace detail

// ---------------------------------------------------------------------------
// Block perturbation bounds

struct BlockOptions {
  std::size_t k = 1;                 ///< order of the trailing block
  std::vector<std::size_t> indices;  ///< 1-based ranks; empty means all
  bool refined = false;
  bool verify = false;
};

/// Rank-paired shifts are compared with each bound up to 64 ulp of the
/// larger of ||A|| and ||A + E||, the resolution of the oracle.
inline RunReport cmd_bound_block(const DenseHermitian& a, const DenseHermitian& e, const BlockOptions& opt,
                                 std::string echo = "bound-block") {
  if (a.order() != e.order())
    throw std::invalid_argument("A has order " + std::to_string(a.order()) + " but E has order " +
                                std::to_string(e.order()));
  const std::size_t n = a.order();
  const BlockSplit split{opt.k};
  split.validate(n);
  std::vector<std::size_t> indices = opt.indices;
  if (indices.empty())
    for (std::size_t i = 1; i <= n; ++i) indices.push_back(i);
  for (std::size_t i : indices)
    if (i < 1 || i > n) throw std::out_of_range("index " + std::to_string(i) + " outside 1.." + std::to_string(n));

  const bool quad_shape = is_zero(coupling_block(a, split)) && is_zero(leading_block(e, split).entries()) &&
                          is_zero(trailing_block(e, split).entries());
  const BlockPerturbation bp(a, e, split);

  RunReport rep(std::move(echo));
  std::vector<double> before, after;
  double slack = 0.0;
  if (opt.verify) {
    before = eig_dense(a, false).values;
    after = eig_dense(a + e, false).values;
    slack = 64.0 * tol::eps * std::max({1.0, detail::max_abs_eig(before), detail::max_abs_eig(after)});
  }

  std::size_t valid_t1 = 0;
  for (std::size_t i : indices) {
    std::vector<BoundReport> reports{bp.weyl(i)};
    if (quad_shape) reports.push_back(quadratic_residual_bound(a, e, split, i));
    reports.push_back(bp.theorem1(i, opt.refined));
    valid_t1 += reports.back().valid;
    reports.push_back(min_of(reports));
    for (const BoundReport& r : reports) {
      Record& rec = rep.add("bound");
      rec.set("index", i).set("eigenvalue", bp.eigenvalues()[i - 1]).set("formula", std::string(to_string(r.formula)));
      rec.set("valid", r.valid).set_bound(r.bound);
      rec.set("gap", r.gap);
      if (r.formula == Formula::theorem1) {
        rec.set("refined", opt.refined);
        rec.set("tau", r.tau ? fmt::num(*r.tau) : std::string(fmt::undefined));
      }
      if (!opt.verify) continue;
      const double shift = std::fabs(after[i - 1] - before[i - 1]);
      rec.set("observed", shift);
      if (!r.valid) {
        rec.set("sound", "not_applicable");
        continue;
      }
      const double b = r.bound.representable() ? r.bound.to_double() : 0.0;
      const bool ok = shift <= b + slack;
      rec.set("margin", detail::decades(b + slack, shift)).set("sound", ok);
      if (!ok) rep.violation("index=" + std::to_string(i) + " formula=" + std::string(to_string(r.formula)));
    }
  }
  rep.note("indices", fmt::count(indices.size()));
  rep.note("theorem1_valid", fmt::count(valid_t1));
  rep.note("quad_residual_shape", fmt::flag(quad_shape));
  rep.note("norm_e", fmt::num(bp.norm_e()));
  if (opt.verify) rep.note("oracle_slack", fmt::num(slack));
  return rep;
}

// ---------------------------------------------------------------------------
// Wilkinson pairs

/// Top pair of W+_{2n+1}, the split shift and the l-th pair gaps for l in
/// [ell_from, ell_to]; ell_to = 0 means n - 1.
inline RunReport cmd_wilkinson(int n, int ell_from = 1, int ell_to = 0, std::string echo = "wilkinson") {
  if (n <= 4) throw std::invalid_argument("wilkinson: n must exceed 4");
  if (ell_to == 0) ell_to = n - 1;
  if (ell_from < 1 || ell_to > n - 1 || ell_from > ell_to)
    throw std::out_of_range("wilkinson: ell range must lie in 1.." + std::to_string(n - 1));
  RunReport rep(std::move(echo));

  const SymTridiagonal w = wilkinson_plus(n);
  const auto vals = eig_tridiag(w, false).values;
  const std::size_t m = vals.size();
  const double slack = 16.0 * tol::eps * detail::max_abs_eig(vals);

  const LogScalar top_bound = wilkinson_gap_bound(n);
  const double top_gap = vals[m - 1] - vals[m - 2];
  {
    const double b = top_bound.to_double();
    const bool ok = top_gap <= b + slack;
    rep.add("top_pair")
        .set("n", n)
        .set("upper", fmt::exact(vals[m - 1]))
        .set("lower", fmt::exact(vals[m - 2]))
        .set("gap", top_gap)
        .set("formula", "wilkinson_gap")
        .set("valid", true)
        .set_bound(top_bound)
        .set("margin", detail::decades(b, top_gap))
        .set("sound", ok);
    if (!ok) rep.violation("top_pair gap");
  }

  const WilkinsonSplit s = wilkinson_split(n);
  const auto split_a = eig_tridiag(s.a, false).values;
  const double shift = std::fabs(vals[m - 1] - split_a[m - 1]);
  {
    const double b = top_bound.to_double();
    const bool ok = shift <= b + slack;
    rep.add("top_shift")
        .set("n", n)
        .set("observed", shift)
        .set("formula", "wilkinson_gap")
        .set("valid", true)
        .set_bound(top_bound)
        .set("margin", detail::decades(b + slack, shift))
        .set("sound", ok);
    if (!ok) rep.violation("top_shift");
  }

  std::size_t unsound = 0;
  for (int ell = ell_from; ell <= ell_to; ++ell) {
    const std::size_t hi = m - static_cast<std::size_t>(2 * ell - 1);
    const double gap = vals[hi] - vals[hi - 1];
    const LogScalar bound = wilkinson_pair_gap_bound(n, ell);
    const double b = bound.to_double();
    const bool ok = gap <= b + slack;
    unsound += !ok;
    rep.add("pair")
        .set("ell", ell)
        .set("upper", fmt::exact(vals[hi]))
        .set("lower", fmt::exact(vals[hi - 1]))
        .set("gap", gap)
        .set("formula", "wilkinson_pair_gap")
        .set("valid", true)
        .set_bound(bound)
        .set("margin", detail::decades(b, gap))
        .set("sound", ok);
    if (!ok) rep.violation("pair ell=" + std::to_string(ell));
  }

  if (n == 10) {
    rep.check(detail::within("n10.top_gap", top_gap, 1e-15, 1e-13));
    const double direct = 4.0 / 30.0 / (40320.0 * 40320.0);
    const double rel = std::fabs(top_bound.to_double() - direct) / direct;
    rep.check(detail::at_most("n10.gap_bound_log_vs_direct", rel, 5e-7));
    rep.check(detail::within("n10.gap_bound", top_bound.to_double(), 8.195e-11, 8.205e-11));
    if (ell_from <= 5 && ell_to >= 5) {
      const double b5 = wilkinson_pair_gap_bound(10, 5).to_double();
      rep.check(detail::within("n10.ell5_bound", b5, 2.85e-4, 2.95e-4));
    }
  }
  rep.note("order", fmt::count(m));
  rep.note("pairs", fmt::count(static_cast<std::size_t>(ell_to - ell_from + 1)));
  rep.note("unsound_pairs", fmt::count(unsound));
  rep.note("oracle_slack", fmt::num(slack));
  return rep;
}

// ---------------------------------------------------------------------------
// Early deflation

struct AedOptions {
  std::size_t k = 1;
  double tol = 1e-16;                ///< deflate when |t_i| <= tol ||T||_2
  std::optional<std::size_t> j;      ///< fixed depth; otherwise the best depth per eigenvalue
  std::optional<double> alpha;       ///< drift bound; defaults to |b_{n-k}|
  AedConstant constant = AedConstant::full_derivative;
  NeighborRule rule = NeighborRule::conservative;
  bool simulate = false;
  std::size_t max_sweeps = 100000;
  bool verify = false;
};

inline std::string to_string(AedConstant c) {
  return c == AedConstant::printed_half ? "half" : "full";
}

namespace detail {

inline bool is_aed_example(const SymTridiagonal& t, std::size_t k) {
  return k == 100 && t.order() == 1000 && t == aed_example_1000();
}

/// Minimum log10 bound at fixed depth over window eigenvalues below `below`.
inline std::optional<double> min_log10_at_depth(const SymTridiagonal& t, std::size_t k, std::size_t j, double alpha,
                                                double below, NeighborRule rule, AedConstant c) {
  const auto window = eig_tridiag(t.principal(t.order() - k, k), false).values;
  std::optional<double> best;
  for (double lambda : window) {
    if (!(lambda < below)) continue;
    try {
      const LogScalar b = aed_perturbation_bound({t, k, j, lambda, alpha}, rule, c);
      const double l = b.is_zero() ? -std::numeric_limits<double>::infinity() : b.log10_magnitude();
      if (!best || l < *best) best = l;
    } catch (const AedBoundError&) {
    }
  }
  return best;
}

/// First row that rules out depth 1: a gap failure on rows 1..n-k+1 or an
/// undefined eta on rows n-k, n-k+1. A window of order 1 has no depth at all.
inline std::size_t first_invalid_row(const SymTridiagonal& t, std::size_t k, double lambda, double alpha,
                                     NeighborRule rule) {
  const std::size_t n = t.order();
  if (k < 2) return n;
  const AedBoundInput in{t, k, 1, lambda, alpha};
  if (const auto row = gap_condition_failure(in)) return *row;
  for (std::size_t row = n - k; row <= n - k + 1; ++row)
    if (!aed_eta(in, row, rule)) return row;
  return n - k + 1;
}

}  // namespace detail

/// One-shot mode: spike, deflation decisions and per-eigenvalue early
/// deflation bounds (log10). Simulate mode: QR sweeps with early deflation.
/// Verification compares each window eigenvalue with the nearest eigenvalue
/// of T, allowing 16 ulp of the eigenvalue for the two eigensolvers.
inline RunReport cmd_aed(const SymTridiagonal& t, const AedOptions& opt, std::string echo = "aed") {
  const std::size_t n = t.order();
  if (opt.k < 1 || opt.k >= n) throw std::out_of_range("aed: window k must lie in 1.." + std::to_string(n - 1));
  if (opt.j && (*opt.j < 1 || *opt.j >= opt.k)) throw std::out_of_range("aed: depth j must lie in 1..k-1");
  if (!(opt.tol > 0.0)) throw std::invalid_argument("aed: tol must be positive");
  const double alpha = opt.alpha.value_or(default_alpha(t, opt.k));
  if (!(alpha >= 0.0)) throw std::invalid_argument("aed: alpha must be nonnegative");
  const double norm = spectral_norm(t);
  const bool example = detail::is_aed_example(t, opt.k);
  RunReport rep(std::move(echo));

  if (opt.simulate) {
    const QrAedResult r = run_qr_with_aed(t, opt.k, opt.tol, opt.max_sweeps);
    for (std::size_t p = 0; p < r.passes.size(); ++p) {
      const QrAedPass& q = r.passes[p];
      rep.add("pass")
          .set("pass", p + 1)
          .set("block_order", q.block_order)
          .set("negligible_subdiagonals", q.negligible_subdiagonals)
          .set("subdiag_deflations", q.subdiag_deflations)
          .set("aed_ran", q.aed_ran)
          .set("aed_deflations", q.aed_deflations)
          .set("swept", q.swept);
    }
    rep.note("sweeps", fmt::count(r.sweeps));
    rep.note("converged", fmt::flag(r.converged));
    rep.note("aed_deflations", fmt::count(r.aed_total()));
    rep.note("subdiag_deflations", fmt::count(r.subdiag_total()));
    if (!r.converged) rep.violation("sweep limit reached before convergence");
    if (opt.verify && r.converged) {
      const auto w = eig_tridiag(t, false).values;
      double worst = 0.0;
      for (std::size_t i = 0; i < w.size(); ++i) worst = std::max(worst, std::fabs(w[i] - r.spectrum.values[i]));
      rep.check(detail::at_most("qr_aed.spectrum_vs_oracle", worst, 1e-10 * norm));
    }
    if (example && !r.passes.empty()) {
      rep.check(detail::at_least("aed1000.first_pass_deflations", static_cast<double>(r.passes[0].aed_deflations), 80));
      rep.check(detail::at_most("aed1000.first_pass_negligible_subdiagonals",
                                static_cast<double>(r.passes[0].negligible_subdiagonals), 0));
    }
    return rep;
  }

  const AedOutcome o = deflation_decide(aed_transform(t, opt.k), opt.tol, norm);
  rep.add("window")
      .set("k", o.k)
      .set("coupling", o.coupling)
      .set("spike_norm", o.spike_norm())
      .set("deflatable", o.count)
      .set("tol", o.tol)
      .set("scale", o.scale)
      .set("alpha", alpha)
      .set("constant", to_string(opt.constant))
      .set("rule", to_string(opt.rule));

  std::vector<double> full;
  if (opt.verify) full = eig_tridiag(t, false).values;

  std::size_t with_bound = 0, below_1e16 = 0;
  std::optional<double> min_log;
  std::size_t invalid = 0;
  for (std::size_t i = 0; i < o.k; ++i) {
    const double lambda = o.d[i];
    Record& rec = rep.add("eig");
    rec.set("index", i + 1).set("eigenvalue", fmt::exact(lambda)).set("spike", std::fabs(o.spike[i]));
    rec.set("deflatable", static_cast<bool>(o.deflatable[i])).set("formula", "early_deflation");

    std::optional<LogScalar> bound;
    std::optional<std::size_t> bad_row;
    std::size_t depth = 0;
    if (o.coupling == 0.0) {
      bound = LogScalar::zero();
      depth = opt.j.value_or(0);
    } else if (opt.j) {
      try {
        bound = aed_perturbation_bound({t, opt.k, *opt.j, lambda, alpha}, opt.rule, opt.constant);
        depth = *opt.j;
      } catch (const AedBoundError& err) {
        bad_row = err.row();
      }
    } else {
      const AedScanEntry e = aed_best_depth(t, opt.k, lambda, alpha, opt.rule, opt.constant);
      if (e.bound) {
        bound = e.bound;
        depth = e.j;
      } else {
        bad_row = detail::first_invalid_row(t, opt.k, lambda, alpha, opt.rule);
      }
    }
    rec.set("valid", bound.has_value());
    if (bound) {
      ++with_bound;
      if (depth) rec.set("j", depth);
      rec.set_bound(*bound);
      const double l = bound->is_zero() ? -std::numeric_limits<double>::infinity() : bound->log10_magnitude();
      below_1e16 += l <= -16.0;
      if (!min_log || l < *min_log) min_log = l;
    } else {
      rec.set("invalid_row", *bad_row);
      ++invalid;
    }
    if (!opt.verify) continue;
    const double observed = detail::nearest_distance(lambda, full);
    const double allow = 16.0 * tol::eps * std::max(1.0, std::fabs(lambda));
    rec.set("observed", observed);
    if (bound) {
      const double b = bound->representable() ? bound->to_double() : 0.0;
      const bool ok = observed <= b + allow;
      rec.set("margin", detail::decades(b + allow, observed)).set("sound", ok);
      if (!ok) rep.violation("eig index=" + std::to_string(i + 1) + " bound");
    }
    if (o.deflatable[i]) {
      const bool ok = observed <= std::fabs(o.spike[i]) + allow;
      rec.set("within_spike", ok);
      if (!ok) rep.violation("eig index=" + std::to_string(i + 1) + " spike");
    }
  }
  rep.note("window_eigenvalues", fmt::count(o.k));
  rep.note("with_bound", fmt::count(with_bound));
  rep.note("bound_le_1e-16", fmt::count(below_1e16));
  rep.note("min_log10", min_log ? fmt::num(*min_log) : std::string(fmt::undefined));
  rep.note("invalid", fmt::count(invalid));

  if (example) {
    const auto at88 = detail::min_log10_at_depth(t, opt.k, 88, alpha, 10.0, opt.rule, opt.constant);
    rep.check(detail::at_most("aed1000.min_log10_j88", at88.value_or(std::numeric_limits<double>::infinity()), -270.7));
    std::size_t scan_count = 0;
    for (const auto& e : aed_bound_scan(t, opt.k, alpha, opt.rule, opt.constant))
      scan_count += e.bound && (e.bound->is_zero() || e.bound->log10_magnitude() <= -16.0);
    rep.check(detail::at_least("aed1000.bound_le_1e-16", static_cast<double>(scan_count), 80));
    rep.check(detail::within("aed1000.spike_norm", o.spike_norm(), 1.0 - 1e-12, 1.0 + 1e-12));
    std::size_t small = 0;
    for (double s : o.spike) small += std::fabs(s) <= 1e-16 * norm;
    rep.check(detail::at_least("aed1000.small_spikes", static_cast<double>(small), 81));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Multiple eigenvalues

struct MultiOptions {
  std::vector<double> eps_grid{1e-2, 1e-3, 1e-4, 1e-5};
  double cluster_tol = 1e-8;
};

/// Per detected cluster: the first-order prediction error over the eps grid,
/// its fitted order and the quadratic-gap comparison. A report of "exact"
/// means every error sat at the oracle floor.
inline RunReport cmd_multieig(const DenseHermitian& a, const DenseHermitian& e, const MultiOptions& opt,
                              std::string echo = "multieig") {
  if (a.order() != e.order())
    throw std::invalid_argument("A has order " + std::to_string(a.order()) + " but E has order " +
                                std::to_string(e.order()));
  const auto clusters = detect_multiple(a, opt.cluster_tol);
  if (clusters.empty())
    throw std::runtime_error("multieig: no multiple eigenvalue at cluster tolerance " + fmt::num(opt.cluster_tol));
  RunReport rep(std::move(echo));
  std::size_t exact = 0, fitted = 0, skipped = 0;
  for (std::size_t c = 0; c < clusters.size(); ++c) {
    const MultipleEigContext& ctx = clusters[c];
    Record& rec = rep.add("cluster");
    rec.set("cluster", c + 1).set("lambda0", fmt::exact(ctx.lambda0)).set("multiplicity", ctx.r).set("gap", ctx.gap);
    std::string mu;
    for (double m : compressed_eigenvalues(ctx, e)) mu += (mu.empty() ? "" : ";") + fmt::num(m);
    rec.set("mu", mu);
    ExpansionFit fit;
    try {
      fit = expansion_order(ctx, e, opt.eps_grid);
    } catch (const std::domain_error& err) {
      rec.set("order", "skipped").set("reason", "eps_too_large");
      ++skipped;
      continue;
    }
    if (fit.exact) {
      rec.set("order", "exact");
      ++exact;
    } else if (fit.slope) {
      rec.set("order", "fitted").set("slope", *fit.slope);
      ++fitted;
    } else {
      rec.set("order", "undetermined");
    }
    rec.set("within_gap_bound", fit.all_within_bound());
    for (const ExpansionPoint& p : fit.points) {
      rep.add("point")
          .set("cluster", c + 1)
          .set("eps", p.eps)
          .set("error", p.error)
          .set("formula", "quadratic_gap")
          .set("valid", true)
          .set("bound", p.gap_bound)
          .set("block_gap", p.block_gap)
          .set("floor", p.floor)
          .set("sound", p.within_bound);
      if (!p.within_bound) rep.violation("cluster=" + std::to_string(c + 1) + " eps=" + fmt::num(p.eps));
    }
  }
  rep.note("clusters", fmt::count(clusters.size()));
  rep.note("exact", fmt::count(exact));
  rep.note("fitted", fmt::count(fitted));
  rep.note("skipped", fmt::count(skipped));
  return rep;
}

// ---------------------------------------------------------------------------
// All case studies

namespace detail {

/// Hermitian matrix with entries uniform in [-1, 1] (real and imaginary),
/// drawn from mt19937_64 so the values are identical on every platform.
inline DenseHermitian fixed_random_hermitian(std::size_t n, std::uint64_t seed) {
  std::mt19937_64 gen(seed);
  auto u = [&] { return 2.0 * static_cast<double>(gen() >> 11) * 0x1.0p-53 - 1.0; };
  CMatrix m(n, n);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = 0; j <= i; ++j) {
      const double re = u(), im = u();
      m(i, j) = i == j ? cdouble(re) : cdouble(re, im);
    }
  return DenseHermitian(std::move(m));
}

inline void absorb(RunReport& into, const std::string& name, const RunReport& from) {
  into.add("case").set("name", name).set("checks", from.checks().size()).set("violations", from.violations().size())
      .set("verdict", from.sound() ? "sound" : "unsound");
  for (const Check& c : from.checks()) into.check(c);
  for (const std::string& v : from.violations())
    if (v.rfind("check ", 0) != 0) into.violation(name + ": " + v);
}

}  // namespace detail

inline RunReport cmd_verify_all(std::string echo = "verify-all") {
  RunReport rep(std::move(echo));

  {  // 2 x 2 quadratic residual: A = diag(0, 2), coupling 0.1
    const double delta = 0.1;
    RMatrix a(2, 2), e(2, 2);
    a(1, 1) = 2.0;
    e(0, 1) = e(1, 0) = delta;
    const RunReport r = cmd_bound_block(DenseHermitian(a), DenseHermitian(e), {1, {1}, false, true}, "bound-block 2x2");
    detail::absorb(rep, "quad_residual_2x2", r);
    const double closed = delta * delta / (1.0 + std::sqrt(1.0 + delta * delta));
    const double shift = std::fabs(eig_dense(DenseHermitian(a + e), false).values[0]);
    rep.check(detail::at_most("quad2x2.shift_vs_closed_form", std::fabs(shift - closed), 1e-15));
    rep.check(detail::within("quad2x2.shift", shift, 0.0049876 - 1e-7, 0.0049876 + 1e-7));
    const double b = quadratic_residual_bound(DenseHermitian(a), DenseHermitian(e), BlockSplit{1}, 1).bound.to_double();
    rep.check(detail::within("quad2x2.bound", b, 0.005 - 1e-15, 0.005 + 1e-15));
  }

  {  // cubic scaling of the eps-block coupling
    double worst = 0.0;
    for (double delta : {1e-2, 1e-3})
      for (double eps : {1e-3, 1e-4}) {
        RMatrix base(4, 4), pert(4, 4);
        for (std::size_t i = 0; i < 3; ++i) {
          base(i, i) = static_cast<double>(i + 1);
          base(3, i) = base(i, 3) = delta;
        }
        pert(3, 3) = eps;
        const auto lo = eig_dense(DenseHermitian(base), false).values;
        const auto hi = eig_dense(DenseHermitian(base + pert), false).values;
        for (std::size_t i = 1; i < 4; ++i) worst = std::max(worst, std::fabs(hi[i] - lo[i]) / (10.0 * eps * delta * delta));
      }
    rep.check(detail::at_most("cubic.shift_over_10_eps_delta2", worst, 1.0));
  }

  detail::absorb(rep, "wilkinson_10", cmd_wilkinson(10, 1, 0, "wilkinson --n 10"));
  detail::absorb(rep, "wilkinson_5", cmd_wilkinson(5, 1, 0, "wilkinson --n 5"));
  {
    const WilkinsonSplit s = wilkinson_split(10);
    const double top_a = eig_tridiag(s.a, false).values.back();
    const double top_ae = eig_tridiag(s.a + s.e, false).values.back();
    rep.check(detail::at_most("n10.split_top_shift", std::fabs(top_ae - top_a), wilkinson_gap_bound(10).to_double()));
  }

  const SymTridiagonal big = aed_example_1000();
  AedOptions aopt;
  aopt.k = 100;
  aopt.verify = true;
  detail::absorb(rep, "aed1000", cmd_aed(big, aopt, "aed --matrix aed_example_1000 --k 100 --verify"));
  aopt.simulate = true;
  detail::absorb(rep, "aed1000_simulate", cmd_aed(big, aopt, "aed --matrix aed_example_1000 --k 100 --simulate --verify"));

  {
    const std::vector<double> d{1, 1, 5};
    const DenseHermitian a = DenseHermitian::diagonal(d);
    double lo = 10.0, hi = -10.0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
      const RunReport r = cmd_multieig(a, detail::fixed_random_hermitian(3, seed), {}, "multieig diag(1,1,5)");
      detail::absorb(rep, "multieig_seed" + std::to_string(seed), r);
      const auto slope = r.records().front().get("slope");
      const double s = slope ? std::stod(*slope) : std::numeric_limits<double>::quiet_NaN();
      lo = std::min(lo, std::isnan(s) ? -10.0 : s);
      hi = std::max(hi, std::isnan(s) ? 10.0 : s);
    }
    rep.check(detail::within("multieig.min_slope", lo, 1.8, 2.2));
    rep.check(detail::within("multieig.max_slope", hi, 1.8, 2.2));
    const RunReport ident = cmd_multieig(a, DenseHermitian::identity(3), {}, "multieig E=I");
    detail::absorb(rep, "multieig_identity", ident);
    rep.check({"multieig.identity_exact", ident.records().front().get("order") == "exact",
               ident.records().front().get("order").value_or(""), "exact", "-"});
    const WilkinsonSplit s = wilkinson_split(6);
    const RunReport w = cmd_multieig(s.a.to_dense(), s.e.to_dense(), {}, "multieig wilkinson_split 6");
    detail::absorb(rep, "multieig_wilkinson6", w);
    rep.check(detail::within("multieig.wilkinson6_clusters", static_cast<double>(w.count("cluster")), 6, 6));
  }
  return rep;
}

}  // namespace eigbound
