// Acceptance gate: one PASS/FAIL line per criterion, each under its time limit.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "eigbound/eigbound.hpp"
#include "oracles.hpp"
#include "random_instances.hpp"

namespace {

using namespace eigbound;
using testing::Rng;

struct Outcome {
  bool pass = false;
  std::string detail;
};

std::string format(const char* f, double a = 0, double b = 0, double c = 0, double d = 0) {
  char buf[256];
  std::snprintf(buf, sizeof buf, f, a, b, c, d);
  return buf;
}

double oracle_slack(const std::vector<double>& x, const std::vector<double>& y) {
  return 64.0 * tol::eps * std::max({1.0, std::fabs(x.front()), std::fabs(x.back()), std::fabs(y.front()), std::fabs(y.back())});
}

Outcome wilkinson_pair() {
  const auto w = eig_tridiag(wilkinson_plus(10), false).values;
  const double gap = w[20] - w[19];
  return {gap <= 1e-13 && gap >= 1e-15, format("top pair gap %.3e in [1e-15, 1e-13]", gap)};
}

Outcome wilkinson_fact() {
  const double via_log = wilkinson_gap_bound(10).to_double();
  double f8 = 1.0;
  for (int i = 2; i <= 8; ++i) f8 *= i;
  const double direct = (4.0 / 30.0) / (f8 * f8);
  const double rel = std::fabs(via_log - direct) / direct;
  char a[32], b[32];
  std::snprintf(a, sizeof a, "%.5e", via_log);
  std::snprintf(b, sizeof b, "%.5e", direct);
  const WilkinsonSplit s = wilkinson_split(10);
  const double shift = std::fabs(eig_tridiag(s.a + s.e, false).values.back() - eig_tridiag(s.a, false).values.back());
  char rounded[32];
  std::snprintf(rounded, sizeof rounded, "%.4e", via_log);
  const bool ok = std::string(a) == b && rel < 5e-7 && std::string(rounded) == "8.2016e-11" && shift <= via_log;
  return {ok, "bound " + std::string(a) + " (direct " + b + format(", rel diff %.1e), observed shift %.3e", rel, shift)};
}

Outcome aed_headline() {
  const SymTridiagonal t = aed_example_1000();
  const auto window = eig_tridiag(t.principal(900, 100), false).values;
  std::string detail;
  bool ok = true;
  for (AedConstant c : {AedConstant::printed_half, AedConstant::full_derivative}) {
    double lowest = std::numeric_limits<double>::infinity();
    for (double lambda : window) {
      if (!(lambda < 10.0)) continue;
      const LogScalar b = aed_perturbation_bound({t, 100, 88, lambda, 1.0}, NeighborRule::conservative, c);
      lowest = std::min(lowest, b.log10_magnitude());
    }
    std::size_t count = 0;
    for (const auto& e : aed_bound_scan(t, 100, 1.0, NeighborRule::conservative, c))
      count += e.bound && (e.bound->is_zero() || e.bound->log10_magnitude() <= -16.0);
    ok = ok && lowest <= -270.7 && count >= 80;
    detail += std::string(c == AedConstant::printed_half ? "half" : "full") +
              format(" constant: min log10 %.2f, %g eigenvalues <= 1e-16; ", lowest, static_cast<double>(count));
  }
  return {ok, detail};
}

Outcome aed_spike() {
  const SymTridiagonal t = aed_example_1000();
  const AedOutcome o = aed_transform(t, 100);
  const double norm = spectral_norm(t);
  std::size_t small = 0;
  for (double s : o.spike) small += std::fabs(s) <= 1e-16 * norm;
  const double dev = std::fabs(o.spike_norm() - 1.0);
  return {dev <= 1e-12 && small > 80, format("|‖t‖ - 1| = %.1e, %g entries <= 1e-16 ‖T‖", dev, static_cast<double>(small))};
}

Outcome theorem1_suite() {
  Rng rng(501);
  std::size_t instances = 0, checked = 0, violations = 0, weyl_fail = 0;
  double worst = 0.0;
  while (instances < 200) {
    const std::size_t n = testing::uniform_index(rng, 3, 20);
    const std::size_t k = testing::uniform_index(rng, 1, n - 2);
    const auto inst = testing::random_block_instance(rng, n, k, testing::log_uniform(rng, 1e-6, 1e-1));
    const BlockPerturbation bp(inst.a, inst.e, inst.split);
    const auto after = eig_dense(inst.a + inst.e, false).values;
    const double slack = oracle_slack(bp.eigenvalues(), after);
    bool any = false;
    for (std::size_t i = 1; i <= n; ++i) {
      const BoundReport r = bp.theorem1(i);
      weyl_fail += !(r.best() <= LogScalar::from_double(r.weyl));
      if (!r.valid) continue;
      any = true;
      ++checked;
      const double shift = std::fabs(after[i - 1] - bp.eigenvalues()[i - 1]);
      const double b = r.bound.to_double();
      violations += shift > b + slack;
      if (b > 0) worst = std::max(worst, shift / b);
    }
    instances += any;
  }
  return {violations == 0 && weyl_fail == 0,
          format("%g indices, %g violations, worst shift/bound %.3f, min(bound, weyl) > weyl %g times",
                 static_cast<double>(checked), static_cast<double>(violations), worst, static_cast<double>(weyl_fail))};
}

Outcome quad_residual_suite() {
  Rng rng(601);
  std::size_t instances = 0, checked = 0, violations = 0;
  double worst = 0.0;
  while (instances < 100) {
    const std::size_t n = testing::uniform_index(rng, 2, 16);
    const std::size_t k = testing::uniform_index(rng, 1, n - 1);
    const auto inst = testing::random_origin_instance(rng, n, k, testing::log_uniform(rng, 1e-5, 0.2));
    const double enorm = spectral_norm(inst.e);
    const auto before = eig_dense(inst.a, false).values, after = eig_dense(inst.a + inst.e, false).values;
    const double slack = oracle_slack(before, after);
    bool any = false;
    for (std::size_t i = 1; i <= n; ++i) {
      const BoundReport r = quadratic_residual_bound(inst.a, inst.e, inst.split, i);
      if (!r.valid || r.gap < 10.0 * enorm) continue;
      any = true;
      ++checked;
      const double shift = std::fabs(after[i - 1] - before[i - 1]);
      violations += shift > r.bound.to_double() + slack;
      worst = std::max(worst, shift / r.bound.to_double());
    }
    instances += any;
  }
  return {violations == 0, format("%g indices, %g violations, worst shift/bound %.3f", static_cast<double>(checked),
                                  static_cast<double>(violations), worst)};
}

Outcome cubic_scaling() {
  double worst = 0.0;
  bool bounded = true;
  for (double delta : {1e-2, 1e-3})
    for (double eps : {1e-3, 1e-4}) {
      RMatrix base(4, 4), pert(4, 4);
      for (std::size_t i = 0; i < 3; ++i) {
        base(i, i) = static_cast<double>(i + 1);
        base(3, i) = base(i, 3) = delta;
      }
      pert(3, 3) = eps;
      const DenseHermitian a(base), e(pert);
      const BlockPerturbation bp(a, e, BlockSplit{1});
      const auto lo = eig_dense(a, false).values, hi = eig_dense(a + e, false).values;
      for (std::size_t i = 2; i <= 4; ++i) {
        const double shift = std::fabs(hi[i - 1] - lo[i - 1]);
        worst = std::max(worst, shift / (eps * delta * delta));
        const BoundReport r = bp.theorem1(i);
        bounded = bounded && r.valid && shift <= r.bound.to_double();
      }
    }
  return {worst <= 10.0 && bounded, format("max shift / (eps delta^2) = %.4f (limit 10)", worst)};
}

Outcome expansion_suite() {
  Rng rng(801);
  const std::vector<double> d{1, 1, 5};
  const auto ctx = detect_multiple(DenseHermitian::diagonal(d), 1e-10);
  if (ctx.size() != 1) return {false, "cluster not detected"};
  double lo = 10, hi = -10;
  bool ok = true;
  for (int trial = 0; trial < 5; ++trial) {
    const ExpansionFit f = expansion_order(ctx.front(), testing::random_hermitian(rng, 3), {1e-2, 1e-3, 1e-4, 1e-5});
    if (!f.slope) return {false, "no slope fitted"};
    lo = std::min(lo, *f.slope);
    hi = std::max(hi, *f.slope);
    for (const auto& p : f.points) ok = ok && p.error <= p.gap_bound;
  }
  return {ok && lo >= 1.8 && hi <= 2.2, format("slopes in [%.4f, %.4f], errors within gap bound: ", lo, hi) + (ok ? "yes" : "no")};
}

Outcome oracle_cross() {
  Rng rng(901);
  double worst_value = 0.0, worst_residual = 0.0;
  bool ok = true;
  for (int trial = 0; trial < 500; ++trial) {
    const std::size_t n = testing::uniform_index(rng, 1, 50);
    const double range = trial % 5 == 0 ? 1e3 : 1.0;
    const SymTridiagonal t = testing::random_tridiagonal(rng, n, -range, range);
    const auto s = eig_tridiag(t);
    const auto w = eig_dense(t.to_dense(), false).values;
    const double norm = spectral_norm(t);
    const double scale = std::max(1.0, norm);
    for (std::size_t i = 0; i < n; ++i) {
      const double err = std::fabs(s.values[i] - w[i]) / scale;
      worst_value = std::max(worst_value, err);
      ok = ok && err <= 1e-12;
    }
    const double res = max_residual(t, s);
    worst_residual = std::max(worst_residual, norm > 0 ? res / norm : res);
    ok = ok && res <= 1e-12 * norm;
  }
  return {ok, format("max rank error %.2e max(1,‖T‖), max residual %.2e ‖T‖", worst_value, worst_residual)};
}

Outcome decay_suite() {
  Rng rng(1001);
  std::size_t prefixes = 0, violations = 0;
  for (int trial = 0; trial < 100; ++trial) {
    const SymTridiagonal t = testing::graded_tridiagonal(rng, testing::uniform_index(rng, 3, 25));
    const std::size_t n = t.order();
    for (double lambda : eig_tridiag(t, false).values) {
      const auto z = testing::twisted_eigenvector(t, lambda);
      for (const auto& p : {decay_profile(t, lambda, 1, n - 1), decay_profile(t, lambda, n, 2)})
        for (std::size_t m = 0; m < p.size(); ++m, ++prefixes)
          violations += std::fabs(z[p.start - 1]) >
                        p.cumulative[m].to_double() * std::fabs(z[p.reference_row(m) - 1]) + 1e-14;
    }
  }
  return {violations == 0 && prefixes > 0,
          format("%g prefixes, %g violations", static_cast<double>(prefixes), static_cast<double>(violations))};
}

Outcome qr_aed_end_to_end() {
  const SymTridiagonal t = aed_example_1000();
  const QrAedResult r = run_qr_with_aed(t, 100, 1e-16, 100000);
  if (!r.converged || r.passes.empty()) return {false, "did not converge"};
  const auto w = eig_tridiag(t, false).values;
  double worst = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) worst = std::max(worst, std::fabs(w[i] - r.spectrum.values[i]));
  const double norm = spectral_norm(t);
  const QrAedPass& first = r.passes.front();
  const bool ok = first.aed_ran && first.aed_deflations >= 80 && first.negligible_subdiagonals == 0 &&
                  r.spectrum.values.size() == w.size() && worst <= 1e-10 * norm;
  return {ok, format("first pass deflates %g, negligible subdiagonals %g, max spectrum error %.2e ‖T‖ (%g sweeps)",
                     static_cast<double>(first.aed_deflations), static_cast<double>(first.negligible_subdiagonals),
                     worst / norm, static_cast<double>(r.sweeps))};
}

struct Criterion {
  int id;
  const char* name;
  double limit_seconds;
  std::function<Outcome()> run;
};

}  // namespace

int main() {
  const std::vector<Criterion> criteria{
      {1, "wilkinson top pair gap", 1, wilkinson_pair},
      {2, "wilkinson gap bound and split shift", 1, wilkinson_fact},
      {3, "early deflation bound on the 1000x1000 example", 30, aed_headline},
      {4, "early deflation spike", 30, aed_spike},
      {5, "block bound soundness, 200 instances", 10, theorem1_suite},
      {6, "quadratic residual soundness, 100 instances", 5, quad_residual_suite},
      {7, "cubic scaling of the trailing perturbation", 1, cubic_scaling},
      {8, "first-order expansion order", 5, expansion_suite},
      {9, "tridiagonal vs dense oracle, 500 instances", 60, oracle_cross},
      {10, "decay profile soundness, 100 graded instances", 10, decay_suite},
      {11, "QR with early deflation end to end", 120, qr_aed_end_to_end},
  };
  int failed = 0;
  for (const Criterion& c : criteria) {
    const auto start = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = c.run();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    const bool in_time = secs < c.limit_seconds;
    const bool pass = o.pass && in_time;
    failed += !pass;
    std::printf("%s %2d %s: %s [%.2f s, limit %g s%s]\n", pass ? "PASS" : "FAIL", c.id, c.name, o.detail.c_str(), secs,
                c.limit_seconds, in_time ? "" : ", too slow");
  }
  std::printf("%d of %zu criteria passed\n", static_cast<int>(criteria.size()) - failed, criteria.size());
  return failed == 0 ? 0 : 1;
}
