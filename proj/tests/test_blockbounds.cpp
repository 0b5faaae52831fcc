#include <gtest/gtest.h>

#include <cmath>

#include "eigbound/blockbounds.hpp"
#include "random_instances.hpp"

namespace eigbound {
namespace {

using testing::Rng;

DenseHermitian two_by_two(double a11, double a21, double a22) {
  RMatrix m(2, 2);
  m(0, 0) = a11;
  m(1, 0) = m(0, 1) = a21;
  m(1, 1) = a22;
  return DenseHermitian(m);
}

double max_shift(const DenseHermitian& a, const DenseHermitian& b, std::size_t i) {
  return std::fabs(eig_dense(a, false).values[i - 1] - eig_dense(b, false).values[i - 1]);
}

TEST(Weyl, Examples) {
  EXPECT_EQ(weyl_bound(DenseHermitian::zero(3)), 0.0);
  EXPECT_NEAR(weyl_bound(0.3 * DenseHermitian::identity(5)), 0.3, 1e-15);
  const std::vector<double> d{0.2, -0.5};
  EXPECT_NEAR(weyl_bound(DenseHermitian::diagonal(d)), 0.5, 1e-15);

  Rng rng(1);
  const DenseHermitian a = testing::random_hermitian(rng, 5);
  const auto before = eig_dense(a, false).values;
  const auto after = eig_dense(a + 0.3 * DenseHermitian::identity(5), false).values;
  for (std::size_t i = 0; i < 5; ++i) EXPECT_NEAR(after[i] - before[i], 0.3, 1e-13);
}

TEST(Weyl, SoundOnRandomInstances) {
  Rng rng(2);
  for (int trial = 0; trial < 100; ++trial) {
    const std::size_t n = testing::uniform_index(rng, 1, 12);
    const DenseHermitian a = testing::random_hermitian(rng, n);
    const DenseHermitian e = testing::random_hermitian(rng, n, testing::uniform(rng, 0.0, 2.0));
    const double w = weyl_bound(e);
    for (std::size_t i = 1; i <= n; ++i) EXPECT_LE(max_shift(a, a + e, i), w + 1e-12);
  }
}

TEST(QuadraticResidual, TwoByTwo) {
  const DenseHermitian a = two_by_two(0.0, 0.0, 2.0);
  const DenseHermitian e = two_by_two(0.0, 0.1, 0.0);
  const BoundReport r = quadratic_residual_bound(a, e, BlockSplit{1}, 1);
  EXPECT_TRUE(r.valid);
  EXPECT_EQ(r.formula, Formula::quad_residual);
  EXPECT_NEAR(r.bound.to_double(), 0.005, 1e-15);
  const double shift = std::fabs(1.0 - std::sqrt(1.01));  // closed-form 2x2 eigenvalue
  EXPECT_NEAR(max_shift(a, a + e, 1), shift, 1e-15);
  EXPECT_LE(shift, r.bound.to_double());
}

TEST(QuadraticResidual, ZeroPerturbation) {
  const DenseHermitian a = two_by_two(0.0, 0.0, 2.0);
  const BoundReport r = quadratic_residual_bound(a, DenseHermitian::zero(2), BlockSplit{1}, 1);
  EXPECT_TRUE(r.valid);
  EXPECT_TRUE(r.bound.is_zero());
}

TEST(QuadraticResidual, ThreeByThreeAgainstOracle) {
  const double delta = 0.01;
  RMatrix am(3, 3), em(3, 3);
  am(1, 1) = 10.0;
  am(2, 2) = 5.0;
  em(2, 0) = em(0, 2) = delta;
  const DenseHermitian a(am), e(em);
  const BoundReport r = quadratic_residual_bound(a, e, BlockSplit{1}, 1);
  EXPECT_NEAR(r.gap, 5.0, 1e-14);
  EXPECT_NEAR(r.bound.to_double(), 2e-5, 1e-18);
  EXPECT_LE(max_shift(a, a + e, 1), r.bound.to_double());
}

TEST(QuadraticResidual, ZeroGapFallsBackToWeyl) {
  // lambda_2(A) = 2 is the eigenvalue of A2 itself.
  const DenseHermitian a = two_by_two(0.0, 0.0, 2.0);
  const DenseHermitian e = two_by_two(0.0, 0.1, 0.0);
  const BoundReport r = quadratic_residual_bound(a, e, BlockSplit{1}, 2);
  EXPECT_FALSE(r.valid);
  EXPECT_TRUE(r.bound.is_infinite());
  EXPECT_NEAR(r.best().to_double(), 0.1, 1e-15);
}

TEST(QuadraticResidual, Errors) {
  const DenseHermitian a = two_by_two(0.0, 0.0, 2.0);
  const DenseHermitian e = two_by_two(0.0, 0.1, 0.0);
  EXPECT_THROW(quadratic_residual_bound(a, e, BlockSplit{1}, 0), std::out_of_range);
  EXPECT_THROW(quadratic_residual_bound(a, e, BlockSplit{1}, 3), std::out_of_range);
  EXPECT_THROW(quadratic_residual_bound(a, two_by_two(0.1, 0.1, 0.0), BlockSplit{1}, 1), std::invalid_argument);
  EXPECT_THROW(quadratic_residual_bound(two_by_two(0.0, 1.0, 2.0), e, BlockSplit{1}, 1), std::invalid_argument);
}

TEST(QuadraticResidual, SoundOnRandomOriginShapedInstances) {
  Rng rng(3);
  int checked = 0;
  for (int trial = 0; trial < 80; ++trial) {
    const std::size_t n = testing::uniform_index(rng, 2, 12);
    const std::size_t k = testing::uniform_index(rng, 1, n - 1);
    // Overlapping block spectra: the bound is per index, no separation needed.
    const auto inst = testing::random_origin_instance(rng, n, k, testing::log_uniform(rng, 1e-4, 0.5), -1.0, 1.0);
    for (std::size_t i = 1; i <= n; ++i) {
      const BoundReport r = quadratic_residual_bound(inst.a, inst.e, inst.split, i);
      if (!r.valid) continue;
      ++checked;
      EXPECT_LE(max_shift(inst.a, inst.a + inst.e, i), r.bound.to_double() * (1 + 1e-10) + 1e-14);
    }
  }
  EXPECT_GT(checked, 200);
}

TEST(TailBound, Examples) {
  RMatrix m(3, 3);
  m(0, 0) = 1.0;
  m(1, 1) = 2.0;
  m(2, 2) = 7.0;
  EXPECT_EQ(eigvec_tail_bound(DenseHermitian(m), BlockSplit{1}, 1.0), 0.0);

  const DenseHermitian a = two_by_two(0.0, 0.1, 2.0);
  const double lambda = 1.0 - std::sqrt(1.01);
  const double bound = eigvec_tail_bound(a, BlockSplit{1}, lambda);
  EXPECT_NEAR(bound, 0.1 / (2.0 - lambda), 1e-15);
  EXPECT_NEAR(bound, 0.049876, 1e-6);
  const auto s = eig_dense(a);
  EXPECT_LE(std::abs((*s.vectors)(1, 0)), bound);

  const double doubled = eigvec_tail_bound(two_by_two(0.0, 0.2, 2.0), BlockSplit{1}, lambda);
  EXPECT_NEAR(doubled, 2.0 * bound, 1e-15);

  EXPECT_THROW(eigvec_tail_bound(a, BlockSplit{1}, 2.0), std::domain_error);
}

TEST(TailBound, SoundForRandomEigenpairs) {
  Rng rng(4);
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = testing::uniform_index(rng, 2, 10);
    const BlockSplit split{testing::uniform_index(rng, 1, n - 1)};
    const DenseHermitian a = testing::random_hermitian(rng, n);
    const auto s = eig_dense(a);
    const auto a22 = eig_dense(trailing_block(a, split), false).values;
    for (std::size_t j = 0; j < n; ++j) {
      double gap = 1e300;
      for (double v : a22) gap = std::min(gap, std::fabs(s.values[j] - v));
      if (gap < 1e-6) continue;
      double x2 = 0.0;
      for (std::size_t i = n - split.k; i < n; ++i) x2 += std::norm((*s.vectors)(i, j));
      EXPECT_LE(std::sqrt(x2), eigvec_tail_bound(a, split, s.values[j]) + 1e-12);
    }
  }
}

TEST(TailBound, HoldsAcrossMultipleEigenspace) {
  // Double eigenvalue 1 on a random 2-D subspace; every unit vector in the
  // eigenspace obeys the bound.
  Rng rng(5);
  const DenseHermitian a = testing::hermitian_with_spectrum(rng, {1.0, 1.0, 3.0, -2.0, 6.0});
  const BlockSplit split{2};
  const auto s = eig_dense(a);
  ASSERT_NEAR(s.values[1], 1.0, 1e-12);
  ASSERT_NEAR(s.values[2], 1.0, 1e-12);
  const double bound = eigvec_tail_bound(a, split, 1.0);
  for (int trial = 0; trial < 50; ++trial) {
    const cdouble c1(testing::uniform(rng, -1, 1), testing::uniform(rng, -1, 1));
    const cdouble c2(testing::uniform(rng, -1, 1), testing::uniform(rng, -1, 1));
    const double norm = std::sqrt(std::norm(c1) + std::norm(c2));
    double x2 = 0.0;
    for (std::size_t i = 3; i < 5; ++i) x2 += std::norm((c1 * (*s.vectors)(i, 1) + c2 * (*s.vectors)(i, 2)) / norm);
    EXPECT_LE(std::sqrt(x2), bound + 1e-12);
  }
}

TEST(Tau, Examples) {
  EXPECT_EQ(tau(two_by_two(0.0, 0.0, 10.0), DenseHermitian::zero(2), BlockSplit{1}, 1), 0.0);

  // lambda_1 of [[0, 1], [1, 10]] is 5 - sqrt(26).
  const double lambda1 = 5.0 - std::sqrt(26.0);
  const auto t = tau(two_by_two(0.0, 1.0, 10.0), DenseHermitian::zero(2), BlockSplit{1}, 1);
  ASSERT_TRUE(t.has_value());
  EXPECT_NEAR(*t, 1.0 / (10.0 - lambda1), 1e-14);
  EXPECT_NEAR(*t, 0.0990, 1e-4);

  // A22 eigenvalue 0.1 within 2||E|| = 0.2 of lambda_1 = 0.
  const auto bad = tau(two_by_two(0.0, 0.0, 0.1), 0.1 * DenseHermitian::identity(2), BlockSplit{1}, 1);
  EXPECT_FALSE(bad.has_value());
  EXPECT_THROW(tau(two_by_two(0.0, 0.0, 0.1), DenseHermitian::zero(2), BlockSplit{1}, 3), std::out_of_range);
}

TEST(Theorem1, ZeroPerturbation) {
  Rng rng(6);
  const auto inst = testing::random_block_instance(rng, 6, 2, 1e-3);
  const BoundReport r = theorem1_bound(inst.a, DenseHermitian::zero(6), inst.split, 1);
  EXPECT_TRUE(r.valid);
  EXPECT_TRUE(r.bound.is_zero());
}

TEST(Theorem1, InvalidTauThrows) {
  EXPECT_THROW(theorem1_bound(two_by_two(0.0, 0.0, 0.1), 0.1 * DenseHermitian::identity(2), BlockSplit{1}, 1),
               std::domain_error);
}

TEST(Theorem1, CubicScaling) {
  for (double delta : {1e-2, 1e-3}) {
    for (double eps : {1e-3, 1e-4}) {
      RMatrix base(4, 4);
      for (std::size_t i = 0; i < 3; ++i) {
        base(i, i) = static_cast<double>(i + 1);
        base(3, i) = base(i, 3) = delta;
      }
      RMatrix pert(4, 4);
      pert(3, 3) = eps;
      const DenseHermitian a(base), e(pert);
      const BlockPerturbation bp(a, e, BlockSplit{1});
      const auto lo = eig_dense(a, false).values, hi = eig_dense(a + e, false).values;
      // Ranks 2..4 are the eigenvalues near 1, 2, 3.
      for (std::size_t i = 2; i <= 4; ++i) {
        const double shift = std::fabs(hi[i - 1] - lo[i - 1]);
        const BoundReport r = bp.theorem1(i);
        ASSERT_TRUE(r.valid);
        EXPECT_LE(shift, r.bound.to_double());
        EXPECT_LE(shift, 10.0 * eps * delta * delta);
        EXPECT_LE(r.bound.to_double(), 10.0 * eps * delta * delta);
      }
      // The eigenvalue near 0 moves by O(eps).
      EXPECT_GT(std::fabs(hi[0] - lo[0]), 0.5 * eps);
    }
  }
}

TEST(Theorem1, SoundAndRefinedIsTighter) {
  Rng rng(7);
  int checked = 0;
  for (int trial = 0; trial < 60; ++trial) {
    const std::size_t n = testing::uniform_index(rng, 3, 14);
    const std::size_t k = testing::uniform_index(rng, 1, n - 2);
    const auto inst = testing::random_block_instance(rng, n, k, testing::log_uniform(rng, 1e-5, 1e-1));
    const BlockPerturbation bp(inst.a, inst.e, inst.split);
    const auto after = eig_dense(inst.a + inst.e, false).values;
    for (std::size_t i = 1; i <= n; ++i) {
      const BoundReport plain = bp.theorem1(i, false);
      const BoundReport refined = bp.theorem1(i, true);
      if (!plain.valid) continue;
      ASSERT_TRUE(refined.valid);
      ++checked;
      const double shift = std::fabs(after[i - 1] - bp.eigenvalues()[i - 1]);
      EXPECT_LE(shift, refined.bound.to_double() * (1 + 1e-10) + 1e-15);
      EXPECT_LE(refined.bound, plain.bound);
      EXPECT_LE(plain.best(), LogScalar::from_double(plain.weyl));
    }
  }
  EXPECT_GT(checked, 100);
}

TEST(MinOf, TakesSmallestSoundBound) {
  const DenseHermitian a = two_by_two(0.0, 0.0, 2.0);
  const DenseHermitian e = two_by_two(0.0, 0.1, 0.0);
  const BlockPerturbation bp(a, e, BlockSplit{1});
  const BoundReport reports[] = {bp.weyl(1), quadratic_residual_bound(a, e, BlockSplit{1}, 1), bp.theorem1(1)};
  const BoundReport m = min_of(reports);
  EXPECT_EQ(m.formula, Formula::min_of);
  EXPECT_NEAR(m.bound.to_double(), 0.005, 1e-15);
  EXPECT_TRUE(m.valid);
}

}  // namespace
}  // namespace eigbound
