#include "oplab/rng.hpp"

#include <gtest/gtest.h>

#include <array>
#include <cmath>
#include <vector>

namespace oplab {
namespace {

TEST(Rng, SameSeedAndStreamRepeat) {
  RngStream a(42, 7);
  RngStream b(42, 7);
  for (int i = 0; i < 1000; ++i) ASSERT_EQ(a.next_u64(), b.next_u64());
}

TEST(Rng, StreamsDiffer) {
  RngStream a(42, 0);
  RngStream b(42, 1);
  RngStream c(43, 0);
  int same_ab = 0;
  int same_ac = 0;
  for (int i = 0; i < 100; ++i) {
    const auto x = a.next_u64();
    same_ab += x == b.next_u64();
    same_ac += x == c.next_u64();
  }
  EXPECT_EQ(same_ab, 0);
  EXPECT_EQ(same_ac, 0);
}

TEST(Rng, DeriveIgnoresParentDraws) {
  RngStream parent(9, 3);
  RngStream child = parent.derive(5);
  for (int i = 0; i < 17; ++i) parent.next_u64();
  RngStream again = parent.derive(5);
  for (int i = 0; i < 100; ++i) ASSERT_EQ(child.next_u64(), again.next_u64());
  EXPECT_NE(parent.derive(5).next_u64(), parent.derive(6).next_u64());
}

TEST(Rng, UniformRange) {
  RngStream r(1);
  double sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = r.uniform();
    ASSERT_GE(u, 0.0);
    ASSERT_LT(u, 1.0);
    sum += u;
  }
  // sd of the mean is sqrt(1/12/n)
  EXPECT_NEAR(sum / n, 0.5, 4.0 * std::sqrt(1.0 / 12.0 / n));
}

TEST(Rng, UniformIndexChiSquare) {
  RngStream r(2);
  std::array<int, 7> counts{};
  const int n = 70000;
  for (int i = 0; i < n; ++i) {
    const auto k = r.uniform_index(7);
    ASSERT_LT(k, 7u);
    ++counts[k];
  }
  double chi2 = 0.0;
  for (int c : counts) chi2 += (c - n / 7.0) * (c - n / 7.0) / (n / 7.0);
  // 6 degrees of freedom; 22.46 is the 0.999 quantile
  EXPECT_LT(chi2, 22.46);
}

TEST(Rng, CategoricalFrequencies) {
  RngStream r(3);
  const std::vector<double> w{0.1, 0.0, 0.6, 0.3};
  std::array<int, 4> counts{};
  const int n = 100000;
  for (int i = 0; i < n; ++i) ++counts[static_cast<std::size_t>(r.categorical(w))];
  EXPECT_EQ(counts[1], 0);
  for (std::size_t k = 0; k < w.size(); ++k) {
    const double se = std::sqrt(w[k] * (1 - w[k]) / n);
    EXPECT_NEAR(counts[k] / static_cast<double>(n), w[k], 4.0 * se + 1e-12);
  }
}

TEST(Rng, CategoricalRejectsBadWeights) {
  RngStream r(4);
  const std::vector<double> zero{0.0, 0.0};
  const std::vector<double> negative{1.0, -0.5};
  EXPECT_THROW(r.categorical(zero), std::invalid_argument);
  EXPECT_THROW(r.categorical(negative), std::invalid_argument);
}

TEST(Rng, NormalAndExponentialMoments) {
  RngStream r(5);
  const int n = 200000;
  double s = 0.0, s2 = 0.0, e = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = r.normal();
    s += z;
    s2 += z * z;
    e += r.exponential();
  }
  EXPECT_NEAR(s / n, 0.0, 4.0 / std::sqrt(n));
  EXPECT_NEAR(s2 / n, 1.0, 4.0 * std::sqrt(2.0 / n));
  EXPECT_NEAR(e / n, 1.0, 4.0 / std::sqrt(n));
}

}  // namespace
}  // namespace oplab
