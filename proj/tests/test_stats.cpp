// Copyright 2026 The morphome-lab Authors
// SPDX-License-Identifier: Apache-2.0

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <numeric>

#include "morphome/random.hpp"
#include "morphome/stats.hpp"
#include "stats_oracles.hpp"

using namespace morphome;
namespace oracle = morphome::testing;

TEST(LogRatio, Definition) {
  EXPECT_DOUBLE_EQ(log_ratio(9, 0), 1.0);
  EXPECT_DOUBLE_EQ(log_ratio(4, 4), 0.0);
  EXPECT_NEAR(log_ratio(3, 1, {0.5, std::exp(1.0), 3.0}), std::log(3.5 / 1.5), 1e-15);
  EXPECT_DOUBLE_EQ(log_ratio(1e9, 0), 3.0);
  EXPECT_DOUBLE_EQ(log_ratio(0, 1e9), -3.0);
  EXPECT_THROW(log_ratio(-1, 2), DataError);
  EXPECT_THROW(log_ratio(1, 2, {0.0, 10.0, 3.0}), ConfigError);
}

TEST(LogRatio, AntisymmetryAndClamp) {
  Rng rng(1);
  for (int k = 0; k < 10000; ++k) {
    const double a = static_cast<double>(uniform_index(rng, 5000));
    const double b = static_cast<double>(uniform_index(rng, 5000));
    const LogRatioOptions o{0.1 + uniform01(rng), 2.0 + 10 * uniform01(rng), 0.5 + 3 * uniform01(rng)};
    const double r = log_ratio(a, b, o);
    EXPECT_NEAR(r, -log_ratio(b, a, o), 1e-12);
    EXPECT_LE(std::abs(r), o.clamp);
  }
}

TEST(Summary, MeanSdCi) {
  const auto s = summarize({2, 4, 4, 4, 5, 5, 7, 9});
  EXPECT_DOUBLE_EQ(s.mean, 5.0);
  EXPECT_NEAR(s.sd, std::sqrt(32.0 / 7.0), 1e-14);
  EXPECT_NEAR(s.ci_high - s.ci_low, 2 * 1.96 * s.sd / std::sqrt(8.0), 1e-14);
  EXPECT_EQ(summarize({3}).sd, 0.0);
  EXPECT_THROW(summarize({}), EmptyInput);
}

TEST(Ranks, TiesShareAverage) {
  EXPECT_EQ(average_ranks({10, 20, 20, 5}), (std::vector<double>{2, 3.5, 3.5, 1}));
  EXPECT_EQ(average_ranks({1, 1, 1}), (std::vector<double>{2, 2, 2}));
}

TEST(Spearman, KnownValues) {
  const auto r = spearman({1, 2, 3, 4, 5}, {5, 6, 7, 8, 7});
  EXPECT_NEAR(r.rho, 0.820782681668123, 1e-12);
  EXPECT_EQ(r.method, "exact-permutation");
  EXPECT_DOUBLE_EQ(spearman({1, 2, 3}, {3, 2, 1}).rho, -1.0);
  EXPECT_DOUBLE_EQ(spearman({1, 2, 3}, {3, 2, 1}).p_value, 2.0 / 6.0);
}

TEST(Spearman, ExactPermutationMatchesBruteForce) {
  Rng rng(2);
  for (std::size_t n = 3; n <= 8; ++n) {
    for (int trial = 0; trial < (n < 8 ? 20 : 4); ++trial) {
      std::vector<double> x(n), y(n);
      // small integer range so ties are common
      for (auto& v : x) v = static_cast<double>(uniform_index(rng, n));
      for (auto& v : y) v = static_cast<double>(uniform_index(rng, n));
      const auto ref = oracle::spearman_brute_force(x, y);
      if (!ref) {
        EXPECT_THROW(spearman(x, y), ConstantInput);
        continue;
      }
      const auto got = spearman(x, y);
      EXPECT_NEAR(got.rho, ref->rho, 1e-12);
      EXPECT_NEAR(got.p_value, ref->p_value, 1e-12);
    }
  }
}

TEST(Spearman, LargeSampleUsesTDistribution) {
  Rng rng(3);
  std::vector<double> x(30), y(30);
  for (std::size_t i = 0; i < x.size(); ++i) {
    x[i] = standard_normal(rng);
    y[i] = x[i] + 2 * standard_normal(rng);
  }
  const auto r = spearman(x, y);
  EXPECT_EQ(r.method, "t-approximation");
  EXPECT_NEAR(r.p_value, oracle::t_two_sided_p(r.rho, x.size()), 1e-9);
  EXPECT_GT(r.p_value, 0.0);
  EXPECT_LT(r.p_value, 1.0);
}

TEST(Spearman, Errors) {
  EXPECT_THROW(spearman({1, 2, 3}, {1, 2}), LengthMismatch);
  EXPECT_THROW(spearman({1, 1, 1}, {1, 2, 3}), ConstantInput);
}

TEST(KolmogorovSurvival, ReferenceValues) {
  EXPECT_DOUBLE_EQ(kolmogorov_survival(0.0), 1.0);
  EXPECT_NEAR(kolmogorov_survival(1.36), 0.0494, 2e-4);
  EXPECT_NEAR(kolmogorov_survival(1.63), 0.0098, 2e-4);
  // both series agree where they hand over
  for (double l : {0.3, 0.6, 0.9, 1.1, 1.18, 1.3, 1.8, 2.5})
    EXPECT_NEAR(kolmogorov_survival(l), oracle::kolmogorov_q_series(l), 1e-9) << l;
  double prev = 1.0;
  for (double l = 0.05; l < 3; l += 0.05) {
    const double q = kolmogorov_survival(l);
    EXPECT_LE(q, prev + 1e-12);
    prev = q;
  }
}

TEST(Ks, MatchesExhaustiveEcdf) {
  Rng rng(4);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n1 = 1 + uniform_index(rng, 12), n2 = 1 + uniform_index(rng, 12);
    std::vector<double> a(n1), b(n2);
    for (auto& v : a) v = static_cast<double>(uniform_index(rng, 8)) / 2;
    for (auto& v : b) v = static_cast<double>(uniform_index(rng, 8)) / 2;
    const auto r = ks_two_sample(a, b);
    EXPECT_NEAR(r.d, oracle::ks_d_exhaustive(a, b), 1e-15);
    EXPECT_EQ(r.n1, n1);
    EXPECT_EQ(r.n2, n2);
    EXPECT_GE(r.p_value, 0.0);
    EXPECT_LE(r.p_value, 1.0);
  }
}

TEST(Ks, IdenticalAndDisjointSamples) {
  const std::vector<double> a{1, 2, 3, 4};
  EXPECT_EQ(ks_two_sample(a, a).d, 0.0);
  EXPECT_EQ(ks_two_sample(a, a).p_value, 1.0);
  EXPECT_EQ(ks_two_sample(a, {10, 11, 12}).d, 1.0);
  EXPECT_THROW(ks_two_sample({}, a), EmptyInput);
}

TEST(Stars, Thresholds) {
  EXPECT_EQ(significance_stars(0.0005), "***");
  EXPECT_EQ(significance_stars(0.001), "***");
  EXPECT_EQ(significance_stars(0.005), "**");
  EXPECT_EQ(significance_stars(0.05), "*");
  EXPECT_EQ(significance_stars(0.051), "");
}
