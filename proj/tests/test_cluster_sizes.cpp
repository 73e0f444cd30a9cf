#include <cmath>

#include <gtest/gtest.h>

#include "tas/estimation/cluster_sizes.hpp"
#include "tas/sampling.hpp"

using namespace tas;

TEST(ClusterSizes, SingletonsGiveAlphaOne) {
  const std::vector<std::uint64_t> ones(50, 1);
  const auto e = estimate_alpha_from_cluster_sizes(ones);
  EXPECT_EQ(e.alpha, 1.0);
  EXPECT_EQ(e.t_used.size(), 9u);
}

TEST(ClusterSizes, RecoversSibuyaAlpha) {
  for (double a : {0.3, 0.6, 0.9}) {
    RandomSource rng(21);
    std::vector<std::uint64_t> sizes(20000);
    for (auto& n : sizes) n = sibuya_variate(a, rng);
    EXPECT_NEAR(estimate_alpha_from_cluster_sizes(sizes).alpha, a, 0.02) << a;
  }
}

TEST(ClusterSizes, EmpiricalPgf) {
  const std::map<std::uint64_t, std::size_t> hist{{1, 2}, {3, 2}};
  EXPECT_DOUBLE_EQ(empirical_pgf(hist, 4, 0.5), 0.5 * 0.5 + 0.5 * 0.125);
}

TEST(ClusterSizes, Validation) {
  const std::vector<std::uint64_t> s{1, 2, 3};
  EXPECT_THROW(estimate_alpha_from_cluster_sizes(std::vector<std::uint64_t>{}), DomainError);
  EXPECT_THROW(estimate_alpha_from_cluster_sizes(std::vector<std::uint64_t>{0, 1}), DomainError);
  EXPECT_THROW(estimate_alpha_from_cluster_sizes(s, std::vector<double>{0.5}), DomainError);
  EXPECT_THROW(estimate_alpha_from_cluster_sizes(s, std::vector<double>{0.5, 1.0}), DomainError);
  EXPECT_THROW(estimate_alpha_from_cluster_sizes(s, std::vector<double>{0.6, 0.5}), DomainError);
}

TEST(ClusterSizes, ErrorShrinksWithK) {
  // Root-mean-square error over 40 batches at each K; quadrupling K should
  // roughly halve it.
  std::vector<double> rmse;
  RandomSource rng(70);
  for (std::size_t K : {1000u, 4000u, 16000u}) {
    double ss = 0.0;
    for (int b = 0; b < 40; ++b) {
      std::vector<std::uint64_t> sizes(K);
      for (auto& n : sizes) n = sibuya_variate(0.6, rng);
      const double e = estimate_alpha_from_cluster_sizes(sizes).alpha - 0.6;
      ss += e * e;
    }
    rmse.push_back(std::sqrt(ss / 40.0));
  }
  for (std::size_t i = 1; i < rmse.size(); ++i) {
    EXPECT_GT(rmse[i - 1] / rmse[i], 1.4);
    EXPECT_LT(rmse[i - 1] / rmse[i], 2.9);
  }
}

TEST(ClusterSizes, WorkedExampleTenThousand) {
  RandomSource rng(71);
  std::vector<std::uint64_t> sizes(10000);
  for (auto& n : sizes) n = sibuya_variate(0.6, rng);
  EXPECT_NEAR(estimate_alpha_from_cluster_sizes(sizes).alpha, 0.6, 0.02);
}
