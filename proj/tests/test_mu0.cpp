#include <cmath>

#include <gtest/gtest.h>

#include "tas/estimation/mu0.hpp"
#include "tas/io.hpp"
#include "tas/random.hpp"

using namespace tas;

namespace {

PointPattern blobs(std::uint64_t seed, const std::vector<std::pair<double, double>>& centres,
                   std::size_t per, double sigma, std::size_t noise = 0) {
  RandomSource rng(seed);
  std::vector<double> x;
  std::vector<std::string> lab;
  for (std::size_t c = 0; c < centres.size(); ++c)
    for (std::size_t i = 0; i < per; ++i) {
      x.push_back(std::clamp(centres[c].first + sigma * rng.normal(), 0.0, 40.0));
      x.push_back(std::clamp(centres[c].second + sigma * rng.normal(), 0.0, 40.0));
      lab.push_back("c" + std::to_string(c));
    }
  for (std::size_t i = 0; i < noise; ++i) {
    x.push_back(rng.uniform(0.0, 40.0));
    x.push_back(rng.uniform(0.0, 40.0));
    lab.push_back("noise" + std::to_string(i));
  }
  return PointPattern(Window::cube(0.0, 40.0, 2), x, lab);
}

}  // namespace

TEST(EmpiricalMu0, RecentresEachCluster) {
  const PointPattern p(Window::interval(0.0, 10.0), {1.0, 2.0, 3.0, 7.0, 9.0, 5.0},
                       std::vector<std::string>{"a", "a", "a", "b", "b", "c"});
  const auto all = std::get<EmpiricalCloud>(estimate_mu0_empirical(p, AllLabeled{}).variant());
  EXPECT_EQ(all.coords, (std::vector<double>{-1.0, 0.0, 1.0, -1.0, 1.0}));
  const auto largest = std::get<EmpiricalCloud>(estimate_mu0_empirical(p, LargestK{1}).variant());
  EXPECT_EQ(largest.coords, (std::vector<double>{-1.0, 0.0, 1.0}));
  const auto named = std::get<EmpiricalCloud>(estimate_mu0_empirical(p, NamedClusters{{"b"}}).variant());
  EXPECT_EQ(named.coords, (std::vector<double>{-1.0, 1.0}));
  EXPECT_THROW(estimate_mu0_empirical(p, NamedClusters{{"c"}}), DomainError);
  EXPECT_THROW(estimate_mu0_empirical(PointPattern(Window::interval(0.0, 1.0), {0.5}), AllLabeled{}), DomainError);
}

TEST(Em, TwoBlobsSelectTwoComponents) {
  const PointPattern p = blobs(1, {{10.0, 10.0}, {30.0, 25.0}}, 150, 1.0);
  RandomSource rng(2);
  EmOptions o;
  o.k_max = 4;
  const MixtureModel m = em_estimate_mu0(p, o, rng);
  ASSERT_EQ(m.components.size(), 2u);
  EXPECT_TRUE(m.converged);
  EXPECT_EQ(m.bic_by_k.size(), 4u);
  for (const auto& [k, bic] : m.bic_by_k) EXPECT_GE(bic, m.bic) << k;
  if (m.reseeds == 0 && m.dropped == 0) {
    for (std::size_t i = 1; i < m.log_likelihood_trace.size(); ++i)
      EXPECT_GE(m.log_likelihood_trace[i], m.log_likelihood_trace[i - 1] - 1e-9 * std::fabs(m.log_likelihood));
  }
  double wsum = 0.0;
  for (const auto& c : m.components) {
    wsum += c.weight;
    EXPECT_NEAR(c.weight, 0.5, 0.01);
    EXPECT_NEAR(c.covariance[0], 1.0, 0.25);
    EXPECT_NEAR(c.covariance[1], 0.0, 0.2);
  }
  EXPECT_NEAR(wsum, 1.0, 1e-12);
  const auto mu0 = mixture_to_mu0(m);
  EXPECT_NEAR(std::get<IsotropicGaussian>(mu0.variant()).sigma, 1.0, 0.1);
}

TEST(Em, NoiseComponentAbsorbsBackground) {
  const PointPattern p = blobs(3, {{12.0, 20.0}, {28.0, 20.0}}, 120, 0.8, 60);
  RandomSource rng(4);
  EmOptions o;
  o.k_max = 3;
  o.noise = true;
  const MixtureModel m = em_estimate_mu0(p, o, rng);
  EXPECT_EQ(m.components.size(), 2u);
  EXPECT_NEAR(m.noise_density, 1.0 / 1600.0, 1e-15);
  EXPECT_NEAR(m.noise_weight, 60.0 / 300.0, 0.06);
}

TEST(Em, ReproducibleAndSerialisable) {
  const PointPattern p = blobs(5, {{20.0, 20.0}}, 80, 2.0);
  RandomSource a(9), b(9);
  const MixtureModel m1 = em_estimate_mu0(p, {}, a), m2 = em_estimate_mu0(p, {}, b);
  EXPECT_EQ(to_json(m1), to_json(m2));
  EXPECT_EQ(to_json(mixture_from_json(to_json(m1))), to_json(m1));
  EmOptions bad;
  bad.k_min = 3;
  bad.k_max = 2;
  EXPECT_THROW(em_estimate_mu0(p, bad, a), DomainError);
}

TEST(WorkedExamples, EmpiricalClouds) {
  const Window w = Window::interval(-1.0, 20.0);
  const PointPattern one(w, {0.0, 2.0}, std::vector<std::string>{"a", "a"});
  EXPECT_EQ(std::get<EmpiricalCloud>(estimate_mu0_empirical(one, AllLabeled{}).variant()).coords,
            (std::vector<double>{-1.0, 1.0}));
  const PointPattern two(w, {0.0, 2.0, 10.0, 12.0}, std::vector<std::string>{"a", "a", "b", "b"});
  EXPECT_EQ(std::get<EmpiricalCloud>(estimate_mu0_empirical(two, AllLabeled{}).variant()).coords,
            (std::vector<double>{-1.0, 1.0, -1.0, 1.0}));
}

TEST(WorkedExamples, LargeUniformClusterCloud) {
  // One cluster of 10^4 uniform points on [-1, 1] around 50: the recentred
  // cloud is within Kolmogorov distance 0.02 of Uniform[-1, 1].
  RandomSource rng(80);
  std::vector<double> x(10000);
  for (double& v : x) v = 50.0 + rng.uniform(-1.0, 1.0);
  const PointPattern p(Window::interval(0.0, 100.0), x, std::vector<std::string>(x.size(), "c"));
  auto c = std::get<EmpiricalCloud>(estimate_mu0_empirical(p, AllLabeled{}).variant()).coords;
  std::sort(c.begin(), c.end());
  double ks = 0.0;
  for (std::size_t i = 0; i < c.size(); ++i) {
    const double f = std::clamp((c[i] + 1.0) / 2.0, 0.0, 1.0);
    ks = std::max({ks, std::fabs(f - static_cast<double>(i) / c.size()), std::fabs(f - (i + 1.0) / c.size())});
  }
  EXPECT_LT(ks, 0.02);
}

TEST(WorkedExamples, FiftyPointBlobs) {
  const std::vector<std::pair<double, double>> centres{{10.0, 10.0}, {30.0, 30.0}};
  const PointPattern p = blobs(90, centres, 50, 1.0);
  RandomSource rng(91);
  EmOptions o;
  o.k_max = 3;
  const MixtureModel m = em_estimate_mu0(p, o, rng);
  ASSERT_EQ(m.components.size(), 2u);
  for (const auto& c : m.components) {
    double best = 1e300;
    for (const auto& [cx, cy] : centres) best = std::min(best, std::hypot(c.mean[0] - cx, c.mean[1] - cy));
    EXPECT_LT(best, 3.0 * std::sqrt(2.0) / std::sqrt(50.0));
  }
  RandomSource rng2(92);
  EXPECT_EQ(em_estimate_mu0(blobs(93, {{20.0, 20.0}}, 100, 1.5), o, rng2).components.size(), 1u);
}

TEST(WorkedExamples, LikelihoodMonotoneOverBattery) {
  for (std::uint64_t run = 0; run < 10; ++run) {
    const PointPattern p = blobs(200 + run, {{10.0, 12.0}, {22.0, 28.0}, {30.0, 10.0}}, 40, 1.2, 10);
    RandomSource rng(300 + run);
    EmOptions o;
    o.k_min = o.k_max = 3;
    o.noise = run % 2 == 1;
    const MixtureModel m = em_estimate_mu0(p, o, rng);
    ASSERT_EQ(m.reseeds + m.dropped, 0u) << run;
    for (std::size_t i = 1; i < m.log_likelihood_trace.size(); ++i)
      EXPECT_GE(m.log_likelihood_trace[i], m.log_likelihood_trace[i - 1] - 1e-9 * std::fabs(m.log_likelihood))
          << run << " " << i;
  }
}
