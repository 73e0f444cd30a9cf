#include <cmath>

#include <gtest/gtest.h>

#include "support/oracles.hpp"
#include "tas/estimation/contact.hpp"
#include "tas/sampling.hpp"

using namespace tas;

namespace {

PointPattern sample_pattern(std::uint64_t seed) {
  const TasParameters params(0.6, 0.05, ClusterDistribution::gaussian(2, 1.0));
  RandomSource rng(seed);
  return simulate_tas(params, Window::cube(0.0, 20.0, 2), rng).pattern;
}

}  // namespace

TEST(TestPoints, GridLayout) {
  const Window w({0.0, 0.0}, {4.0, 2.0});
  const auto g = grid_test_points(w, 1.0);
  ASSERT_EQ(g.size(), 16u);
  EXPECT_DOUBLE_EQ(g[0], 0.5);
  EXPECT_DOUBLE_EQ(g[1], 0.5);
  EXPECT_DOUBLE_EQ(g[3], 1.5);
  EXPECT_EQ(grid_test_points_count(Window::cube(0.0, 1.0, 2), 400).size(), 800u);
  EXPECT_THROW(grid_test_points(w, 0.0), DomainError);
  EXPECT_THROW(resolve_test_points(RandomTestPoints{5, nullptr}, w), DomainError);
}

TEST(Profile, MatchesBruteForce) {
  const PointPattern p = sample_pattern(3);
  ASSERT_GT(p.size(), 20u);
  RandomSource rng(1);
  const DistanceProfile prof = distance_profile(p, RandomTestPoints{100, &rng}, 6);
  EXPECT_EQ(prof.depth, 6u);
  for (std::size_t i = 0; i < prof.size(); ++i) {
    const auto q = prof.test_point(i);
    const auto all = oracle::all_distances(p.coords(), 2, {q[0], q[1]});
    for (std::size_t k = 0; k < 6; ++k) EXPECT_EQ(prof.row(i)[k], all[k]);
    EXPECT_DOUBLE_EQ(prof.boundary_distances[i], std::min({q[0], q[1], 20.0 - q[0], 20.0 - q[1]}));
  }
  const PointPattern tiny(Window::interval(0.0, 1.0), {0.2, 0.7});
  EXPECT_TRUE(distance_profile(tiny, GridCount{10}, 5).depth_clamped);
  EXPECT_THROW(distance_profile(PointPattern(Window::interval(0.0, 1.0)), GridCount{10}, 1), DomainError);
}

TEST(Contact, EmpiricalMatchesIndicatorAverage) {
  const PointPattern p = sample_pattern(4);
  const DistanceProfile prof = distance_profile(p, GridCount{225}, 1);
  const std::vector<double> r{0.5, 1.0, 2.0, 3.0};
  const auto none = empirical_contact(prof, r);
  const auto border = empirical_contact(prof, r, EdgeCorrection::border);
  for (std::size_t j = 0; j < r.size(); ++j) {
    double empty = 0.0, e_b = 0.0, n_b = 0.0;
    for (std::size_t i = 0; i < prof.size(); ++i) {
      const auto q = prof.test_point(i);
      const bool void_ball = oracle::all_distances(p.coords(), 2, {q[0], q[1]})[0] > r[j];
      empty += void_ball;
      if (prof.boundary_distances[i] >= r[j]) {
        n_b += 1.0;
        e_b += void_ball;
      }
    }
    EXPECT_DOUBLE_EQ(none.values()[j], empty / static_cast<double>(prof.size()));
    EXPECT_DOUBLE_EQ(border.values()[j], e_b / n_b);
    EXPECT_EQ(contact_support(prof, r[j], EdgeCorrection::border), static_cast<std::size_t>(n_b));
  }
}

TEST(Contact, ThinnedEstimateIsTheThinningMean) {
  // The weighted form equals E[1{no retained point in B_r}] over thinnings;
  // compare with an average over explicit thinnings.
  const PointPattern p = sample_pattern(5);
  const std::vector<double> r{0.5, 1.0, 1.5};
  const double pr = 0.35;
  const std::vector<double> tp = grid_test_points_count(p.window(), 100);
  const DistanceProfile prof = distance_profile(p, ExplicitTestPoints{tp}, thinning_depth(pr));
  const auto est = thinned_contact_estimate(prof, pr, r);
  std::vector<double> mc(r.size(), 0.0);
  const int reps = 4000;
  RandomSource rng(6);
  for (int t = 0; t < reps; ++t) {
    const PointPattern th = thin(p, pr, rng);
    if (th.empty()) {
      for (double& m : mc) m += 1.0;
      continue;
    }
    const auto g = empirical_contact(distance_profile(th, ExplicitTestPoints{tp}, 1), r);
    for (std::size_t j = 0; j < r.size(); ++j) mc[j] += g.values()[j];
  }
  for (std::size_t j = 0; j < r.size(); ++j) EXPECT_NEAR(mc[j] / reps, est.values()[j], 0.01) << r[j];
}

TEST(Contact, ThinnedAtOneIsEmpirical) {
  const PointPattern p = sample_pattern(7);
  const DistanceProfile prof = distance_profile(p, GridCount{100}, 3);
  const std::vector<double> r{0.5, 1.0, 2.0};
  EXPECT_EQ(thinned_contact_estimate(prof, 1.0, r).values(), empirical_contact(prof, r).values());
  ThinnedEstimateDiagnostics diag;
  thinned_contact_estimate(prof, 0.1, r, EdgeCorrection::none, &diag);
  EXPECT_NEAR(diag.tail_bound, std::pow(0.9, 3.0), 1e-15);
  EXPECT_FALSE(diag.depth_sufficient);
  EXPECT_LE(std::pow(0.9, static_cast<double>(thinning_depth(0.1))), 1e-8);
  EXPECT_GT(std::pow(0.9, static_cast<double>(thinning_depth(0.1) - 1)), 1e-8);
}

TEST(WorkedExamples, ProfileAndEstimators) {
  const Window w = Window::interval(-5.0, 5.0);
  const PointPattern single(w, {2.0});
  const DistanceProfile p1 = distance_profile(single, ExplicitTestPoints{{0.0}}, 1);
  EXPECT_EQ(p1.nearest(0), 2.0);
  const std::vector<double> r13{1.0, 3.0};
  EXPECT_EQ(empirical_contact(p1, r13).values(), (std::vector<double>{1.0, 0.0}));

  const PointPattern two(w, {1.0, -3.0});
  const DistanceProfile p2 = distance_profile(two, ExplicitTestPoints{{0.0}}, 2);
  EXPECT_EQ(std::vector<double>(p2.row(0).begin(), p2.row(0).end()), (std::vector<double>{1.0, 3.0}));
  const std::vector<double> r2{2.0};
  EXPECT_DOUBLE_EQ(thinned_contact_estimate(p2, 0.5, r2).values()[0], 0.5);

  const PointPattern lone(w, {1.0});
  const DistanceProfile p3 = distance_profile(lone, ExplicitTestPoints{{0.0, 4.0}}, 1);
  EXPECT_DOUBLE_EQ(empirical_contact(p3, r2).values()[0], 0.5);
}

TEST(WorkedExamples, ThousandPointProfile) {
  RandomSource rng(50);
  std::vector<double> x(2000);
  for (double& v : x) v = rng.uniform(0.0, 10.0);
  const PointPattern p(Window::cube(0.0, 10.0, 2), x);
  const DistanceProfile prof = distance_profile(p, GridCount{100}, 20);
  for (std::size_t i = 0; i < prof.size(); ++i) {
    const auto q = prof.test_point(i);
    const auto all = oracle::all_distances(x, 2, {q[0], q[1]});
    EXPECT_EQ(std::vector<double>(prof.row(i).begin(), prof.row(i).end()),
              std::vector<double>(all.begin(), all.begin() + 20));
  }
}

TEST(WorkedExamples, ThinnedEstimateClosedForm) {
  // With K covering every point, the estimate is (1/n) sum_i (1 - p)^{N_i(r)}.
  RandomSource rng(51);
  std::vector<double> x(120);
  for (double& v : x) v = rng.uniform(0.0, 6.0);
  const PointPattern p(Window::cube(0.0, 6.0, 2), x);
  const DistanceProfile prof = distance_profile(p, RandomTestPoints{40, &rng}, 60);
  const std::vector<double> r{0.3, 0.8, 1.5};
  for (double pr : {0.2, 0.6}) {
    const auto est = thinned_contact_estimate(prof, pr, r);
    for (std::size_t j = 0; j < r.size(); ++j) {
      double s = 0.0;
      for (std::size_t i = 0; i < prof.size(); ++i)
        s += std::pow(1.0 - pr, static_cast<double>(points_within(prof.row(i), r[j])));
      EXPECT_NEAR(est.values()[j], s / static_cast<double>(prof.size()), 1e-14);
    }
  }
}
