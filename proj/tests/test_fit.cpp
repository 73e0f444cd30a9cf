#include <cmath>

#include <gtest/gtest.h>

#include "tas/analytics.hpp"
#include "tas/estimation/fit.hpp"
#include "tas/sampling.hpp"

using namespace tas;

namespace {

std::vector<ThinnedCurve> exact_curves(const TasParameters& params, const std::vector<double>& p,
                                       const std::vector<double>& r) {
  std::vector<ThinnedCurve> out;
  for (double pi : p) out.push_back({pi, thinned_contact_analytic(params, pi, r)});
  return out;
}

}  // namespace

TEST(VoidFit, RecoversExactCurves) {
  const std::vector<double> r{0.2, 0.5, 1.0, 1.5, 2.0, 3.0};
  for (const auto& mu0 : {ClusterDistribution::uniform(1.0), ClusterDistribution::gaussian(2, 1.0)}) {
    const TasParameters params(0.65, 0.3, mu0);
    const auto one = exact_curves(params, {1.0}, r);
    const FitResult f = fit_void(one, mu0);
    EXPECT_EQ(f.method, "void");
    EXPECT_EQ(f.objective, "direct-ls");
    EXPECT_NEAR(f.alpha_hat, 0.65, 1e-4);
    EXPECT_NEAR(f.lambda_hat, 0.3, 1e-4);
    const auto many = exact_curves(params, {0.3, 0.6, 1.0}, r);
    for (auto obj : {Objective::direct_ls, Objective::log_profiled_ls}) {
      FitOptions o;
      o.objective = obj;
      const FitResult t = fit_void(many, mu0, o);
      EXPECT_EQ(t.method, "void-thinned");
      EXPECT_NEAR(t.alpha_hat, 0.65, 1e-5) << to_string(obj);
      EXPECT_NEAR(t.lambda_hat, 0.3, 1e-5) << to_string(obj);
    }
  }
}

TEST(VoidFit, ProfiledLambdaIsExactForKnownAlpha) {
  const auto mu0 = ClusterDistribution::uniform(0.5);
  const TasParameters params(0.8, 0.9, mu0);
  FitOptions o;
  o.objective = Objective::log_profiled_ls;
  const FitResult f = fit_void(exact_curves(params, {0.5, 1.0}, {0.25, 0.5, 1.0}), mu0, o);
  EXPECT_NEAR(f.objective_value, 0.0, 1e-16);
  EXPECT_NEAR(f.alpha_hat, 0.8, 1e-6);
}

TEST(VoidFit, DegenerateInputs) {
  const auto mu0 = ClusterDistribution::uniform(1.0);
  std::vector<ThinnedCurve> c{{1.0, ContactCurve({1.0}, {0.5})}};
  EXPECT_THROW(fit_void(c, mu0), DegenerateDataError);
  c = {{1.0, ContactCurve({1.0, 2.0}, {1.0, 0.0})}};
  EXPECT_THROW(fit_void(c, mu0), DegenerateDataError);
  std::vector<VoidObservation> bad{{1.0, 0.0, 0.5}};
  EXPECT_THROW(fit_void_observations(bad, mu0, {}, Objective::direct_ls, "void"), DomainError);
}

TEST(PgfFit, RecoversExactValues) {
  const auto mu0 = ClusterDistribution::gaussian(2, 1.0);
  const TasParameters params(0.45, 0.2, mu0);
  const std::vector<double> z = default_z_grid();
  std::vector<double> g;
  for (double zi : z) g.push_back(count_pgf(params, 1.5, zi));
  const FitResult f = fit_count_pgf_values(1.5, z, g, mu0);
  EXPECT_EQ(f.method, "pgf");
  EXPECT_EQ(f.objective, "log-profiled-ls");
  EXPECT_NEAR(f.alpha_hat, 0.45, 1e-6);
  EXPECT_NEAR(f.lambda_hat, 0.2, 1e-6);
  EXPECT_THROW(fit_count_pgf_values(1.5, std::vector<double>{0.5}, g, mu0), DomainError);
}

TEST(PgfFit, EmpiricalPgfOfKnownCounts) {
  // Points on a lattice of spacing 1: a ball of radius 0.3 centred on a
  // lattice point holds exactly that point.
  std::vector<double> x;
  for (int i = 0; i < 20; ++i) x.push_back(i + 0.5);
  const PointPattern p(Window::interval(0.0, 20.0), x);
  PgfFitSettings s;
  s.radius = 0.3;
  std::vector<double> nodes(x.begin() + 1, x.end() - 1);
  s.test_points = ExplicitTestPoints{nodes};
  const EmpiricalPgf e = empirical_count_pgf(p, s);
  EXPECT_EQ(e.test_points, 18u);
  for (std::size_t j = 0; j < e.z.size(); ++j) EXPECT_NEAR(e.g[j], e.z[j], 1e-15);
}

TEST(VoidFit, SimulatedPatternIsRoughlyRecovered) {
  const auto mu0 = ClusterDistribution::uniform(1.0);
  const TasParameters params(0.7, 0.5, mu0);
  RandomSource rng(12);
  const Window w = Window::interval(0.0, 4000.0);
  const PointPattern p = simulate_tas(params, w, rng).pattern;
  VoidFitSettings s;
  s.p_values = default_thinning_levels();
  const DistanceProfile prof = distance_profile(p, GridCount{4000}, thinning_depth(0.3));
  const FitResult f = fit_void(prof, mu0, s);
  EXPECT_TRUE(f.converged);
  EXPECT_NEAR(f.alpha_hat, 0.7, 0.1);
  EXPECT_NEAR(f.lambda_hat, 0.5, 0.1);
}

TEST(WorkedExamples, ExactCurveRecovery) {
  const auto mu0 = ClusterDistribution::uniform(1.0);
  std::vector<double> r;
  for (int i = 1; i <= 40; ++i) r.push_back(0.5 * i);
  const FitResult f = fit_void(exact_curves(TasParameters(0.6, 0.02, mu0), {1.0}, r), mu0);
  EXPECT_NEAR(f.alpha_hat, 0.6, 1e-6);
  EXPECT_NEAR(f.lambda_hat, 0.02, 1e-6);

  const TasParameters params(0.7, 0.1, mu0);
  std::vector<double> g;
  const std::vector<double> z = default_z_grid();
  for (double zi : z) g.push_back(count_pgf(params, 1.0, zi));
  const FitResult h = fit_count_pgf_values(1.0, z, g, mu0);
  EXPECT_NEAR(h.alpha_hat, 0.7, 1e-6);
  EXPECT_NEAR(h.lambda_hat, 0.1, 1e-6);
}

TEST(WorkedExamples, PoissonPatternPushesAlphaToOne) {
  const auto mu0 = ClusterDistribution::uniform(1.0);
  RandomSource rng(60);
  const auto p = simulate_tas(TasParameters(1.0, 0.4, mu0), Window::interval(0.0, 5000.0), rng).pattern;
  PgfFitSettings s;
  s.radius = 1.0;
  s.test_points = GridCount{2000};
  const FitResult f = fit_count_pgf(p, mu0, s);
  EXPECT_GT(f.alpha_hat, 0.93);
  // With alpha = 1, I(B_1) = 2, so lambda_hat I = 2 lambda_hat tracks the mean count 0.8.
  const double cov = coverage_integral(mu0, 1.0, f.alpha_hat).value;
  EXPECT_NEAR(f.lambda_hat * cov, 0.8, 0.08);
}
