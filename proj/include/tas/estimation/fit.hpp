#pragma once

// Least-squares estimation of (alpha, lambda) from void probabilities and
// from the count p.g.f.
//
// Both data sources reduce to observations (r, b, g) of the model
//     g = exp(-lambda * b^alpha * I(B_r; alpha)),
// where b = p for the contact function of a p-thinned pattern and b = 1 - z
// for the count p.g.f. at z. Since log g is linear in lambda, lambda can be
// profiled out in closed form, leaving a 1-D search over alpha.

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "tas/analytics.hpp"
#include "tas/core.hpp"
#include "tas/estimation/contact.hpp"
#include "tas/knn.hpp"
#include "tas/optimize.hpp"

namespace tas {

enum class Objective { direct_ls, log_profiled_ls };

inline const char* to_string(Objective o) {
  return o == Objective::direct_ls ? "direct-ls" : "log-profiled-ls";
}

struct ParameterBounds {
  double alpha_min = 0.01;
  double alpha_max = 0.999;
  double lambda_max = std::numeric_limits<double>::infinity();
};

struct FitOptions {
  std::optional<Objective> objective;  // empty: the method's default
  ParameterBounds bounds;
  IntegrationDomain domain = FullSpace{};
  QuadratureOptions quadrature;
  NelderMeadOptions simplex;
};

struct FitResult {
  double alpha_hat = 0.0;
  double lambda_hat = 0.0;
  double objective_value = 0.0;
  std::string method;
  std::string objective;
  int iterations = 0;
  bool converged = false;
  std::size_t observations = 0;
  std::vector<std::string> warnings;
};

// One contact curve of the p-thinned pattern.
struct ThinnedCurve {
  double p;
  ContactCurve curve;
};

struct VoidObservation {
  double radius;
  double base;   // p, or 1 - z
  double value;  // observed g
};

namespace detail {

// I(B_r; alpha) for a fixed set of radii, memoised on the last alpha.
class CoverageTable {
 public:
  CoverageTable(const ClusterDistribution& mu0, std::vector<double> radii,
                const IntegrationDomain& domain, const QuadratureOptions& q)
      : mu0_(mu0), radii_(std::move(radii)), domain_(domain), q_(q) {}

  // Full-space Gaussian laws switch to tabulated radial rules, built once,
  // valid for alpha >= alpha_min.
  CoverageTable(const ClusterDistribution& mu0, std::vector<double> radii,
                const IntegrationDomain& domain, const QuadratureOptions& q, double alpha_min)
      : CoverageTable(mu0, std::move(radii), domain, q) {
    const auto* g = std::get_if<IsotropicGaussian>(&mu0.variant());
    if (g && std::holds_alternative<FullSpace>(domain))
      for (double r : radii_) rules_.emplace_back(*g, r, alpha_min);
  }

  const std::vector<double>& at(double alpha) {
    if (alpha != alpha_ || values_.empty()) {
      values_.resize(radii_.size());
      for (std::size_t i = 0; i < radii_.size(); ++i)
        values_[i] = rules_.empty() ? coverage_integral(mu0_, radii_[i], alpha, domain_, q_).value
                                    : rules_[i](alpha);
      alpha_ = alpha;
    }
    return values_;
  }

 private:
  const ClusterDistribution& mu0_;
  std::vector<double> radii_;
  IntegrationDomain domain_;
  QuadratureOptions q_;
  double alpha_ = std::numeric_limits<double>::quiet_NaN();
  std::vector<double> values_;
  std::vector<GaussianCoverageRule> rules_;
};

class VoidModelFit {
 public:
  VoidModelFit(std::span<const VoidObservation> obs, const ClusterDistribution& mu0,
               const FitOptions& opt)
      : opt_(opt), table_(mu0, unique_radii(obs), opt.domain, opt.quadrature, opt.bounds.alpha_min) {
    std::vector<double> radii = unique_radii(obs);
    for (const auto& o : obs) {
      const auto it = std::lower_bound(radii.begin(), radii.end(), o.radius);
      obs_.push_back({static_cast<std::size_t>(it - radii.begin()), o.base, o.value});
    }
  }

  // Closed-form lambda minimising the log-space residual at fixed alpha.
  double profiled_lambda(double alpha) {
    const auto& cov = table_.at(alpha);
    double num = 0.0, den = 0.0;
    for (const auto& o : obs_) {
      if (!(o.value > 0.0)) continue;
      const double c = pow_alpha(o.base, alpha) * cov[o.radius];
      num += std::log(o.value) * c;
      den += c * c;
    }
    if (!(den > 0.0)) return 0.0;
    return std::clamp(-num / den, 0.0, opt_.bounds.lambda_max);
  }

  double log_objective(double alpha) {
    const double lambda = profiled_lambda(alpha);
    const auto& cov = table_.at(alpha);
    double s = 0.0;
    for (const auto& o : obs_) {
      if (!(o.value > 0.0)) continue;
      const double e = std::log(o.value) + lambda * pow_alpha(o.base, alpha) * cov[o.radius];
      s += e * e;
    }
    return s;
  }

  double direct_objective(double alpha, double lambda) {
    const auto& cov = table_.at(alpha);
    double s = 0.0;
    for (const auto& o : obs_) {
      const double e = o.value - std::exp(-lambda * pow_alpha(o.base, alpha) * cov[o.radius]);
      s += e * e;
    }
    return s;
  }

  FitResult run(Objective objective) {
    const auto& b = opt_.bounds;
    FitResult res;
    res.objective = to_string(objective);
    res.observations = obs_.size();

    const MinimizeResult prof = scan_then_brent(
        [&](double a) { return log_objective(a); }, b.alpha_min, b.alpha_max);
    const double alpha0 = prof.x[0];
    const double lambda0 = profiled_lambda(alpha0);
    if (objective == Objective::log_profiled_ls) {
      res.alpha_hat = alpha0;
      res.lambda_hat = lambda0;
      res.objective_value = prof.value;
      res.iterations = prof.iterations;
      res.converged = prof.converged;
      return res;
    }

    const double lambda_step = lambda0 > 0.0 ? 0.1 * lambda0 : 1e-3;
    const MinimizeResult nm = nelder_mead(
        [&](const std::vector<double>& x) { return direct_objective(x[0], x[1]); },
        {alpha0, lambda0}, {0.05, lambda_step}, {b.alpha_min, 0.0}, {b.alpha_max, b.lambda_max},
        opt_.simplex);
    res.alpha_hat = nm.x[0];
    res.lambda_hat = nm.x[1];
    res.objective_value = nm.value;
    res.iterations = nm.iterations;
    res.converged = nm.converged;
    return res;
  }

 private:
  struct Obs {
    std::size_t radius;  // index into the coverage table
    double base;
    double value;
  };

  static std::vector<double> unique_radii(std::span<const VoidObservation> obs) {
    std::vector<double> r;
    for (const auto& o : obs) r.push_back(o.radius);
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
    return r;
  }

  FitOptions opt_;
  CoverageTable table_;
  std::vector<Obs> obs_;
};

inline void check_observations(std::span<const VoidObservation> obs) {
  bool informative = false;
  for (const auto& o : obs) {
    if (!(o.radius > 0.0)) throw DomainError("observation radius must be positive");
    if (!(o.base > 0.0 && o.base <= 1.0)) throw DomainError("observation base must lie in (0, 1]");
    if (!(o.value >= 0.0 && o.value <= 1.0)) throw DomainError("observed value must lie in [0, 1]");
    informative = informative || (o.value > 0.0 && o.value < 1.0);
  }
  if (!informative) throw DegenerateDataError("all observed values are 0 or 1");
}

}  // namespace detail

// Fits (alpha, lambda) to generic observations of exp(-lambda b^alpha I).
inline FitResult fit_void_observations(std::span<const VoidObservation> obs,
                                       const ClusterDistribution& mu0, const FitOptions& opt,
                                       Objective default_objective, std::string method) {
  detail::check_observations(obs);
  const Objective objective = opt.objective.value_or(default_objective);
  if (objective == Objective::log_profiled_ls) {
    std::size_t positive = 0;
    for (const auto& o : obs) positive += o.value > 0.0 ? 1 : 0;
    if (positive < 2) throw DegenerateDataError("fewer than 2 positive values for a log fit");
  }
  detail::VoidModelFit fit(obs, mu0, opt);
  FitResult res = fit.run(objective);
  res.method = std::move(method);
  if (!res.converged) res.warnings.push_back("optimizer did not converge; best iterate returned");
  return res;
}

// Fit from contact curves of thinned patterns (p = 1: the plain void fit).
inline FitResult fit_void(std::span<const ThinnedCurve> curves, const ClusterDistribution& mu0,
                          const FitOptions& opt = {}) {
  std::vector<VoidObservation> obs;
  std::vector<double> distinct;
  bool thinned = false;
  for (const auto& c : curves) {
    thinned = thinned || c.p != 1.0;
    for (std::size_t i = 0; i < c.curve.size(); ++i) {
      obs.push_back({c.curve.radii()[i], c.p, c.curve.values()[i]});
      distinct.push_back(c.curve.radii()[i]);
    }
  }
  std::sort(distinct.begin(), distinct.end());
  distinct.erase(std::unique(distinct.begin(), distinct.end()), distinct.end());
  if (distinct.size() < 2) throw DegenerateDataError("void fit needs at least 2 radii");
  return fit_void_observations(obs, mu0, opt, Objective::direct_ls,
                               thinned ? "void-thinned" : "void");
}

// ---------------------------------------------------------------------------
// From a distance profile

inline std::vector<double> default_thinning_levels() {
  std::vector<double> p;
  for (int i = 3; i <= 10; ++i) p.push_back(i / 10.0);
  return p;
}

struct VoidFitSettings {
  std::vector<double> p_values{1.0};
  std::vector<double> radii;  // empty: the ordered nearest distances
  EdgeCorrection edge = EdgeCorrection::border;
  double min_support_fraction = 0.1;  // radii backed by fewer test points are dropped
  std::size_t max_radii = 0;          // 0: no subsampling
};

// Radius grid for a profile: the distinct positive nearest distances with
// sufficient edge-corrected support, optionally thinned to max_radii.
inline std::vector<double> void_fit_radii(const DistanceProfile& prof, const VoidFitSettings& s) {
  std::vector<double> r;
  if (s.radii.empty()) {
    for (std::size_t i = 0; i < prof.size(); ++i)
      if (prof.nearest(i) > 0.0) r.push_back(prof.nearest(i));
    std::sort(r.begin(), r.end());
    r.erase(std::unique(r.begin(), r.end()), r.end());
  } else {
    r = validated_radii(s.radii);
  }
  const double need = std::max(1.0, s.min_support_fraction * static_cast<double>(prof.size()));
  std::erase_if(r, [&](double x) {
    return static_cast<double>(contact_support(prof, x, s.edge)) < need;
  });
  if (s.max_radii > 0 && r.size() > s.max_radii) {
    std::vector<double> sub;
    for (std::size_t j = 0; j < s.max_radii; ++j)
      sub.push_back(r[j * (r.size() - 1) / (s.max_radii - 1)]);
    sub.erase(std::unique(sub.begin(), sub.end()), sub.end());
    r = std::move(sub);
  }
  return r;
}

inline FitResult fit_void(const DistanceProfile& prof, const ClusterDistribution& mu0,
                          const VoidFitSettings& s = {}, const FitOptions& opt = {}) {
  if (s.p_values.empty()) throw DomainError("at least one thinning level is required");
  const std::vector<double> radii = void_fit_radii(prof, s);
  if (radii.size() < 2) throw DegenerateDataError("void fit needs at least 2 usable radii");
  std::vector<ThinnedCurve> curves;
  std::vector<std::string> warnings;
  for (double p : s.p_values) {
    ThinnedEstimateDiagnostics diag;
    curves.push_back({p, p == 1.0 ? empirical_contact(prof, radii, s.edge)
                                  : thinned_contact_estimate(prof, p, radii, s.edge, &diag)});
    if (!diag.depth_sufficient)
      warnings.push_back("profile depth " + std::to_string(prof.depth) + " leaves tail bound " +
                         format_coord(diag.tail_bound) + " at p=" + format_coord(p));
  }
  FitResult res = fit_void(curves, mu0, opt);
  if (s.p_values.size() == 1 && s.p_values[0] != 1.0) res.method = "void-thinned";
  res.warnings.insert(res.warnings.end(), warnings.begin(), warnings.end());
  return res;
}

// ---------------------------------------------------------------------------
// Count p.g.f.

inline std::vector<double> default_z_grid() {
  std::vector<double> z;
  for (int i = 1; i <= 9; ++i) z.push_back(i / 10.0);
  return z;
}

struct PgfFitSettings {
  double radius = 0.0;  // 0: median nearest distance over a window grid
  std::vector<double> z_grid = default_z_grid();
  TestPoints test_points = GridCount{400};
};

// Fit from p.g.f. values g(z) of the count in a ball of the given radius.
inline FitResult fit_count_pgf_values(double radius, std::span<const double> z_grid,
                                      std::span<const double> g_values,
                                      const ClusterDistribution& mu0, const FitOptions& opt = {}) {
  if (z_grid.size() != g_values.size()) throw DomainError("z grid and values differ in length");
  std::vector<VoidObservation> obs;
  for (std::size_t j = 0; j < z_grid.size(); ++j) {
    if (!(z_grid[j] >= 0.0 && z_grid[j] < 1.0)) throw DomainError("z values must lie in [0, 1)");
    if (!(g_values[j] > 0.0)) continue;  // log undefined
    obs.push_back({radius, 1.0 - z_grid[j], g_values[j]});
  }
  if (obs.size() < 2) throw DegenerateDataError("fewer than 2 usable z values");
  return fit_void_observations(obs, mu0, opt, Objective::log_profiled_ls, "pgf");
}

struct EmpiricalPgf {
  double radius = 0.0;
  std::vector<double> z;
  std::vector<double> g;
  std::size_t test_points = 0;
};

// g_hat(z) = mean over test balls of z^N, balls held inside the window.
inline EmpiricalPgf empirical_count_pgf(const PointPattern& pattern, const PgfFitSettings& s) {
  if (pattern.empty()) throw DegenerateDataError("count p.g.f. needs a non-empty pattern");
  const Window& w = pattern.window();
  const NearestNeighbours index(pattern.coords(), pattern.dim());
  double radius = s.radius;
  if (radius == 0.0) {
    const std::vector<double> grid = grid_test_points_count(w, 400);
    std::vector<double> nn;
    for (std::size_t i = 0; i < grid.size() / w.dim(); ++i)
      nn.push_back(index.k_nearest(std::span<const double>(grid).subspan(i * w.dim(), w.dim()), 1)[0]);
    std::nth_element(nn.begin(), nn.begin() + static_cast<std::ptrdiff_t>(nn.size() / 2), nn.end());
    radius = nn[nn.size() / 2];
  }
  if (!(radius > 0.0)) throw DegenerateDataError("count p.g.f. radius must be positive");

  std::vector<double> tp;
  if (std::holds_alternative<ExplicitTestPoints>(s.test_points) ||
      std::holds_alternative<RandomTestPoints>(s.test_points)) {
    const std::vector<double> all = resolve_test_points(s.test_points, w);
    for (std::size_t i = 0; i < all.size() / w.dim(); ++i) {
      const auto x = std::span<const double>(all).subspan(i * w.dim(), w.dim());
      if (w.contains(x) && w.boundary_distance(x) >= radius) tp.insert(tp.end(), x.begin(), x.end());
    }
  } else {
    for (std::size_t k = 0; k < w.dim(); ++k)
      if (!(w.side(k) > 2.0 * radius))
        throw DegenerateDataError("window too small for count balls of radius " + format_coord(radius));
    tp = resolve_test_points(s.test_points, w.eroded(radius));
  }
  const std::size_t m = tp.size() / w.dim();
  if (m == 0) throw DegenerateDataError("no test balls fit inside the window");

  std::map<std::size_t, std::size_t> hist;
  for (std::size_t j = 0; j < m; ++j)
    ++hist[index.count_within(std::span<const double>(tp).subspan(j * w.dim(), w.dim()), radius)];

  EmpiricalPgf out;
  out.radius = radius;
  out.test_points = m;
  out.z = s.z_grid;
  for (double z : s.z_grid) {
    double g = 0.0;
    for (const auto& [n, c] : hist)
      g += (static_cast<double>(c) / static_cast<double>(m)) * std::pow(z, static_cast<double>(n));
    out.g.push_back(g);
  }
  return out;
}

inline FitResult fit_count_pgf(const PointPattern& pattern, const ClusterDistribution& mu0,
                               const PgfFitSettings& s = {}, const FitOptions& opt = {}) {
  if (s.z_grid.size() < 2) throw DomainError("count p.g.f. fit needs at least 2 z values");
  const EmpiricalPgf e = empirical_count_pgf(pattern, s);
  return fit_count_pgf_values(e.radius, e.z, e.g, mu0, opt);
}

}  // namespace tas
