#pragma once

// Replication harness: per-replicate simulation and fitting with
// deterministic per-replicate random streams, and the two canned studies
// (the 1-D estimation table and the 2-D G(1) error curve).

#include <atomic>
#include <cmath>
#include <cstdint>
#include <exception>
#include <functional>
#include <mutex>
#include <optional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "tas/analytics.hpp"
#include "tas/core.hpp"
#include "tas/estimation/contact.hpp"
#include "tas/estimation/fit.hpp"
#include "tas/io.hpp"
#include "tas/random.hpp"
#include "tas/sampling.hpp"

namespace tas {

// Runs body(i) for i in [0, n) on up to `jobs` threads. Work is claimed by
// index; callers store results by index, so output order never depends on
// scheduling. The first exception is rethrown after all threads finish.
inline void parallel_for(std::size_t n, std::size_t jobs, const std::function<void(std::size_t)>& body) {
  jobs = std::max<std::size_t>(1, std::min(jobs, n));
  if (jobs == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::exception_ptr first;
  std::mutex m;
  std::vector<std::thread> pool;
  for (std::size_t t = 0; t < jobs; ++t)
    pool.emplace_back([&] {
      for (std::size_t i; (i = next.fetch_add(1)) < n;) {
        try {
          body(i);
        } catch (...) {
          std::lock_guard<std::mutex> g(m);
          if (!first) first = std::current_exception();
        }
      }
    });
  for (auto& th : pool) th.join();
  if (first) std::rethrow_exception(first);
}

struct MeanSe {
  double mean = std::numeric_limits<double>::quiet_NaN();
  double se = std::numeric_limits<double>::quiet_NaN();
  std::size_t n = 0;
};

inline MeanSe mean_se(std::span<const double> v) {
  MeanSe r;
  r.n = v.size();
  if (v.empty()) return r;
  double s = 0.0;
  for (double x : v) s += x;
  r.mean = s / static_cast<double>(v.size());
  if (v.size() < 2) {
    r.se = 0.0;
    return r;
  }
  double ss = 0.0;
  for (double x : v) ss += (x - r.mean) * (x - r.mean);
  r.se = std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
  return r;
}

// ---------------------------------------------------------------------------
// Generic scenario

struct EstimatorSettings {
  std::vector<double> p_values = default_thinning_levels();
  TestPoints test_points = GridCount{400};
  EdgeCorrection edge = EdgeCorrection::border;
  double tail_tolerance = 1e-8;
  PgfFitSettings pgf;
  FitOptions fit;
};

inline const std::vector<std::string>& harness_estimators() {
  static const std::vector<std::string> names{"void", "void-thinned", "pgf"};
  return names;
}

struct ExperimentConfig {
  std::string scenario_id;
  TasParameters params;
  Window window;
  std::size_t replicates = 50;
  std::uint64_t seed = 0;
  std::vector<std::string> estimators{"void-thinned"};
  EstimatorSettings settings;
  std::optional<std::uint64_t> n_max = 10'000'000;

  void validate() const {
    if (scenario_id.empty()) throw DomainError("scenario id must be non-empty");
    if (replicates < 1) throw DomainError("replicate count must be at least 1");
    if (params.dim() != window.dim()) throw DomainError("parameter and window dimensions differ");
    if (estimators.empty()) throw DomainError("at least one estimator is required");
    for (const auto& e : estimators)
      if (std::find(harness_estimators().begin(), harness_estimators().end(), e) == harness_estimators().end())
        throw DomainError("estimator '" + e + "' is not available in the replication harness");
    for (double p : settings.p_values)
      if (!(p > 0.0 && p <= 1.0)) throw DomainError("thinning levels must lie in (0, 1]");
  }
};

struct ReplicateResult {
  std::size_t replicate = 0;
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  std::size_t points = 0;
  SimulationMetadata simulation;
  std::vector<std::optional<FitResult>> fits;  // parallel to the estimators
  std::vector<std::string> errors;             // empty string when the fit succeeded
};

struct EstimatorSummary {
  std::string estimator;
  MeanSe alpha;
  MeanSe lambda;
  std::size_t failed = 0;
  std::size_t nonconverged = 0;
};

struct ReplicationReport {
  std::string scenario_id;
  double alpha = 0.0;
  double lambda = 0.0;
  std::string mu0;
  std::uint64_t seed = 0;
  std::size_t replicates = 0;
  std::vector<EstimatorSummary> rows;
  std::vector<ReplicateResult> per_replicate;

  std::size_t nonconverged() const {
    std::size_t n = 0;
    for (const auto& r : rows) n += r.nonconverged;
    return n;
  }
};

// Fits one estimator to a simulated pattern. `profile` is shared by the
// void-type estimators and must be deep enough for the smallest p.
inline FitResult fit_estimator(const std::string& name, const PointPattern& pattern,
                               const DistanceProfile& profile, const ClusterDistribution& mu0,
                               const EstimatorSettings& s) {
  if (name == "void") {
    VoidFitSettings vs;
    vs.edge = s.edge;
    return fit_void(profile, mu0, vs, s.fit);
  }
  if (name == "void-thinned") {
    VoidFitSettings vs;
    vs.p_values = s.p_values;
    vs.edge = s.edge;
    return fit_void(profile, mu0, vs, s.fit);
  }
  if (name == "pgf") return fit_count_pgf(pattern, mu0, s.pgf, s.fit);
  throw DomainError("unknown estimator '" + name + "'");
}

inline std::size_t profile_depth_for(const std::vector<std::string>& estimators, const EstimatorSettings& s) {
  std::size_t depth = 1;
  if (std::find(estimators.begin(), estimators.end(), "void-thinned") != estimators.end()) {
    const double p_min = *std::min_element(s.p_values.begin(), s.p_values.end());
    depth = std::max(depth, thinning_depth(p_min, s.tail_tolerance));
  }
  return depth;
}

inline TestPoints bind_rng(const TestPoints& tp, RandomSource& rng) {
  if (const auto* r = std::get_if<RandomTestPoints>(&tp)) return RandomTestPoints{r->n, &rng};
  return tp;
}

inline ReplicateResult run_replicate(const ExperimentConfig& cfg, std::size_t replicate) {
  ReplicateResult out;
  out.replicate = replicate;
  out.seed = cfg.seed;
  out.stream = replicate;
  RandomSource rng(cfg.seed, replicate);
  SimulationOptions so;
  so.keep_labels = false;
  so.n_max = cfg.n_max;
  Simulation sim = simulate_tas(cfg.params, cfg.window, rng, so);
  out.simulation = sim.metadata;
  out.points = sim.pattern.size();

  std::optional<DistanceProfile> profile;
  for (const auto& name : cfg.estimators) {
    try {
      if (!profile && name != "pgf")
        profile = distance_profile(sim.pattern, bind_rng(cfg.settings.test_points, rng),
                                   profile_depth_for(cfg.estimators, cfg.settings));
      out.fits.push_back(fit_estimator(name, sim.pattern, profile ? *profile : DistanceProfile{},
                                       cfg.params.mu0, cfg.settings));
      out.errors.emplace_back();
    } catch (const Error& e) {
      out.fits.emplace_back(std::nullopt);
      out.errors.emplace_back(e.what());
    }
  }
  return out;
}

inline ReplicationReport run_experiment(const ExperimentConfig& cfg, std::size_t jobs = 1) {
  cfg.validate();
  ReplicationReport rep;
  rep.scenario_id = cfg.scenario_id;
  rep.alpha = cfg.params.alpha;
  rep.lambda = cfg.params.lambda;
  rep.mu0 = cfg.params.mu0.describe();
  rep.seed = cfg.seed;
  rep.replicates = cfg.replicates;
  rep.per_replicate.resize(cfg.replicates);
  parallel_for(cfg.replicates, jobs, [&](std::size_t i) { rep.per_replicate[i] = run_replicate(cfg, i); });

  for (std::size_t e = 0; e < cfg.estimators.size(); ++e) {
    EstimatorSummary row;
    row.estimator = cfg.estimators[e];
    std::vector<double> a, l;
    for (const auto& r : rep.per_replicate) {
      const auto& f = r.fits[e];
      if (!f) {
        ++row.failed;
        continue;
      }
      if (!f->converged) ++row.nonconverged;
      a.push_back(f->alpha_hat);
      l.push_back(f->lambda_hat);
    }
    row.alpha = mean_se(a);
    row.lambda = mean_se(l);
    rep.rows.push_back(std::move(row));
  }
  return rep;
}

// ---------------------------------------------------------------------------
// Report serialization

inline json to_json(const MeanSe& m) { return {{"mean", m.mean}, {"se", m.se}, {"n", m.n}}; }

inline json to_json(const ReplicateResult& r, const std::vector<std::string>& estimators) {
  json fits = json::object();
  for (std::size_t e = 0; e < estimators.size(); ++e) {
    if (r.fits[e]) fits[estimators[e]] = to_json(*r.fits[e]);
    else fits[estimators[e]] = {{"error", r.errors[e]}};
  }
  return {{"replicate", r.replicate}, {"seed", r.seed},       {"stream", r.stream},
          {"points", r.points},       {"simulation", to_json(r.simulation)},
          {"fits", fits}};
}

inline json to_json(const ReplicationReport& rep) {
  json rows = json::array();
  for (std::size_t e = 0; e < rep.rows.size(); ++e) {
    const auto& row = rep.rows[e];
    std::vector<double> a, l;
    for (const auto& r : rep.per_replicate) {
      a.push_back(r.fits[e] ? r.fits[e]->alpha_hat : std::numeric_limits<double>::quiet_NaN());
      l.push_back(r.fits[e] ? r.fits[e]->lambda_hat : std::numeric_limits<double>::quiet_NaN());
    }
    rows.push_back({{"estimator", row.estimator},
                    {"alpha_hat", to_json(row.alpha)},
                    {"lambda_hat", to_json(row.lambda)},
                    {"failed", row.failed},
                    {"nonconverged", row.nonconverged},
                    {"per_replicate_alpha", a},
                    {"per_replicate_lambda", l}});
  }
  return {{"scenario", rep.scenario_id},
          {"alpha", rep.alpha},
          {"lambda", rep.lambda},
          {"mu0", rep.mu0},
          {"seed", rep.seed},
          {"replicates", rep.replicates},
          {"stream_rule", "stream = replicate index"},
          {"rows", rows}};
}

inline std::string report_csv_header() {
  return "scenario,estimator,alpha,lambda,mean_alpha_hat,se_alpha_hat,mean_lambda_hat,se_lambda_hat,"
         "n,failed,nonconverged\n";
}

inline std::string report_csv_rows(const ReplicationReport& rep) {
  std::ostringstream s;
  for (const auto& row : rep.rows)
    s << rep.scenario_id << ',' << row.estimator << ',' << format_coord(rep.alpha) << ','
      << format_coord(rep.lambda) << ',' << format_coord(row.alpha.mean) << ','
      << format_coord(row.alpha.se) << ',' << format_coord(row.lambda.mean) << ','
      << format_coord(row.lambda.se) << ',' << row.alpha.n << ',' << row.failed << ','
      << row.nonconverged << '\n';
  return s.str();
}

// ---------------------------------------------------------------------------
// Estimation table: 1-D, uniform mu0 with half-width 1, W = [-500, 500].

struct Table1Options {
  std::uint64_t seed = 1;
  std::size_t replicates = 50;
  std::vector<double> alphas{0.6, 0.8};
  std::vector<double> lambdas{0.02, 0.4};
  std::vector<std::string> estimators{"void-thinned", "void", "pgf"};
  EstimatorSettings settings;
  std::optional<std::uint64_t> n_max = 10'000'000;
};

inline std::string scenario_name(double alpha, double lambda) {
  return "alpha" + format_coord(alpha) + "_lambda" + format_coord(lambda);
}

// Scenario i (row-major over alphas x lambdas) uses seed = master + i.
inline std::vector<ExperimentConfig> table1_configs(const Table1Options& o) {
  std::vector<ExperimentConfig> out;
  std::uint64_t i = 0;
  for (double a : o.alphas)
    for (double l : o.lambdas) {
      out.push_back({scenario_name(a, l), TasParameters(a, l, ClusterDistribution::uniform(1.0)),
                     Window::interval(-500.0, 500.0), o.replicates, o.seed + i++, o.estimators,
                     o.settings, o.n_max});
    }
  return out;
}

inline std::vector<ReplicationReport> replicate_table1(const Table1Options& o = {}, std::size_t jobs = 1) {
  std::vector<ReplicationReport> out;
  for (const auto& c : table1_configs(o)) out.push_back(run_experiment(c, jobs));
  return out;
}

// Human-readable table: one block per estimator, rows alpha, columns lambda.
inline std::string format_table1(const std::vector<ReplicationReport>& reps) {
  std::ostringstream s;
  std::vector<std::string> estimators;
  for (const auto& r : reps)
    for (const auto& row : r.rows)
      if (std::find(estimators.begin(), estimators.end(), row.estimator) == estimators.end())
        estimators.push_back(row.estimator);
  char buf[160];
  for (const auto& e : estimators) {
    s << "estimator " << e << "\n";
    s << "  true (alpha, lambda)   mean (alpha_hat, lambda_hat)   se (alpha_hat, lambda_hat)\n";
    for (const auto& r : reps)
      for (const auto& row : r.rows) {
        if (row.estimator != e) continue;
        std::snprintf(buf, sizeof buf, "  (%.2f, %.4g)%*s(%.4f, %.4f)%*s(%.4f, %.4f)\n", r.alpha, r.lambda,
                      6, "", row.alpha.mean, row.lambda.mean, 12, "", row.alpha.se, row.lambda.se);
        s << buf;
      }
  }
  return s.str();
}

// ---------------------------------------------------------------------------
// G(1) error curve: 2-D, Gaussian mu0.

inline std::vector<double> default_fig3_p_grid() {
  std::vector<double> p{0.02, 0.05, 0.1, 0.15, 0.2};
  for (int i = 3; i <= 10; ++i) p.push_back(i / 10.0);
  return p;
}

struct Fig3Options {
  double alpha = 0.7;
  double lambda = 0.1;
  double sigma = 1.0;
  double radius = 1.0;
  double half_side = 15.0;
  std::vector<double> p_grid = default_fig3_p_grid();
  std::size_t replicates = 200;
  std::uint64_t seed = 1;
  TestPoints test_points = GridCount{400};
  EdgeCorrection edge = EdgeCorrection::border;
  double tail_tolerance = 1e-8;
  std::optional<std::uint64_t> n_max = 10'000'000;
};

struct Fig3Point {
  double p = 0.0;
  MeanSe relative_error;
};

struct Fig3Report {
  double g_true = 0.0;
  std::vector<Fig3Point> points;
  std::vector<std::vector<double>> per_replicate;  // [replicate][p index]
  std::uint64_t seed = 0;
};

// Each thinned estimate targets G_p(r) = G(r)^{p^alpha}; raising it to
// 1 / p^alpha (true alpha) turns it into an estimate of G(r).
inline double g_from_thinned(double g_p, double p, double alpha) {
  return std::pow(g_p, 1.0 / pow_alpha(p, alpha));
}

inline Fig3Report replicate_fig3(const Fig3Options& o = {}, std::size_t jobs = 1) {
  if (o.replicates < 1) throw DomainError("replicate count must be at least 1");
  if (o.p_grid.empty()) throw DomainError("p grid must be non-empty");
  for (double p : o.p_grid)
    if (!(p > 0.0 && p <= 1.0)) throw DomainError("p grid values must lie in (0, 1]");
  const TasParameters params(o.alpha, o.lambda, ClusterDistribution::gaussian(2, o.sigma));
  const Window w = Window::cube(-o.half_side, o.half_side, 2);
  const double radius[] = {o.radius};
  Fig3Report rep;
  rep.seed = o.seed;
  rep.g_true = analytic_contact(params, radius).values()[0];
  const double p_min = *std::min_element(o.p_grid.begin(), o.p_grid.end());
  const std::size_t depth = thinning_depth(p_min, o.tail_tolerance);

  rep.per_replicate.assign(o.replicates, std::vector<double>(o.p_grid.size()));
  parallel_for(o.replicates, jobs, [&](std::size_t i) {
    RandomSource rng(o.seed, i);
    SimulationOptions so;
    so.keep_labels = false;
    so.n_max = o.n_max;
    const Simulation sim = simulate_tas(params, w, rng, so);
    if (sim.pattern.empty()) {
      for (std::size_t j = 0; j < o.p_grid.size(); ++j)
        rep.per_replicate[i][j] = std::fabs(1.0 - rep.g_true) / rep.g_true;
      return;
    }
    const DistanceProfile prof = distance_profile(sim.pattern, bind_rng(o.test_points, rng), depth);
    for (std::size_t j = 0; j < o.p_grid.size(); ++j) {
      const double p = o.p_grid[j];
      const double g_p = p == 1.0 ? empirical_contact(prof, radius, o.edge).values()[0]
                                  : thinned_contact_estimate(prof, p, radius, o.edge).values()[0];
      rep.per_replicate[i][j] = std::fabs(g_from_thinned(g_p, p, o.alpha) - rep.g_true) / rep.g_true;
    }
  });
  for (std::size_t j = 0; j < o.p_grid.size(); ++j) {
    std::vector<double> col;
    for (const auto& r : rep.per_replicate) col.push_back(r[j]);
    rep.points.push_back({o.p_grid[j], mean_se(col)});
  }
  return rep;
}

struct Fig3Trend {
  bool mean_monotone = false;      // mean error nonincreasing in p over p <= p_max
  double replicate_fraction = 0.0;  // replicates with error(p_min) > error(p_max)
  bool pass = false;
};

inline Fig3Trend fig3_trend(const Fig3Report& rep, double p_max = 0.2) {
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < rep.points.size(); ++j)
    if (rep.points[j].p <= p_max) idx.push_back(j);
  std::sort(idx.begin(), idx.end(), [&](auto a, auto b) { return rep.points[a].p < rep.points[b].p; });
  Fig3Trend t;
  if (idx.size() < 2) return t;
  t.mean_monotone = true;
  for (std::size_t k = 1; k < idx.size(); ++k)
    t.mean_monotone = t.mean_monotone &&
                      rep.points[idx[k]].relative_error.mean <= rep.points[idx[k - 1]].relative_error.mean;
  std::size_t agree = 0;
  for (const auto& r : rep.per_replicate) agree += r[idx.front()] > r[idx.back()] ? 1 : 0;
  t.replicate_fraction = static_cast<double>(agree) / static_cast<double>(rep.per_replicate.size());
  t.pass = t.mean_monotone && t.replicate_fraction > 0.5;
  return t;
}

inline json to_json(const Fig3Report& rep) {
  json pts = json::array();
  for (const auto& pt : rep.points)
    pts.push_back({{"p", pt.p}, {"relative_error", to_json(pt.relative_error)}});
  return {{"g_true", rep.g_true},
          {"seed", rep.seed},
          {"replicates", rep.per_replicate.size()},
          {"stream_rule", "stream = replicate index"},
          {"points", pts},
          {"per_replicate", rep.per_replicate}};
}

inline std::string fig3_csv(const Fig3Report& rep) {
  std::ostringstream s;
  s << "p,relative_error,se\n";
  for (const auto& pt : rep.points)
    s << format_coord(pt.p) << ',' << format_coord(pt.relative_error.mean) << ','
      << format_coord(pt.relative_error.se) << '\n';
  return s.str();
}

}  // namespace tas
