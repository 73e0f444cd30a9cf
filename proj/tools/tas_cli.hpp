#pragma once

// Command-line front end. run_cli parses, validates every flag before any
// file is touched, runs the command and maps failures to exit codes:
//   0 success, 2 usage or configuration error, 3 I/O error,
//   4 numerical non-convergence (results still written, flagged).

#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "tas/tas.hpp"

namespace tas::cli {

enum ExitCode : int { ok = 0, config_error = 2, io_error = 3, nonconvergence = 4 };

// Configuration error raised while resolving flags.
class ConfigError : public Error {
 public:
  using Error::Error;
};

// ---------------------------------------------------------------------------
// Flag value parsers

inline double parse_number(const std::string& s, const std::string& what) {
  const auto v = tas::detail::parse_double(tas::detail::trim(s));
  if (!v) throw ConfigError("invalid " + what + " '" + s + "'");
  return *v;
}

// lo:hi[,lo:hi...]
inline Window parse_window(const std::string& s) {
  std::vector<double> lo, hi;
  for (const auto& part : tas::detail::split(s, ',')) {
    const auto ends = tas::detail::split(part, ':');
    if (ends.size() != 2) throw ConfigError("window must be lo:hi[,lo:hi...], got '" + s + "'");
    lo.push_back(parse_number(ends[0], "window bound"));
    hi.push_back(parse_number(ends[1], "window bound"));
  }
  try {
    return Window(lo, hi);
  } catch (const ValidationError& e) {
    throw ConfigError(e.what());
  }
}

// uniform:h | gauss:d:sigma | cloud:file
inline ClusterDistribution parse_mu0(const std::string& s) {
  const auto parts = tas::detail::split(s, ':');
  try {
    if (parts[0] == "uniform" && parts.size() == 2)
      return ClusterDistribution::uniform(parse_number(parts[1], "uniform half-width"));
    if (parts[0] == "gauss" && parts.size() == 3) {
      const double d = parse_number(parts[1], "gaussian dimension");
      if (!(d >= 1.0 && d == std::floor(d) && d <= 3.0)) throw ConfigError("gaussian dimension must be 1, 2 or 3");
      return ClusterDistribution::gaussian(static_cast<std::size_t>(d), parse_number(parts[2], "gaussian sigma"));
    }
    if (parts[0] == "cloud" && parts.size() >= 2) {
      const std::string path = s.substr(6);
      std::istringstream in(read_text_file(path));
      return read_cloud(in);
    }
  } catch (const ValidationError& e) {
    throw ConfigError(std::string("mu0: ") + e.what());
  }
  throw ConfigError("mu0 must be uniform:h, gauss:d:sigma or cloud:file, got '" + s + "'");
}

// lo:hi:step (inclusive, values rounded to 12 significant digits), a comma
// list, or a single value. Every value must lie in (0, 1].
inline std::vector<double> parse_levels(const std::string& s) {
  std::vector<double> out;
  const auto parts = tas::detail::split(s, ':');
  if (parts.size() == 3) {
    const double lo = parse_number(parts[0], "range start");
    const double hi = parse_number(parts[1], "range end");
    const double step = parse_number(parts[2], "range step");
    if (!(step > 0.0) || !(hi >= lo)) throw ConfigError("range must satisfy lo <= hi and step > 0");
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    if (n > 100000) throw ConfigError("range has too many values");
    for (std::size_t i = 0; i < n; ++i)
      out.push_back(std::stod(format_coord(lo + static_cast<double>(i) * step)));
  } else if (parts.size() == 1) {
    for (const auto& v : tas::detail::split(s, ',')) out.push_back(parse_number(v, "level"));
  } else {
    throw ConfigError("levels must be lo:hi:step or a comma list, got '" + s + "'");
  }
  for (double p : out)
    if (!(p > 0.0 && p <= 1.0)) throw ConfigError("thinning levels must lie in (0, 1], got " + format_coord(p));
  return out;
}

// grid:N | random:N. Random points draw from `rng`.
inline TestPoints parse_test_points(const std::string& s, RandomSource* rng) {
  const auto parts = tas::detail::split(s, ':');
  if (parts.size() == 2) {
    const double n = parse_number(parts[1], "test point count");
    if (n >= 1.0 && n == std::floor(n) && n <= 1e8) {
      if (parts[0] == "grid") return GridCount{static_cast<std::size_t>(n)};
      if (parts[0] == "random") return RandomTestPoints{static_cast<std::size_t>(n), rng};
    }
  }
  throw ConfigError("test points must be grid:N or random:N with N >= 1, got '" + s + "'");
}

// ---------------------------------------------------------------------------

struct Common {
  std::optional<double> alpha;
  std::optional<double> lambda;
  std::string mu0;
  std::string params;
  std::string window;
  std::uint64_t seed = 1;
  std::uint64_t stream = 0;
  std::string out;
};

inline TasParameters resolve_params(const Common& c) {
  if (!c.params.empty()) {
    TasParameters p = params_from_json(read_json_file(c.params));
    if (c.alpha) p.alpha = *c.alpha;
    if (c.lambda) p.lambda = *c.lambda;
    if (!c.mu0.empty()) p.mu0 = parse_mu0(c.mu0);
    return TasParameters(p.alpha, p.lambda, p.mu0);
  }
  if (!c.alpha || !c.lambda || c.mu0.empty())
    throw ConfigError("--alpha, --lambda and --mu0 (or --params) are required");
  return TasParameters(*c.alpha, *c.lambda, parse_mu0(c.mu0));
}

inline void ensure_parent(const std::filesystem::path& p) {
  std::error_code ec;
  if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path(), ec);
  if (ec) throw IoError("cannot create directory '" + p.parent_path().string() + "'");
}

inline void ensure_dir(const std::filesystem::path& p) {
  std::error_code ec;
  std::filesystem::create_directories(p, ec);
  if (ec) throw IoError("cannot create directory '" + p.string() + "'");
}

inline Window resolve_window(const std::string& flag, const std::filesystem::path& pattern_path) {
  if (!flag.empty()) return parse_window(flag);
  const auto side = window_sidecar(pattern_path);
  if (!std::filesystem::exists(side))
    throw ConfigError("no --window given and no sidecar '" + side.string() + "'");
  return window_from_json(read_json_file(side));
}

// ---------------------------------------------------------------------------
// Commands. Each `prepare` step validates flags and returns a runner.

using Runner = std::function<int(std::ostream&)>;

struct SimulateFlags {
  Common c;
  std::optional<double> buffer;
  std::uint64_t n_max = 10'000'000;
  bool no_labels = false;
};

inline Runner prepare_simulate(const SimulateFlags& f) {
  const TasParameters params = resolve_params(f.c);
  if (f.c.window.empty()) throw ConfigError("--window is required");
  const Window w = parse_window(f.c.window);
  if (params.dim() != w.dim()) throw ConfigError("mu0 dimension does not match the window");
  if (f.c.out.empty()) throw ConfigError("--out is required");
  if (f.buffer && !(*f.buffer >= 0.0)) throw ConfigError("--buffer must be >= 0");
  if (w.dim() > 3) throw ConfigError("pattern CSV supports dimensions 1 to 3");
  return [=](std::ostream& out) {
    RandomSource rng(f.c.seed, f.c.stream);
    SimulationOptions so;
    so.buffer = f.buffer;
    so.keep_labels = !f.no_labels;
    so.n_max = f.n_max;
    const Simulation sim = simulate_tas(params, w, rng, so);
    const std::filesystem::path path = f.c.out;
    ensure_parent(path);
    json meta = to_json(sim.metadata);
    meta["parameters"] = to_json(params);
    meta["window"] = to_json(w);
    meta["points"] = sim.pattern.size();
    write_text_file(path, write_pattern(sim.pattern));
    write_text_file(window_sidecar(path), dump_json(to_json(w)));
    write_text_file(metadata_sidecar(path), dump_json(meta));
    out << "wrote " << sim.pattern.size() << " points from " << sim.metadata.centres << " centres to "
        << path.string() << "\n";
    for (const auto& wmsg : sim.metadata.warnings) out << "warning: " << wmsg << "\n";
    return ExitCode::ok;
  };
}

struct FitFlags {
  Common c;
  std::string in;
  std::string method = "void";
  std::string p;
  std::string test_points = "grid:400";
  double radius = 0.0;
  std::size_t k_min = 1;
  std::size_t k_max = 5;
  bool noise = false;
};

inline Runner prepare_fit(const FitFlags& f) {
  static const std::vector<std::string> methods{"void", "void-thinned", "pgf", "cluster-sizes", "em-mu0"};
  if (std::find(methods.begin(), methods.end(), f.method) == methods.end())
    throw ConfigError("--method must be one of void, void-thinned, pgf, cluster-sizes, em-mu0");
  if (f.in.empty()) throw ConfigError("--in is required");
  if (f.c.out.empty()) throw ConfigError("--out is required");
  const bool needs_mu0 = f.method == "void" || f.method == "void-thinned" || f.method == "pgf";
  std::optional<ClusterDistribution> mu0;
  if (needs_mu0) {
    if (f.c.mu0.empty()) throw ConfigError("--mu0 is required for method " + f.method);
    mu0 = parse_mu0(f.c.mu0);
  }
  std::vector<double> levels;
  if (f.method == "void-thinned") levels = f.p.empty() ? default_thinning_levels() : parse_levels(f.p);
  else if (!f.p.empty()) throw ConfigError("--p applies to method void-thinned only");
  parse_test_points(f.test_points, nullptr);
  if (!(f.radius >= 0.0)) throw ConfigError("--radius must be >= 0");
  if (f.k_min < 1 || f.k_max < f.k_min) throw ConfigError("--k-min/--k-max must satisfy 1 <= k-min <= k-max");

  const Window w = resolve_window(f.c.window, f.in);
  const PointPattern pattern = read_pattern(read_text_file(f.in), w);
  if (mu0 && mu0->dim() != w.dim()) throw ConfigError("mu0 dimension does not match the window");
  if (f.method == "cluster-sizes" && !pattern.has_labels())
    throw ConfigError("method cluster-sizes needs a cluster column in the pattern");

  return [=](std::ostream& out) {
    RandomSource rng(f.c.seed, f.c.stream);
    const TestPoints tp = parse_test_points(f.test_points, &rng);
    json result;
    bool converged = true;
    if (f.method == "cluster-sizes") {
      std::vector<std::uint64_t> sizes;
      for (std::size_t s : pattern.cluster_sizes()) sizes.push_back(s);
      const ClusterSizeEstimate e = estimate_alpha_from_cluster_sizes(sizes);
      result = to_json(e);
      result["method"] = "cluster-sizes";
      result["clusters"] = sizes.size();
      out << "alpha_hat=" << format_coord(e.alpha) << " (" << sizes.size() << " clusters)\n";
    } else if (f.method == "em-mu0") {
      EmOptions eo;
      eo.k_min = f.k_min;
      eo.k_max = f.k_max;
      eo.noise = f.noise;
      const MixtureModel m = em_estimate_mu0(pattern, eo, rng);
      result = to_json(m);
      result["method"] = "em-mu0";
      result["mu0"] = to_json(mixture_to_mu0(m));
      converged = m.converged;
      out << "k=" << m.components.size() << " log_likelihood=" << format_coord(m.log_likelihood)
          << " bic=" << format_coord(m.bic) << "\n";
    } else {
      FitResult r;
      if (f.method == "pgf") {
        PgfFitSettings ps;
        ps.radius = f.radius;
        ps.test_points = tp;
        r = fit_count_pgf(pattern, *mu0, ps);
      } else {
        VoidFitSettings vs;
        vs.p_values = f.method == "void" ? std::vector<double>{1.0} : levels;
        const double p_min = *std::min_element(vs.p_values.begin(), vs.p_values.end());
        const DistanceProfile prof = distance_profile(pattern, tp, thinning_depth(p_min));
        r = fit_void(prof, *mu0, vs);
        r.method = f.method;
        result["p_values"] = vs.p_values;
      }
      converged = r.converged;
      const json body = to_json(r);
      for (auto it = body.begin(); it != body.end(); ++it) result[it.key()] = it.value();
      out << "alpha_hat=" << format_coord(r.alpha_hat) << " lambda_hat=" << format_coord(r.lambda_hat)
          << (r.converged ? "" : " (not converged)") << "\n";
    }
    const std::filesystem::path path = f.c.out;
    ensure_parent(path);
    write_text_file(path, dump_json(result));
    return converged ? ExitCode::ok : ExitCode::nonconvergence;
  };
}

struct GcurveFlags {
  Common c;
  std::string in;
  std::string radii;  // lo:hi:step or list; default from the profile
  std::optional<double> p;
  std::string test_points = "grid:400";
  bool border = true;
};

inline std::vector<double> parse_radii(const std::string& s) {
  std::vector<double> out;
  const auto parts = tas::detail::split(s, ':');
  if (parts.size() == 3) {
    const double lo = parse_number(parts[0], "radius");
    const double hi = parse_number(parts[1], "radius");
    const double step = parse_number(parts[2], "radius step");
    if (!(step > 0.0) || !(hi >= lo)) throw ConfigError("radii range must satisfy lo <= hi and step > 0");
    const auto n = static_cast<std::size_t>(std::floor((hi - lo) / step + 1e-9)) + 1;
    if (n > 100000) throw ConfigError("radii range has too many values");
    for (std::size_t i = 0; i < n; ++i) out.push_back(std::stod(format_coord(lo + static_cast<double>(i) * step)));
  } else {
    for (const auto& v : tas::detail::split(s, ',')) out.push_back(parse_number(v, "radius"));
  }
  try {
    return validated_radii(out);
  } catch (const DomainError& e) {
    throw ConfigError(e.what());
  }
}

// Writes <out>/analytic.csv, plus <out>/empirical.csv when --in is given.
inline Runner prepare_gcurve(const GcurveFlags& f) {
  if (f.c.out.empty()) throw ConfigError("--out is required");
  const TasParameters params = resolve_params(f.c);
  const double p = f.p.value_or(1.0);
  if (!(p > 0.0 && p <= 1.0)) throw ConfigError("--p must lie in (0, 1]");
  parse_test_points(f.test_points, nullptr);
  std::vector<double> radii;
  if (!f.radii.empty()) radii = parse_radii(f.radii);
  std::optional<PointPattern> pattern;
  if (!f.in.empty()) {
    const Window w = resolve_window(f.c.window, f.in);
    if (params.dim() != w.dim()) throw ConfigError("mu0 dimension does not match the window");
    pattern = read_pattern(read_text_file(f.in), w);
  }
  if (radii.empty() && !pattern) throw ConfigError("--radii is required without --in");

  return [=](std::ostream& out) {
    RandomSource rng(f.c.seed, f.c.stream);
    const std::filesystem::path dir = f.c.out;
    std::vector<double> r = radii;
    std::optional<ContactCurve> empirical;
    if (pattern) {
      const EdgeCorrection ec = f.border ? EdgeCorrection::border : EdgeCorrection::none;
      const DistanceProfile prof =
          distance_profile(*pattern, parse_test_points(f.test_points, &rng), thinning_depth(p));
      if (r.empty()) {
        VoidFitSettings vs;
        vs.edge = ec;
        r = void_fit_radii(prof, vs);
      }
      empirical = p == 1.0 ? empirical_contact(prof, r, ec) : thinned_contact_estimate(prof, p, r, ec);
    }
    const ContactCurve analytic = thinned_contact_analytic(params, p, r);
    ensure_dir(dir);
    write_text_file(dir / "analytic.csv", write_curve(analytic));
    if (empirical) write_text_file(dir / "empirical.csv", write_curve(*empirical));
    out << "wrote " << r.size() << " radii to " << dir.string() << "\n";
    return ExitCode::ok;
  };
}

struct ReplicateFlags {
  std::string study;
  std::uint64_t seed = 1;
  std::size_t reps = 0;  // 0: study default
  std::size_t jobs = 1;
  std::string method;
  std::string p;
  std::string test_points = "grid:400";
  std::string out;
  std::uint64_t n_max = 10'000'000;
};

inline std::vector<std::string> parse_methods(const std::string& s) {
  std::vector<std::string> out;
  for (const auto& m : tas::detail::split(s, ',')) {
    const std::string t = tas::detail::trim(m);
    if (std::find(harness_estimators().begin(), harness_estimators().end(), t) == harness_estimators().end())
      throw ConfigError("replication --method accepts void, void-thinned, pgf (comma separated), got '" + t + "'");
    if (std::find(out.begin(), out.end(), t) != out.end()) throw ConfigError("duplicate method '" + t + "'");
    out.push_back(t);
  }
  return out;
}

inline Runner prepare_replicate(const ReplicateFlags& f) {
  if (f.study != "table1" && f.study != "fig3") throw ConfigError("replicate expects table1 or fig3");
  if (f.out.empty()) throw ConfigError("--out is required");
  if (f.jobs < 1) throw ConfigError("--jobs must be >= 1");
  const TestPoints tp = parse_test_points(f.test_points, nullptr);
  const std::filesystem::path dir = f.out;

  if (f.study == "table1") {
    Table1Options o;
    o.seed = f.seed;
    if (f.reps) o.replicates = f.reps;
    if (!f.method.empty()) o.estimators = parse_methods(f.method);
    if (!f.p.empty()) o.settings.p_values = parse_levels(f.p);
    o.settings.test_points = tp;
    o.settings.pgf.test_points = tp;
    o.n_max = f.n_max;
    return [=](std::ostream& out) {
      const auto reps = replicate_table1(o, f.jobs);
      std::string csv = report_csv_header();
      std::size_t nonconv = 0;
      ensure_dir(dir);
      for (const auto& rep : reps) {
        const auto sdir = dir / rep.scenario_id;
        ensure_dir(sdir);
        write_text_file(sdir / "report.json", dump_json(to_json(rep)));
        write_text_file(sdir / "report.csv", report_csv_header() + report_csv_rows(rep));
        for (const auto& r : rep.per_replicate) {
          char name[32];
          std::snprintf(name, sizeof name, "fit_%03zu.json", r.replicate);
          write_text_file(sdir / name, dump_json(to_json(r, o.estimators)));
        }
        csv += report_csv_rows(rep);
        nonconv += rep.nonconverged();
      }
      const std::string table = format_table1(reps);
      write_text_file(dir / "table1.csv", csv);
      write_text_file(dir / "table1.txt", table);
      out << table;
      if (nonconv) out << nonconv << " fit(s) did not converge; flagged in the reports\n";
      return nonconv ? ExitCode::nonconvergence : ExitCode::ok;
    };
  }

  Fig3Options o;
  o.seed = f.seed;
  if (f.reps) o.replicates = f.reps;
  if (!f.p.empty()) o.p_grid = parse_levels(f.p);
  if (!f.method.empty()) throw ConfigError("--method does not apply to fig3");
  o.test_points = tp;
  o.n_max = f.n_max;
  return [=](std::ostream& out) {
    const Fig3Report rep = replicate_fig3(o, f.jobs);
    const Fig3Trend trend = fig3_trend(rep);
    json j = to_json(rep);
    j["trend"] = {{"mean_monotone_below_0.2", trend.mean_monotone},
                  {"replicate_fraction", trend.replicate_fraction}};
    const auto sdir = dir / "fig3";
    ensure_dir(sdir);
    write_text_file(sdir / "report.json", dump_json(j));
    write_text_file(sdir / "report.csv", fig3_csv(rep));
    out << fig3_csv(rep);
    return ExitCode::ok;
  };
}

// ---------------------------------------------------------------------------

inline void add_common(CLI::App* app, Common& c, bool params, bool window, bool rng) {
  if (params) {
    app->add_option("--alpha", c.alpha, "stability exponent in (0, 1]");
    app->add_option("--lambda", c.lambda, "cluster centre intensity > 0");
    app->add_option("--mu0", c.mu0, "cluster law: uniform:h | gauss:d:sigma | cloud:file");
    app->add_option("--params", c.params, "parameter JSON file (flags override its fields)");
  }
  if (window) app->add_option("--window", c.window, "observation window lo:hi[,lo:hi...]");
  if (rng) {
    app->add_option("--seed", c.seed, "random seed")->capture_default_str();
    app->add_option("--stream", c.stream, "random stream id")->capture_default_str();
  }
  app->add_option("--out", c.out, "output path");
}

inline int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Simulation and inference for thinning-stable point processes", "tas"};
  app.require_subcommand(1);

  SimulateFlags sf;
  auto* sim = app.add_subcommand("simulate", "simulate a pattern; writes CSV, window and metadata JSON");
  add_common(sim, sf.c, true, true, true);
  sim->add_option("--buffer", sf.buffer, "centre buffer around the window (default: recommended)");
  sim->add_option("--n-max", sf.n_max, "cap on a single cluster size")->capture_default_str();
  sim->add_flag("--no-labels", sf.no_labels, "omit the cluster column");

  FitFlags ff;
  auto* fit = app.add_subcommand("fit", "fit a pattern; writes result JSON");
  add_common(fit, ff.c, false, true, true);
  fit->add_option("--mu0", ff.c.mu0, "cluster law: uniform:h | gauss:d:sigma | cloud:file");
  fit->add_option("--in", ff.in, "pattern CSV (window from --window or <stem>.window.json)");
  fit->add_option("--method", ff.method, "void | void-thinned | pgf | cluster-sizes | em-mu0")
      ->capture_default_str();
  fit->add_option("--p", ff.p, "thinning levels lo:hi:step or list (void-thinned; default 0.3:1.0:0.1)");
  fit->add_option("--test-points", ff.test_points, "grid:N | random:N")->capture_default_str();
  fit->add_option("--radius", ff.radius, "pgf ball radius (0: median nearest distance)")->capture_default_str();
  fit->add_option("--k-min", ff.k_min, "em-mu0 smallest component count")->capture_default_str();
  fit->add_option("--k-max", ff.k_max, "em-mu0 largest component count")->capture_default_str();
  fit->add_flag("--noise", ff.noise, "em-mu0 uniform noise component");

  GcurveFlags gf;
  auto* gc = app.add_subcommand("gcurve", "empirical and analytic contact curves; writes CSV into --out directory");
  add_common(gc, gf.c, true, true, true);
  gc->add_option("--in", gf.in, "pattern CSV for the empirical curve");
  gc->add_option("--radii", gf.radii, "radii lo:hi:step or list (default: nearest distances)");
  gc->add_option("--p", gf.p, "retention probability of the thinned curve (default 1)");
  gc->add_option("--test-points", gf.test_points, "grid:N | random:N")->capture_default_str();
  bool no_border = false;
  gc->add_flag("--no-border", no_border, "disable border edge correction");

  ReplicateFlags rf;
  auto* rep = app.add_subcommand("replicate", "replication studies: table1 | fig3");
  rep->add_option("study", rf.study, "table1 | fig3")->required();
  rep->add_option("--seed", rf.seed, "master seed; scenario i uses seed + i, replicate j stream j")
      ->capture_default_str();
  rep->add_option("--reps", rf.reps, "replicates per scenario (default: 50 for table1, 200 for fig3)");
  rep->add_option("--jobs", rf.jobs, "concurrent replicates")->capture_default_str();
  rep->add_option("--method", rf.method, "table1 estimators, comma list of void, void-thinned, pgf");
  rep->add_option("--p", rf.p, "table1 thinning levels or fig3 p grid, lo:hi:step or list");
  rep->add_option("--test-points", rf.test_points, "grid:N | random:N")->capture_default_str();
  rep->add_option("--n-max", rf.n_max, "cap on a single cluster size")->capture_default_str();
  rep->add_option("--out", rf.out, "output directory");

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? ExitCode::ok : ExitCode::config_error;
  }

  gf.border = !no_border;
  Runner runner;
  try {
    if (*sim) runner = prepare_simulate(sf);
    else if (*fit) runner = prepare_fit(ff);
    else if (*gc) runner = prepare_gcurve(gf);
    else runner = prepare_replicate(rf);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return ExitCode::io_error;
  } catch (const ParseError& e) {
    err << "error: " << e.what() << "\n";
    return ExitCode::io_error;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return ExitCode::config_error;
  }

  try {
    return runner(out);
  } catch (const IoError& e) {
    err << "error: " << e.what() << "\n";
    return ExitCode::io_error;
  } catch (const NumericalError& e) {
    err << "error: " << e.what() << "\n";
    return ExitCode::nonconvergence;
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    return ExitCode::config_error;
  }
}

inline int run_cli(int argc, char** argv, std::ostream& out, std::ostream& err) {
  return run_cli(std::vector<std::string>(argv + 1, argv + argc), out, err);
}

}  // namespace tas::cli
