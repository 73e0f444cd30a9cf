#pragma once

// Random generation: Sibuya variates and clusters, homogeneous Poisson
// centres, stationary TaS patterns and independent thinning.

#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include <boost/math/special_functions/gamma.hpp>

#include "tas/core.hpp"
#include "tas/random.hpp"

namespace tas {

struct SamplingStats {
  std::uint64_t draws = 0;
  std::uint64_t truncations = 0;  // draws capped at n_max
};

namespace detail {

// Trials run one by one before switching to conditional inversion.
inline constexpr std::uint64_t kSibuyaSequentialTrials = 32;
// Uncapped draws saturate here; counted as truncations.
inline constexpr std::uint64_t kSibuyaSaturation = std::uint64_t{1} << 62;

// log P(nu > n) - log P(nu > m) for alpha < 1, n >= m >= 1, using
// P(nu > n) = Gamma(n + 1 - alpha) / (Gamma(1 - alpha) Gamma(n + 1)).
inline double sibuya_log_survival_ratio(double alpha, std::uint64_t m, std::uint64_t n) {
  using boost::math::tgamma_delta_ratio;
  const double zm = static_cast<double>(m) + 1.0 - alpha;
  const double zn = static_cast<double>(n) + 1.0 - alpha;
  return std::log(tgamma_delta_ratio(zn, alpha)) - std::log(tgamma_delta_ratio(zm, alpha));
}

}  // namespace detail

// Definitional sampler: trial k succeeds with probability alpha / k and the
// index of the first success is returned. Cost is proportional to the result.
inline std::uint64_t sibuya_variate_sequential(double alpha, RandomSource& rng,
                                               std::optional<std::uint64_t> n_max = std::nullopt,
                                               SamplingStats* stats = nullptr) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("sibuya alpha must lie in (0, 1]");
  if (n_max && *n_max == 0) throw DomainError("n_max must be positive");
  if (stats) ++stats->draws;
  const std::uint64_t cap = n_max.value_or(detail::kSibuyaSaturation);
  for (std::uint64_t k = 1;; ++k) {
    if (rng.uniform() < alpha / static_cast<double>(k)) return k;
    if (k == cap) {
      if (stats) ++stats->truncations;
      return cap;
    }
  }
}

// Exact Sib(alpha) draw. The first trials are run sequentially as in the
// definition; a draw that survives them is completed by inverting the
// conditional survival function P(nu > n | nu > m) with an exponential then
// binary search, so the cost is logarithmic in the outcome.
inline std::uint64_t sibuya_variate(double alpha, RandomSource& rng,
                                    std::optional<std::uint64_t> n_max = std::nullopt,
                                    SamplingStats* stats = nullptr) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("sibuya alpha must lie in (0, 1]");
  if (n_max && *n_max == 0) throw DomainError("n_max must be positive");
  if (stats) ++stats->draws;
  const std::uint64_t cap = n_max.value_or(detail::kSibuyaSaturation);
  const auto truncated = [&] {
    if (stats) ++stats->truncations;
    return cap;
  };

  const std::uint64_t m = detail::kSibuyaSequentialTrials;
  for (std::uint64_t k = 1; k <= m; ++k) {
    if (rng.uniform() < alpha / static_cast<double>(k)) return k;
    if (k == cap) return truncated();
  }
  // alpha == 1 always succeeds at k = 1, so alpha < 1 here.
  const double log_u = std::log(rng.uniform_open());
  const auto survives = [&](std::uint64_t n) {
    return detail::sibuya_log_survival_ratio(alpha, m, n) >= log_u;
  };

  // Invariant: survives(lo), !survives(hi).
  std::uint64_t lo = m;
  std::uint64_t hi = 2 * m;
  for (;;) {
    if (hi >= cap) {
      if (survives(cap)) return truncated();
      hi = cap;
      break;
    }
    if (!survives(hi)) break;
    lo = hi;
    hi *= 2;
  }
  while (hi - lo > 1) {
    const std::uint64_t mid = lo + (hi - lo) / 2;
    if (survives(mid)) lo = mid;
    else hi = mid;
  }
  return hi;
}

namespace detail {

// Calls emit(point) for `count` independent draws of center + mu0.
template <typename Emit>
void scatter_mu0(const ClusterDistribution& mu0, std::span<const double> center,
                 std::uint64_t count, RandomSource& rng, Emit&& emit) {
  const std::size_t d = center.size();
  std::vector<double> x(d);
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        for (std::uint64_t j = 0; j < count; ++j) {
          if constexpr (std::is_same_v<T, UniformInterval>) {
            x[0] = center[0] + m.halfwidth * (2.0 * rng.uniform() - 1.0);
          } else if constexpr (std::is_same_v<T, IsotropicGaussian>) {
            for (std::size_t k = 0; k < d; ++k) x[k] = center[k] + m.sigma * rng.normal();
          } else {
            const auto y = m.point(rng.below(m.size()));
            for (std::size_t k = 0; k < d; ++k) x[k] = center[k] + y[k];
          }
          emit(std::span<const double>(x));
        }
      },
      mu0.variant());
}

}  // namespace detail

// Sibuya cluster shifted to `center`; coordinates row-major.
inline std::vector<double> sample_sibuya_cluster(double alpha, const ClusterDistribution& mu0,
                                                 std::span<const double> center,
                                                 RandomSource& rng,
                                                 std::optional<std::uint64_t> n_max = std::nullopt,
                                                 SamplingStats* stats = nullptr) {
  if (center.size() != mu0.dim())
    throw DomainError("cluster centre dimension does not match mu0");
  const std::uint64_t n = sibuya_variate(alpha, rng, n_max, stats);
  std::vector<double> out;
  out.reserve(static_cast<std::size_t>(n) * center.size());
  detail::scatter_mu0(mu0, center, n, rng, [&](std::span<const double> x) {
    out.insert(out.end(), x.begin(), x.end());
  });
  return out;
}

// Homogeneous Poisson process of intensity lambda on a box; row-major.
inline std::vector<double> sample_poisson_centres(double lambda, const Window& region,
                                                  RandomSource& rng) {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw DomainError("lambda must be positive");
  const std::uint64_t n = rng.poisson(lambda * region.volume());
  const std::size_t d = region.dim();
  std::vector<double> out(static_cast<std::size_t>(n) * d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < d; ++k)
      out[i * d + k] = rng.uniform(region.lower()[k], region.upper()[k]);
  return out;
}

// ---------------------------------------------------------------------------

struct SimulationOptions {
  std::optional<double> buffer;  // default: mu0.recommended_buffer()
  bool keep_labels = true;
  std::optional<std::uint64_t> n_max;
};

struct SimulationMetadata {
  std::uint64_t seed = 0;
  std::uint64_t stream = 0;
  double buffer = 0.0;
  double recommended_buffer = 0.0;
  std::uint64_t centres = 0;
  std::uint64_t truncations = 0;
  std::vector<std::string> warnings;
};

struct Simulation {
  PointPattern pattern;
  SimulationMetadata metadata;
};

// Centres on the window dilated by the buffer, Sibuya clusters around each,
// then clipping to the window. Labels are the centre indices.
inline Simulation simulate_tas(const TasParameters& params, const Window& window,
                               RandomSource& rng, const SimulationOptions& opts = {}) {
  if (params.dim() != window.dim())
    throw DomainError("parameter dimension does not match window dimension");
  SimulationMetadata meta;
  meta.seed = rng.seed();
  meta.stream = rng.stream();
  meta.recommended_buffer = params.mu0.recommended_buffer();
  meta.buffer = opts.buffer.value_or(meta.recommended_buffer);
  if (!(meta.buffer >= 0.0)) throw DomainError("buffer must be non-negative");
  if (meta.buffer < meta.recommended_buffer)
    meta.warnings.push_back("buffer " + format_coord(meta.buffer) +
                            " is below the recommended minimum " +
                            format_coord(meta.recommended_buffer) +
                            "; clusters centred outside the buffered window are missed");

  const Window extended = window.dilated(meta.buffer);
  const std::vector<double> centres = sample_poisson_centres(params.lambda, extended, rng);
  const std::size_t d = window.dim();
  meta.centres = centres.size() / d;

  SamplingStats stats;
  std::vector<double> coords;
  std::vector<std::string> labels;
  for (std::size_t c = 0; c < meta.centres; ++c) {
    const std::span<const double> centre(centres.data() + c * d, d);
    const std::uint64_t n = sibuya_variate(params.alpha, rng, opts.n_max, &stats);
    std::string label;
    if (opts.keep_labels) label = std::to_string(c);
    detail::scatter_mu0(params.mu0, centre, n, rng, [&](std::span<const double> x) {
      if (!window.contains(x)) return;
      coords.insert(coords.end(), x.begin(), x.end());
      if (opts.keep_labels) labels.push_back(label);
    });
  }
  meta.truncations = stats.truncations;
  if (meta.truncations > 0)
    meta.warnings.push_back(std::to_string(meta.truncations) +
                            " cluster size(s) truncated at n_max");

  std::optional<std::vector<std::string>> lab;
  if (opts.keep_labels) lab = std::move(labels);
  return {PointPattern(window, std::move(coords), std::move(lab)), std::move(meta)};
}

// Independent thinning with retention probability p; labels follow survivors.
inline PointPattern thin(const PointPattern& pattern, double p, RandomSource& rng) {
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("retention probability must lie in (0, 1]");
  if (p == 1.0) return pattern;
  std::vector<double> coords;
  std::vector<std::string> labels;
  for (std::size_t i = 0; i < pattern.size(); ++i) {
    if (!rng.bernoulli(p)) continue;
    const auto x = pattern.point(i);
    coords.insert(coords.end(), x.begin(), x.end());
    if (pattern.has_labels()) labels.push_back(pattern.labels()[i]);
  }
  std::optional<std::vector<std::string>> lab;
  if (pattern.has_labels()) lab = std::move(labels);
  return PointPattern(pattern.window(), std::move(coords), std::move(lab));
}

// Superposition of two patterns on the same window.
inline PointPattern superpose(const PointPattern& a, const PointPattern& b) {
  if (!(a.window() == b.window())) throw DomainError("superposition requires equal windows");
  std::vector<double> coords = a.coords();
  coords.insert(coords.end(), b.coords().begin(), b.coords().end());
  std::optional<std::vector<std::string>> lab;
  if (a.has_labels() && b.has_labels()) {
    std::vector<std::string> l;
    for (const auto& s : a.labels()) l.push_back("a" + s);
    for (const auto& s : b.labels()) l.push_back("b" + s);
    lab = std::move(l);
  }
  return PointPattern(a.window(), std::move(coords), std::move(lab));
}

}  // namespace tas
