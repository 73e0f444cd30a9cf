#pragma once

// Test points, distance profiles and the two contact-function estimators:
// the empirical void fraction and its thinned (geometric-weight) variant.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <span>
#include <variant>
#include <vector>

#include "tas/core.hpp"
#include "tas/knn.hpp"
#include "tas/random.hpp"

namespace tas {

// ---------------------------------------------------------------------------
// Test points

struct GridSpacing {
  double spacing;
};
struct GridCount {
  std::size_t target = 400;  // approximate number of grid nodes
};
struct RandomTestPoints {
  std::size_t n;
  RandomSource* rng;
};
struct ExplicitTestPoints {
  std::vector<double> coords;  // row-major
};

using TestPoints = std::variant<GridSpacing, GridCount, RandomTestPoints, ExplicitTestPoints>;

// Cell-centred grid: per axis round(side / spacing) nodes (at least one).
inline std::vector<double> grid_test_points(const Window& w, double spacing) {
  if (!(spacing > 0.0) || !std::isfinite(spacing)) throw DomainError("grid spacing must be positive");
  const std::size_t d = w.dim();
  std::vector<std::size_t> per_axis(d);
  std::size_t total = 1;
  for (std::size_t k = 0; k < d; ++k) {
    per_axis[k] = std::max<std::size_t>(1, static_cast<std::size_t>(std::llround(w.side(k) / spacing)));
    total *= per_axis[k];
  }
  std::vector<double> out;
  out.reserve(total * d);
  std::vector<std::size_t> idx(d, 0);
  for (std::size_t n = 0; n < total; ++n) {
    for (std::size_t k = 0; k < d; ++k) {
      const double step = w.side(k) / static_cast<double>(per_axis[k]);
      out.push_back(w.lower()[k] + (static_cast<double>(idx[k]) + 0.5) * step);
    }
    for (std::size_t k = d; k-- > 0;) {
      if (++idx[k] < per_axis[k]) break;
      idx[k] = 0;
    }
  }
  return out;
}

// Grid whose spacing yields about `target` nodes in the window.
inline std::vector<double> grid_test_points_count(const Window& w, std::size_t target) {
  if (target == 0) throw DomainError("grid target must be positive");
  const double spacing =
      std::pow(w.volume() / static_cast<double>(target), 1.0 / static_cast<double>(w.dim()));
  return grid_test_points(w, spacing);
}

inline std::vector<double> resolve_test_points(const TestPoints& spec, const Window& w) {
  return std::visit(
      [&](const auto& s) -> std::vector<double> {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, GridSpacing>) {
          return grid_test_points(w, s.spacing);
        } else if constexpr (std::is_same_v<T, GridCount>) {
          return grid_test_points_count(w, s.target);
        } else if constexpr (std::is_same_v<T, RandomTestPoints>) {
          if (!s.rng) throw DomainError("random test points need a random source");
          std::vector<double> out(s.n * w.dim());
          for (std::size_t i = 0; i < s.n; ++i)
            for (std::size_t k = 0; k < w.dim(); ++k)
              out[i * w.dim() + k] = s.rng->uniform(w.lower()[k], w.upper()[k]);
          return out;
        } else {
          if (s.coords.size() % w.dim() != 0)
            throw DomainError("explicit test point coordinates not a multiple of dimension");
          return s.coords;
        }
      },
      spec);
}

// ---------------------------------------------------------------------------

inline DistanceProfile distance_profile(const PointPattern& pattern, const TestPoints& test_points,
                                        std::size_t depth) {
  if (pattern.empty()) throw DomainError("distance profile needs a non-empty pattern");
  if (depth < 1) throw DomainError("profile depth must be at least 1");
  DistanceProfile prof;
  prof.dim = pattern.dim();
  prof.test_points = resolve_test_points(test_points, pattern.window());
  if (prof.test_points.empty()) throw DomainError("no test points");
  prof.depth = std::min(depth, pattern.size());
  prof.depth_clamped = prof.depth < depth;

  const NearestNeighbours index(pattern.coords(), pattern.dim());
  const std::size_t n = prof.size();
  prof.distances.resize(n * prof.depth);
  prof.boundary_distances.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const auto q = prof.test_point(i);
    const std::vector<double> d = index.k_nearest(q, prof.depth);
    std::copy(d.begin(), d.end(), prof.distances.begin() + static_cast<std::ptrdiff_t>(i * prof.depth));
    prof.boundary_distances[i] =
        pattern.window().contains(q) ? pattern.window().boundary_distance(q) : 0.0;
  }
  return prof;
}

// Minus-sampling: with `border`, a test point contributes at radius r only if
// B_r(x) lies inside the window, so unobserved points cannot bias the void
// indicator.
enum class EdgeCorrection { none, border };

// Test points usable at radius r under the given correction.
inline std::size_t contact_support(const DistanceProfile& prof, double r, EdgeCorrection ec) {
  if (ec == EdgeCorrection::none) return prof.size();
  std::size_t c = 0;
  for (double b : prof.boundary_distances)
    if (b >= r) ++c;
  return c;
}

namespace detail {

template <typename PerPoint>
ContactCurve average_contact(const DistanceProfile& prof, std::span<const double> radii,
                             EdgeCorrection ec, PerPoint&& per_point) {
  const std::vector<double> r(radii.begin(), radii.end());
  std::vector<double> g(r.size());
  for (std::size_t j = 0; j < r.size(); ++j) {
    double sum = 0.0;
    std::size_t used = 0;
    for (std::size_t i = 0; i < prof.size(); ++i) {
      if (ec == EdgeCorrection::border && prof.boundary_distances[i] < r[j]) continue;
      sum += per_point(prof.row(i), r[j]);
      ++used;
    }
    if (used == 0)
      throw DegenerateDataError("no test point supports radius " + format_coord(r[j]));
    g[j] = sum / static_cast<double>(used);
  }
  return ContactCurve(r, std::move(g));
}

}  // namespace detail

// G_hat(r) = (1/n) #{i : r_{i,1} > r}.
inline ContactCurve empirical_contact(const DistanceProfile& prof, std::span<const double> radii,
                                      EdgeCorrection ec = EdgeCorrection::none) {
  if (prof.depth < 1) throw DomainError("profile depth must be at least 1");
  return detail::average_contact(prof, radii, ec, [](std::span<const double> row, double r) {
    return row[0] > r ? 1.0 : 0.0;
  });
}

struct ThinnedEstimateDiagnostics {
  double tail_bound = 0.0;  // (1 - p)^K: error when more than K points fall in a ball
  bool depth_sufficient = true;
};

// Geometric-weight estimator of the contact function of p o Phi:
//   sum_{k=1}^{K} p (1 - p)^{k-1} 1{r_{i,k} > r} + (1 - p)^K
// averaged over test points. The trailing term is the probability that all K
// recorded points are removed; with it each test point contributes exactly
// (1 - p)^{N_i(r)} whenever N_i(r) <= K.
inline ContactCurve thinned_contact_estimate(const DistanceProfile& prof, double p,
                                             std::span<const double> radii,
                                             EdgeCorrection ec = EdgeCorrection::none,
                                             ThinnedEstimateDiagnostics* diag = nullptr,
                                             double tail_tolerance = 1e-8) {
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("retention probability must lie in (0, 1]");
  if (prof.depth < 1) throw DomainError("profile depth must be at least 1");
  const std::size_t K = prof.depth;
  std::vector<double> w(K);
  for (std::size_t k = 0; k < K; ++k) w[k] = p * std::pow(1.0 - p, static_cast<double>(k));
  const double tail = std::pow(1.0 - p, static_cast<double>(K));
  if (diag) {
    diag->tail_bound = tail;
    diag->depth_sufficient = prof.depth_clamped || tail <= tail_tolerance;
  }
  return detail::average_contact(prof, radii, ec, [&](std::span<const double> row, double r) {
    double s = 0.0;
    for (std::size_t k = 0; k < K; ++k)
      if (row[k] > r) s += w[k];
    return s + tail;
  });
}

// Smallest depth with (1 - p)^K <= tol.
inline std::size_t thinning_depth(double p_min, double tol = 1e-8) {
  if (!(p_min > 0.0 && p_min <= 1.0)) throw DomainError("retention probability must lie in (0, 1]");
  if (p_min == 1.0) return 1;
  return static_cast<std::size_t>(std::ceil(std::log(tol) / std::log1p(-p_min)));
}

// Number of points within r of each test point, from the distance profile.
inline std::size_t points_within(std::span<const double> row, double r) {
  return static_cast<std::size_t>(std::upper_bound(row.begin(), row.end(), r) - row.begin());
}

}  // namespace tas
