#pragma once

// Stability exponent from observed cluster sizes via the Sibuya p.g.f.
// g(t) = 1 - (1 - t)^alpha: log(1 - g(t)) = alpha log(1 - t), so alpha is the
// least-squares slope of log(1 - g_K(t_j)) on l_j = log(1 - t_j).

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <map>
#include <span>
#include <vector>

#include "tas/core.hpp"

namespace tas {

inline std::vector<double> default_t_grid() {
  std::vector<double> t;
  for (int i = 1; i <= 9; ++i) t.push_back(i / 10.0);
  return t;
}

struct ClusterSizeEstimate {
  double alpha = 0.0;  // raw value clamped to (0, 1]
  double raw = 0.0;
  std::vector<double> t_used;
  std::vector<double> t_dropped;  // where g_K(t) = 1
};

// Empirical p.g.f. K^-1 sum_k t^{n_k}, accumulated over the size histogram.
inline double empirical_pgf(const std::map<std::uint64_t, std::size_t>& hist, std::size_t K, double t) {
  double g = 0.0;
  for (const auto& [n, c] : hist)
    g += (static_cast<double>(c) / static_cast<double>(K)) * std::pow(t, static_cast<double>(n));
  return g;
}

inline ClusterSizeEstimate estimate_alpha_from_cluster_sizes(
    std::span<const std::uint64_t> sizes, std::span<const double> t_grid) {
  if (sizes.empty()) throw DomainError("cluster sizes must be non-empty");
  if (t_grid.size() < 2) throw DomainError("t grid needs at least 2 values");
  for (std::size_t j = 0; j < t_grid.size(); ++j) {
    if (!(t_grid[j] >= 0.0 && t_grid[j] < 1.0)) throw DomainError("t values must lie in [0, 1)");
    if (j > 0 && !(t_grid[j] > t_grid[j - 1])) throw DomainError("t grid must be increasing");
  }
  std::map<std::uint64_t, std::size_t> hist;
  for (std::uint64_t n : sizes) {
    if (n < 1) throw DomainError("cluster sizes must be at least 1");
    ++hist[n];
  }

  ClusterSizeEstimate est;
  std::vector<double> l, y;
  for (double t : t_grid) {
    const double g = empirical_pgf(hist, sizes.size(), t);
    if (!(g < 1.0)) {
      est.t_dropped.push_back(t);
      continue;
    }
    est.t_used.push_back(t);
    l.push_back(std::log(1.0 - t));
    y.push_back(std::log(1.0 - g));
  }
  if (l.size() < 2) throw DegenerateDataError("fewer than 2 usable t values");

  // sum_j y_j b_j with b_j = (l_j - l_bar) / sum (l_j - l_bar)^2. Centring y
  // as well leaves the value unchanged (sum b_j = 0) and makes singleton
  // input return exactly 1.
  const double q = static_cast<double>(l.size());
  double l_bar = 0.0, y_bar = 0.0;
  for (std::size_t j = 0; j < l.size(); ++j) {
    l_bar += l[j];
    y_bar += y[j];
  }
  l_bar /= q;
  y_bar /= q;
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < l.size(); ++j) {
    num += (y[j] - y_bar) * (l[j] - l_bar);
    den += (l[j] - l_bar) * (l[j] - l_bar);
  }
  if (!(den > 0.0)) throw DegenerateDataError("t grid has no spread");
  est.raw = num / den;
  est.alpha = std::clamp(est.raw, std::numeric_limits<double>::min(), 1.0);
  return est;
}

inline ClusterSizeEstimate estimate_alpha_from_cluster_sizes(std::span<const std::uint64_t> sizes) {
  const std::vector<double> t = default_t_grid();
  return estimate_alpha_from_cluster_sizes(sizes, t);
}

}  // namespace tas
