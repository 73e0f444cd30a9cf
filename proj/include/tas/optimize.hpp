#pragma once

// Derivative-free minimisers used by the fitting routines.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <utility>
#include <vector>

#include <boost/math/tools/minima.hpp>

namespace tas {

struct MinimizeResult {
  std::vector<double> x;
  double value = std::numeric_limits<double>::infinity();
  int iterations = 0;
  int evaluations = 0;
  bool converged = false;
};

struct NelderMeadOptions {
  double ftol = 1e-8;       // relative spread of simplex values
  double ftol_abs = 1e-20;  // absolute spread, for optima with zero residual
  double xtol = 1e-10;      // simplex diameter, absolute
  int max_iter = 500;
};

// Nelder-Mead simplex with box constraints enforced by projection.
// Converges when the spread of vertex values drops below ftol (relative) or
// ftol_abs and the simplex diameter is below xtol.
inline MinimizeResult nelder_mead(const std::function<double(const std::vector<double>&)>& f,
                                  std::vector<double> x0, std::vector<double> step,
                                  const std::vector<double>& lower,
                                  const std::vector<double>& upper,
                                  const NelderMeadOptions& opt = {}) {
  const std::size_t n = x0.size();
  MinimizeResult res;
  const auto project = [&](std::vector<double>& x) {
    for (std::size_t k = 0; k < n; ++k) x[k] = std::clamp(x[k], lower[k], upper[k]);
  };
  const auto eval = [&](const std::vector<double>& x) {
    ++res.evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::max();
  };

  std::vector<std::vector<double>> simplex(n + 1, x0);
  project(simplex[0]);
  for (std::size_t k = 0; k < n; ++k) {
    simplex[k + 1][k] += step[k];
    project(simplex[k + 1]);
    if (simplex[k + 1][k] == simplex[0][k]) simplex[k + 1][k] -= step[k];  // hit a bound
    project(simplex[k + 1]);
  }
  std::vector<double> fv(n + 1);
  for (std::size_t i = 0; i <= n; ++i) fv[i] = eval(simplex[i]);

  std::vector<std::size_t> idx(n + 1);
  for (res.iterations = 0; res.iterations < opt.max_iter; ++res.iterations) {
    for (std::size_t i = 0; i <= n; ++i) idx[i] = i;
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) { return fv[a] < fv[b]; });
    const double fbest = fv[idx[0]], fworst = fv[idx[n]];
    double diam = 0.0;
    for (std::size_t i = 1; i <= n; ++i)
      for (std::size_t k = 0; k < n; ++k)
        diam = std::max(diam, std::fabs(simplex[idx[i]][k] - simplex[idx[0]][k]));
    const double spread = fworst - fbest;
    const bool flat =
        spread <= opt.ftol * 0.5 * (std::fabs(fbest) + std::fabs(fworst)) || spread <= opt.ftol_abs;
    if ((flat && diam <= opt.xtol) || diam == 0.0) {
      res.converged = true;
      break;
    }

    std::vector<double> centroid(n, 0.0);
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t k = 0; k < n; ++k) centroid[k] += simplex[idx[i]][k] / static_cast<double>(n);
    const auto along = [&](double t) {
      std::vector<double> x(n);
      for (std::size_t k = 0; k < n; ++k) x[k] = centroid[k] + t * (simplex[idx[n]][k] - centroid[k]);
      project(x);
      return x;
    };

    auto xr = along(-1.0);
    const double fr = eval(xr);
    if (fr < fbest) {
      auto xe = along(-2.0);
      const double fe = eval(xe);
      if (fe < fr) {
        simplex[idx[n]] = std::move(xe);
        fv[idx[n]] = fe;
      } else {
        simplex[idx[n]] = std::move(xr);
        fv[idx[n]] = fr;
      }
      continue;
    }
    if (fr < fv[idx[n - 1]]) {
      simplex[idx[n]] = std::move(xr);
      fv[idx[n]] = fr;
      continue;
    }
    const bool outside = fr < fworst;
    auto xc = along(outside ? -0.5 : 0.5);
    const double fc = eval(xc);
    if (fc < (outside ? fr : fworst)) {
      simplex[idx[n]] = std::move(xc);
      fv[idx[n]] = fc;
      continue;
    }
    for (std::size_t i = 1; i <= n; ++i) {
      for (std::size_t k = 0; k < n; ++k)
        simplex[idx[i]][k] = simplex[idx[0]][k] + 0.5 * (simplex[idx[i]][k] - simplex[idx[0]][k]);
      project(simplex[idx[i]]);
      fv[idx[i]] = eval(simplex[idx[i]]);
    }
  }
  const auto best = std::min_element(fv.begin(), fv.end()) - fv.begin();
  res.x = simplex[static_cast<std::size_t>(best)];
  res.value = fv[static_cast<std::size_t>(best)];
  return res;
}

// 1-D bounded minimisation: a uniform scan locates the basin, Brent's method
// refines inside the bracketing cells.
inline MinimizeResult scan_then_brent(const std::function<double(double)>& f, double lo, double hi,
                                      int scan_points = 60, int bits = 52,
                                      std::uintmax_t max_iter = 500) {
  MinimizeResult res;
  const auto eval = [&](double x) {
    ++res.evaluations;
    const double v = f(x);
    return std::isfinite(v) ? v : std::numeric_limits<double>::max();
  };
  std::vector<double> xs(static_cast<std::size_t>(scan_points)), fs(xs.size());
  for (std::size_t i = 0; i < xs.size(); ++i) {
    xs[i] = lo + (hi - lo) * static_cast<double>(i) / static_cast<double>(xs.size() - 1);
    fs[i] = eval(xs[i]);
  }
  const std::size_t b = static_cast<std::size_t>(std::min_element(fs.begin(), fs.end()) - fs.begin());
  const double a = xs[b == 0 ? 0 : b - 1];
  const double c = xs[std::min(b + 1, xs.size() - 1)];
  std::uintmax_t iters = max_iter;
  const auto [x, v] = boost::math::tools::brent_find_minima(eval, a, c, bits, iters);
  res.iterations = static_cast<int>(iters);
  res.converged = iters < max_iter;
  if (v <= fs[b]) {
    res.x = {x};
    res.value = v;
  } else {
    res.x = {xs[b]};
    res.value = fs[b];
  }
  return res;
}

}  // namespace tas
