#pragma once

// Analytic quantities of the stationary model: the Sibuya law, the coverage
// integral I(B; alpha) = \int mu0(B - x)^alpha dx over centres x, and the
// void probabilities and count generating function built from it.

#include <algorithm>
#include <array>
#include <cmath>
#include <functional>
#include <limits>
#include <numbers>
#include <span>
#include <variant>
#include <vector>

#include <boost/math/distributions/non_central_chi_squared.hpp>
#include <boost/math/quadrature/gauss.hpp>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <boost/math/special_functions/gamma.hpp>

#include "tas/core.hpp"
#include "tas/random.hpp"

namespace tas {

// ---------------------------------------------------------------------------
// Sibuya law

// P(nu > n) = prod_{k=1}^{n} (1 - alpha / k).
inline double sibuya_survival(double alpha, std::uint64_t n) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("sibuya alpha must lie in (0, 1]");
  if (n == 0) return 1.0;
  if (alpha == 1.0) return 0.0;
  if (n <= 1000) {
    double log_s = 0.0;
    for (std::uint64_t k = 1; k <= n; ++k) log_s += std::log1p(-alpha / static_cast<double>(k));
    return std::exp(log_s);
  }
  // Gamma(n + 1 - alpha) / (Gamma(1 - alpha) Gamma(n + 1))
  const double z = static_cast<double>(n) + 1.0 - alpha;
  return boost::math::tgamma_delta_ratio(z, alpha) / std::tgamma(1.0 - alpha);
}

inline double sibuya_pmf(double alpha, std::uint64_t n) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("sibuya alpha must lie in (0, 1]");
  if (n == 0) throw DomainError("sibuya support starts at n = 1");
  return sibuya_survival(alpha, n - 1) * (alpha / static_cast<double>(n));
}

inline double sibuya_pgf(double alpha, double t) {
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("sibuya alpha must lie in (0, 1]");
  if (!(t >= 0.0 && t <= 1.0)) throw DomainError("pgf argument must lie in [0, 1]");
  return 1.0 - pow_alpha(1.0 - t, alpha);
}

// ---------------------------------------------------------------------------
// Coverage integral

struct FullSpace {};

// Centres restricted to a window; the ball sits at `ball_centre`
// (origin when empty).
struct WindowDomain {
  Window window;
  Point ball_centre;
};

using IntegrationDomain = std::variant<FullSpace, WindowDomain>;

enum class IntegrationMethod { closed_form, quadrature, monte_carlo };

inline const char* to_string(IntegrationMethod m) {
  switch (m) {
    case IntegrationMethod::closed_form: return "closed-form";
    case IntegrationMethod::quadrature: return "quadrature";
    case IntegrationMethod::monte_carlo: return "monte-carlo";
  }
  return "?";
}

struct CoverageIntegral {
  double value = 0.0;
  IntegrationMethod method = IntegrationMethod::closed_form;
  double abs_error_bound = 0.0;
};

struct QuadratureOptions {
  double abs_tol = 1e-10;
  double rel_tol = 1e-12;
  unsigned points = 31;  // Gauss-Kronrod order: 15, 21, 31, 41, 51 or 61
  unsigned max_depth = 20;
  std::size_t monte_carlo_samples = 200000;
};

namespace detail {

// Bisection driven by the larger of the relative tolerance and an absolute
// budget; a pure relative test never terminates on panels whose integral sits
// at rounding level.
template <unsigned N>
double gk_recurse(const std::function<double(double)>& f, double a, double b, unsigned depth,
                  double rel_tol, double abs_budget, double* err) {
  using GK = boost::math::quadrature::gauss_kronrod<double, N>;
  double e = 0.0;
  const double v = GK::integrate(f, a, b, 0, rel_tol, &e);
  const double local = e * 0.5 * (b - a);
  if (depth == 0 || local <= std::max(rel_tol * std::fabs(v), abs_budget)) {
    *err += local;
    return v;
  }
  const double mid = 0.5 * (a + b);
  return gk_recurse<N>(f, a, mid, depth - 1, rel_tol, 0.5 * abs_budget, err) +
         gk_recurse<N>(f, mid, b, depth - 1, rel_tol, 0.5 * abs_budget, err);
}

template <unsigned N>
double gk_integrate(const std::function<double(double)>& f, double a, double b,
                    const QuadratureOptions& q, double* err) {
  return gk_recurse<N>(f, a, b, q.max_depth, q.rel_tol, 1e-3 * q.abs_tol, err);
}

// Adaptive Gauss-Kronrod on [a, b]; accumulates the error estimate.
inline double integrate_1d(const std::function<double(double)>& f, double a, double b,
                           const QuadratureOptions& q, double& err_acc) {
  if (!(b > a)) return 0.0;
  double err = 0.0;
  double v = 0.0;
  switch (q.points) {
    case 15: v = gk_integrate<15>(f, a, b, q, &err); break;
    case 21: v = gk_integrate<21>(f, a, b, q, &err); break;
    case 31: v = gk_integrate<31>(f, a, b, q, &err); break;
    case 41: v = gk_integrate<41>(f, a, b, q, &err); break;
    case 51: v = gk_integrate<51>(f, a, b, q, &err); break;
    case 61: v = gk_integrate<61>(f, a, b, q, &err); break;
    default: throw DomainError("unsupported Gauss-Kronrod order");
  }
  err_acc += err;
  return v;
}

// Integral of f over a segment where f is linear with slope `slope`,
// raised to alpha; f1, f2 are the endpoint values.
inline double linear_power_segment(double x1, double x2, double f1, double f2, double slope,
                                   double alpha) {
  f1 = std::max(f1, 0.0);
  f2 = std::max(f2, 0.0);
  if (slope == 0.0) return (x2 - x1) * pow_alpha(f1, alpha);
  return (pow_alpha(f2, alpha + 1.0) - pow_alpha(f1, alpha + 1.0)) / ((alpha + 1.0) * slope);
}

// \int_{lo}^{hi} mu0([c - r, c + r] - x)^alpha dx for mu0 = U[-h, h].
// The overlap is piecewise linear in x, so each piece is integrated exactly.
inline double uniform_coverage(double h, double r, double c, double alpha, double lo, double hi) {
  const double support_lo = c - r - h;
  const double support_hi = c + r + h;
  lo = std::max(lo, support_lo);
  hi = std::min(hi, support_hi);
  if (!(hi > lo)) return 0.0;
  std::array<double, 4> cuts{lo, c - r + h, c + r - h, hi};
  std::sort(cuts.begin(), cuts.end());
  const double inv = 1.0 / (2.0 * h);
  double total = 0.0;
  for (std::size_t i = 0; i + 1 < cuts.size(); ++i) {
    const double x1 = std::max(cuts[i], lo);
    const double x2 = std::min(cuts[i + 1], hi);
    if (!(x2 > x1)) continue;
    const double xm = 0.5 * (x1 + x2);
    // Ball ends relative to mu0 after shifting by -x.
    const bool a_linear = (c - r - xm) > -h;
    const bool b_linear = (c + r - xm) < h;
    const double a = a_linear ? c - r - xm : -h;
    const double b = b_linear ? c + r - xm : h;
    const double fm = (b - a) * inv;
    if (!(fm > 0.0)) continue;
    const double slope = ((b_linear ? -1.0 : 0.0) - (a_linear ? -1.0 : 0.0)) * inv;
    const double f1 = fm + slope * (x1 - xm);
    const double f2 = fm + slope * (x2 - xm);
    total += linear_power_segment(x1, x2, f1, f2, slope, alpha);
  }
  return total;
}

// Mass of the ball B_r(0) under N(offset e_1, sigma^2 I_d), offset rho >= 0.
inline double gaussian_ball_mass(std::size_t d, double sigma, double r, double rho) {
  if (d == 1) {
    const double s = sigma * std::numbers::sqrt2;
    if (rho >= r) return 0.5 * (std::erfc((rho - r) / s) - std::erfc((rho + r) / s));
    return 1.0 - 0.5 * std::erfc((r - rho) / s) - 0.5 * std::erfc((r + rho) / s);
  }
  const double x = (r * r) / (sigma * sigma);
  const double nc = (rho * rho) / (sigma * sigma);
  if (nc == 0.0) {
    boost::math::chi_squared_distribution<double> chi(static_cast<double>(d));
    return boost::math::cdf(chi, x);
  }
  boost::math::non_central_chi_squared_distribution<double> ncx(static_cast<double>(d), nc);
  return boost::math::cdf(ncx, x);
}

// P(|Y|^2 <= x sigma^2) for Y ~ N(0, sigma^2 I_k), i.e. the chi-square CDF.
inline double chi_square_cdf(std::size_t k, double x) {
  if (x <= 0.0) return 0.0;
  if (k == 1) return std::erf(std::sqrt(0.5 * x));
  if (k == 2) return -std::expm1(-0.5 * x);
  return boost::math::gamma_p(0.5 * static_cast<double>(k), 0.5 * x);
}

// Offsets at least this many sigmas beyond the ball use the factored form.
inline constexpr double kFarBallGap = 2.0;

// log of gaussian_ball_mass, accurate where the mass itself underflows.
// Beyond the ball (rho > r) the mass factors as
//   exp(-(rho - r)^2 / 2 sigma^2) * int_0^{2r} phi(u) F_{d-1}(.) du
// with u the depth below the near face. F behaves like a square root at
// both faces, so each half of the chord is integrated in t with u = t^2
// (near face) or u = 2r - t^2 (far face).
inline double log_gaussian_ball_mass_far(std::size_t d, double sigma, double r, double rho) {
  const double gap = rho - r;
  const double s2 = sigma * sigma;
  const double u_max = std::min(2.0 * r, 60.0 * s2 / gap);
  const double norm = 2.0 / std::sqrt(2.0 * std::numbers::pi * s2);
  const auto g = [&](double u, double t) {
    const double perp = d > 1 ? chi_square_cdf(d - 1, (2.0 * r * u - u * u) / s2) : 1.0;
    return norm * t * std::exp(-(2.0 * gap * u + u * u) / (2.0 * s2)) * perp;
  };
  using GK = boost::math::quadrature::gauss_kronrod<double, 21>;
  const auto near = [&](double t) { return g(t * t, t); };
  double j = GK::integrate(near, 0.0, std::sqrt(std::min(r, u_max)), 10, 1e-13);
  // Past the midpoint the integrand is below exp(-gap r / sigma^2) of its
  // peak; skip that half once it cannot reach the result.
  if (u_max > r && gap * r < 40.0 * s2) {
    const auto far = [&](double t) { return g(2.0 * r - t * t, t); };
    j += GK::integrate(far, std::sqrt(2.0 * r - u_max), std::sqrt(r), 10, 1e-13);
  }
  return -(gap * gap) / (2.0 * s2) + std::log(j);
}

// mu0(B_r - x)^alpha for the Gaussian at offset rho.
inline double gaussian_mass_power(std::size_t d, double sigma, double r, double rho, double alpha) {
  if (rho - r > kFarBallGap * sigma) return std::exp(alpha * log_gaussian_ball_mass_far(d, sigma, r, rho));
  return pow_alpha(gaussian_ball_mass(d, sigma, r, rho), alpha);
}

inline double unit_sphere_area(std::size_t d) {
  const double h = 0.5 * static_cast<double>(d);
  return 2.0 * std::pow(std::numbers::pi, h) / std::tgamma(h);
}

// Offset s (in sigma units beyond r) where the radial tail of mu0(B - x)^alpha
// is negligible; also returns the bound of the neglected tail.
inline std::pair<double, double> gaussian_tail_cutoff(std::size_t d, double sigma, double r,
                                                      double alpha, double target) {
  const double area = unit_sphere_area(d);
  double s = 6.0;
  for (;; s += 0.5) {
    // mu0(B - x) <= Phi(-s) <= exp(-s^2 / 2) for |x| = r + sigma s, so the
    // tail is bounded by a Mills-ratio estimate times the polynomial growth.
    const double poly = std::pow(r + sigma * s, static_cast<double>(d) - 1.0);
    const double bound = 10.0 * area * sigma * poly * std::exp(-0.5 * alpha * s * s) / (alpha * s);
    if (bound < target || s > 1e4) return {s, bound};
  }
}

inline double gaussian_coverage_full(const IsotropicGaussian& g, double r, double alpha,
                                     const QuadratureOptions& q, double& err) {
  const auto [s, tail] = gaussian_tail_cutoff(g.dimension, g.sigma, r, alpha, 0.01 * q.abs_tol);
  const double rho_max = r + g.sigma * s;
  const double dm1 = static_cast<double>(g.dimension) - 1.0;
  const std::function<double(double)> f = [&](double rho) {
    return gaussian_mass_power(g.dimension, g.sigma, r, rho, alpha) *
           (dm1 == 0.0 ? 1.0 : std::pow(rho, dm1));
  };
  // The tail decays like exp(-alpha rho^2 / 2 sigma^2); short panels keep
  // the adaptive rule well resolved for small alpha.
  double v = integrate_1d(f, 0.0, r, q, err);
  const double panel = 4.0 * g.sigma;
  for (double a = r; a < rho_max; a += panel) v += integrate_1d(f, a, std::min(a + panel, rho_max), q, err);
  err += tail;
  return unit_sphere_area(g.dimension) * v;
}

// Full-space Gaussian coverage as an explicit rule over rho. The ball mass
// does not depend on alpha, so log m(rho) is tabulated once on composite
// Gauss-Legendre nodes and I(alpha) = sum_i w_i exp(alpha log m_i). The
// radial range covers alpha >= alpha_min.
class GaussianCoverageRule {
 public:
  GaussianCoverageRule(const IsotropicGaussian& g, double r, double alpha_min, double target = 1e-12)
      : alpha_min_(alpha_min) {
    using GL = boost::math::quadrature::gauss<double, 20>;
    const double rho_max = r + g.sigma * gaussian_tail_cutoff(g.dimension, g.sigma, r, alpha_min, target).first;
    const double area = unit_sphere_area(g.dimension);
    const double dm1 = static_cast<double>(g.dimension) - 1.0;
    const auto add_panel = [&](double a, double b) {
      const double half = 0.5 * (b - a), mid = 0.5 * (a + b);
      for (std::size_t i = 0; i < GL::abscissa().size(); ++i)
        for (double sign : {-1.0, 1.0}) {
          const double x = GL::abscissa()[i];
          if (x == 0.0 && sign > 0.0) continue;
          const double rho = mid + sign * half * x;
          const double logm = rho - r > kFarBallGap * g.sigma
                                  ? log_gaussian_ball_mass_far(g.dimension, g.sigma, r, rho)
                                  : std::log(gaussian_ball_mass(g.dimension, g.sigma, r, rho));
          weights_.push_back(area * half * GL::weights()[i] * (dm1 == 0.0 ? 1.0 : std::pow(rho, dm1)));
          log_mass_.push_back(logm);
        }
    };
    const double inner = r / 4.0;
    for (double a = 0.0; a < r; a += inner) add_panel(a, std::min(a + inner, r));
    const double panel = 2.0 * g.sigma;
    for (double a = r; a < rho_max; a += panel) add_panel(a, std::min(a + panel, rho_max));
  }

  double operator()(double alpha) const {
    if (!(alpha >= alpha_min_)) throw DomainError("alpha below the tabulated range");
    double v = 0.0;
    for (std::size_t i = 0; i < weights_.size(); ++i)
      if (std::isfinite(log_mass_[i])) v += weights_[i] * std::exp(alpha * log_mass_[i]);
    return v;
  }

 private:
  double alpha_min_;
  std::vector<double> weights_;
  std::vector<double> log_mass_;
};

// Recursive tensor-product integration of f over a box.
inline double integrate_box(const std::function<double(std::span<const double>)>& f,
                            std::span<const double> lo, std::span<const double> hi,
                            const QuadratureOptions& q, double& err) {
  const std::size_t d = lo.size();
  std::vector<double> x(d);
  std::function<double(std::size_t)> level = [&](std::size_t k) -> double {
    const std::function<double(double)> g = [&, k](double t) {
      x[k] = t;
      if (k + 1 == d) return f(x);
      return level(k + 1);
    };
    return integrate_1d(g, lo[k], hi[k], q, err);
  };
  return level(0);
}

// Exact sweep for a 1-D cloud: mu0(B - x) counts cloud points y with
// |x + y - c| <= r and is constant between events.
inline double cloud_coverage_1d(const EmpiricalCloud& cloud, double r, double c, double alpha,
                                double lo, double hi) {
  std::vector<std::pair<double, int>> events;
  events.reserve(2 * cloud.size());
  for (std::size_t j = 0; j < cloud.size(); ++j) {
    const double y = cloud.coords[j];
    events.push_back({c - y - r, +1});
    events.push_back({c - y + r, -1});
  }
  std::sort(events.begin(), events.end());
  const double m = static_cast<double>(cloud.size());
  double total = 0.0;
  int count = 0;
  for (std::size_t e = 0; e + 1 < events.size(); ++e) {
    count += events[e].second;
    const double x1 = std::max(events[e].first, lo);
    const double x2 = std::min(events[e + 1].first, hi);
    if (count > 0 && x2 > x1) total += (x2 - x1) * pow_alpha(count / m, alpha);
  }
  return total;
}

inline double cloud_mass(const EmpiricalCloud& cloud, std::span<const double> x,
                         std::span<const double> c, double r) {
  const std::size_t d = cloud.dimension;
  std::size_t hits = 0;
  std::vector<double> shifted(d);
  for (std::size_t j = 0; j < cloud.size(); ++j) {
    const auto y = cloud.point(j);
    for (std::size_t k = 0; k < d; ++k) shifted[k] = x[k] + y[k];
    if (euclidean_distance(shifted, c) <= r) ++hits;
  }
  return static_cast<double>(hits) / static_cast<double>(cloud.size());
}

}  // namespace detail

// I(B_r; alpha) = \int mu0(B_r - x)^alpha dx over the chosen domain.
inline CoverageIntegral coverage_integral(const ClusterDistribution& mu0, double radius,
                                          double alpha, const IntegrationDomain& domain = FullSpace{},
                                          const QuadratureOptions& q = {}) {
  if (!(radius > 0.0) || !std::isfinite(radius)) throw DomainError("radius must be positive");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw DomainError("alpha must lie in (0, 1]");
  const std::size_t d = mu0.dim();
  const WindowDomain* wd = std::get_if<WindowDomain>(&domain);
  Point centre(d, 0.0);
  if (wd) {
    if (wd->window.dim() != d) throw DomainError("window dimension does not match mu0");
    if (!wd->ball_centre.empty()) {
      if (wd->ball_centre.size() != d) throw DomainError("ball centre dimension mismatch");
      centre = wd->ball_centre;
    }
  }

  CoverageIntegral out;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, UniformInterval>) {
          const double inf = std::numeric_limits<double>::infinity();
          const double lo = wd ? wd->window.lower()[0] : -inf;
          const double hi = wd ? wd->window.upper()[0] : inf;
          out.value = detail::uniform_coverage(m.halfwidth, radius, centre[0], alpha, lo, hi);
          out.method = IntegrationMethod::closed_form;
        } else if constexpr (std::is_same_v<T, IsotropicGaussian>) {
          double err = 0.0;
          out.method = IntegrationMethod::quadrature;
          if (!wd) {
            out.value = detail::gaussian_coverage_full(m, radius, alpha, q, err);
          } else {
            const auto [s, tail] =
                detail::gaussian_tail_cutoff(d, m.sigma, radius, alpha, 0.01 * q.abs_tol);
            const double reach = radius + m.sigma * s;
            std::vector<double> lo(d), hi(d);
            bool empty = false;
            for (std::size_t k = 0; k < d; ++k) {
              lo[k] = std::max(wd->window.lower()[k], centre[k] - reach);
              hi[k] = std::min(wd->window.upper()[k], centre[k] + reach);
              empty = empty || !(hi[k] > lo[k]);
            }
            if (!empty) {
              const std::function<double(std::span<const double>)> f =
                  [&](std::span<const double> x) {
                    const double rho = euclidean_distance(x, centre);
                    return detail::gaussian_mass_power(d, m.sigma, radius, rho, alpha);
                  };
              out.value = detail::integrate_box(f, lo, hi, q, err);
            }
            err += tail;
          }
          out.abs_error_bound = err;
          const double allowed = std::max(q.abs_tol, q.rel_tol * std::abs(out.value));
          if (!(err <= allowed))
            throw NumericalError("coverage quadrature missed its tolerance", err);
        } else {
          if (d == 1) {
            const double inf = std::numeric_limits<double>::infinity();
            const double lo = wd ? wd->window.lower()[0] : -inf;
            const double hi = wd ? wd->window.upper()[0] : inf;
            out.value = detail::cloud_coverage_1d(m, radius, centre[0], alpha, lo, hi);
            out.method = IntegrationMethod::closed_form;
          } else {
            // Bounding box of the centres x for which mu0(B - x) > 0.
            std::vector<double> lo(d, std::numeric_limits<double>::infinity());
            std::vector<double> hi(d, -std::numeric_limits<double>::infinity());
            for (std::size_t j = 0; j < m.size(); ++j) {
              const auto y = m.point(j);
              for (std::size_t k = 0; k < d; ++k) {
                lo[k] = std::min(lo[k], centre[k] - y[k] - radius);
                hi[k] = std::max(hi[k], centre[k] - y[k] + radius);
              }
            }
            double vol = 1.0;
            for (std::size_t k = 0; k < d; ++k) {
              if (wd) {
                lo[k] = std::max(lo[k], wd->window.lower()[k]);
                hi[k] = std::min(hi[k], wd->window.upper()[k]);
              }
              vol *= std::max(hi[k] - lo[k], 0.0);
            }
            out.method = IntegrationMethod::monte_carlo;
            if (vol > 0.0) {
              RandomSource rng(0x5eedc0feULL, 0);
              std::vector<double> x(d);
              double sum = 0.0, sum2 = 0.0;
              const std::size_t n = q.monte_carlo_samples;
              for (std::size_t i = 0; i < n; ++i) {
                for (std::size_t k = 0; k < d; ++k) x[k] = rng.uniform(lo[k], hi[k]);
                const double g = pow_alpha(detail::cloud_mass(m, x, centre, radius), alpha);
                sum += g;
                sum2 += g * g;
              }
              const double mean = sum / static_cast<double>(n);
              const double var = std::max(sum2 / static_cast<double>(n) - mean * mean, 0.0);
              out.value = vol * mean;
              out.abs_error_bound = vol * std::sqrt(var / static_cast<double>(n));
            }
          }
        }
      },
      mu0.variant());
  return out;
}

// ---------------------------------------------------------------------------
// Void probabilities and count p.g.f.

// G(r) = exp(-lambda I(B_r; alpha)) at each radius.
inline ContactCurve analytic_contact(const TasParameters& params, std::span<const double> radii,
                                     const IntegrationDomain& domain = FullSpace{},
                                     const QuadratureOptions& q = {}) {
  const std::vector<double> r = validated_radii(radii);
  std::vector<double> g(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double cov = coverage_integral(params.mu0, r[i], params.alpha, domain, q).value;
    g[i] = std::exp(-params.lambda * cov);
  }
  return ContactCurve(r, std::move(g));
}

// E z^{Phi(B_r)} = exp(-lambda (1 - z)^alpha I(B_r; alpha)).
inline double count_pgf(const TasParameters& params, double radius, double z,
                        const IntegrationDomain& domain = FullSpace{},
                        const QuadratureOptions& q = {}) {
  if (!(z >= 0.0 && z <= 1.0)) throw DomainError("z must lie in [0, 1]");
  const double cov = coverage_integral(params.mu0, radius, params.alpha, domain, q).value;
  const double scale = pow_alpha(1.0 - z, params.alpha);
  return std::exp(-params.lambda * scale * cov);
}

// Contact curve of p o Phi: the centre intensity becomes lambda p^alpha.
inline ContactCurve thinned_contact_analytic(const TasParameters& params, double p,
                                             std::span<const double> radii,
                                             const IntegrationDomain& domain = FullSpace{},
                                             const QuadratureOptions& q = {}) {
  if (!(p > 0.0 && p <= 1.0)) throw DomainError("retention probability must lie in (0, 1]");
  const std::vector<double> r = validated_radii(radii);
  const double scale = pow_alpha(p, params.alpha);
  std::vector<double> g(r.size());
  for (std::size_t i = 0; i < r.size(); ++i) {
    const double cov = coverage_integral(params.mu0, r[i], params.alpha, domain, q).value;
    g[i] = std::exp(-params.lambda * scale * cov);
  }
  return ContactCurve(r, std::move(g));
}

}  // namespace tas
