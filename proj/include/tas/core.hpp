#pragma once

// Domain types shared by every part of the toolkit: observation windows,
// cluster distributions, model parameters, point patterns, distance
// profiles and contact curves.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <cstdio>
#include <limits>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string>
#include <utility>
#include <variant>
#include <vector>

namespace tas {

// ---------------------------------------------------------------------------
// Errors

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Argument outside the mathematical domain of an operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

// Structurally valid input that violates a type invariant.
class ValidationError : public Error {
 public:
  using Error::Error;
};

class ParseError : public Error {
 public:
  ParseError(std::size_t line, const std::string& what)
      : Error("line " + std::to_string(line) + ": " + what), line_(line) {}
  std::size_t line() const noexcept { return line_; }

 private:
  std::size_t line_;
};

class NumericalError : public Error {
 public:
  NumericalError(const std::string& what, double achieved_bound)
      : Error(what), achieved_bound_(achieved_bound) {}
  double achieved_bound() const noexcept { return achieved_bound_; }

 private:
  double achieved_bound_;
};

// Data carries no information for the requested estimator.
class DegenerateDataError : public Error {
 public:
  using Error::Error;
};

using Point = std::vector<double>;

// x^a with 0^a = 0 by continuity, evaluated as exp(a log x).
inline double pow_alpha(double x, double a) {
  if (x <= 0.0) return 0.0;
  return std::exp(a * std::log(x));
}

inline double squared_distance(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  for (std::size_t k = 0; k < a.size(); ++k) {
    const double d = a[k] - b[k];
    s += d * d;
  }
  return s;
}

// The single distance routine used by brute force and indexed searches alike.
inline double euclidean_distance(std::span<const double> a, std::span<const double> b) {
  return std::sqrt(squared_distance(a, b));
}

// 12 significant digits, the serialization precision for coordinates.
inline std::string format_coord(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.12g", v);
  return buf;
}

// ---------------------------------------------------------------------------
// Window: axis-aligned observation box.

class Window {
 public:
  Window(std::vector<double> lower, std::vector<double> upper)
      : lower_(std::move(lower)), upper_(std::move(upper)) {
    if (lower_.empty()) throw ValidationError("window dimension must be at least 1");
    if (lower_.size() != upper_.size())
      throw ValidationError("window lower/upper dimension mismatch");
    for (std::size_t k = 0; k < lower_.size(); ++k) {
      if (!std::isfinite(lower_[k]) || !std::isfinite(upper_[k]) || !(upper_[k] > lower_[k]))
        throw ValidationError("window requires finite upper > lower in every coordinate");
    }
  }

  static Window interval(double lo, double hi) { return Window({lo}, {hi}); }
  static Window cube(double lo, double hi, std::size_t dim) {
    return Window(std::vector<double>(dim, lo), std::vector<double>(dim, hi));
  }

  std::size_t dim() const noexcept { return lower_.size(); }
  const std::vector<double>& lower() const noexcept { return lower_; }
  const std::vector<double>& upper() const noexcept { return upper_; }
  double side(std::size_t k) const { return upper_[k] - lower_[k]; }

  double volume() const {
    double v = 1.0;
    for (std::size_t k = 0; k < dim(); ++k) v *= side(k);
    return v;
  }

  double max_side() const {
    double m = 0.0;
    for (std::size_t k = 0; k < dim(); ++k) m = std::max(m, side(k));
    return m;
  }

  bool contains(std::span<const double> x) const {
    if (x.size() != dim()) return false;
    for (std::size_t k = 0; k < dim(); ++k)
      if (!(x[k] >= lower_[k] && x[k] <= upper_[k])) return false;
    return true;
  }

  // Euclidean distance from an interior point to the complement of the box.
  double boundary_distance(std::span<const double> x) const {
    double d = std::numeric_limits<double>::infinity();
    for (std::size_t k = 0; k < dim(); ++k)
      d = std::min({d, x[k] - lower_[k], upper_[k] - x[k]});
    return std::max(d, 0.0);
  }

  Window dilated(double by) const {
    std::vector<double> lo = lower_, hi = upper_;
    for (std::size_t k = 0; k < dim(); ++k) {
      lo[k] -= by;
      hi[k] += by;
    }
    return Window(std::move(lo), std::move(hi));
  }

  // Throws ValidationError when the erosion leaves nothing.
  Window eroded(double by) const { return dilated(-by); }

  bool operator==(const Window&) const = default;

 private:
  std::vector<double> lower_;
  std::vector<double> upper_;
};

// ---------------------------------------------------------------------------
// ClusterDistribution: the law of a cluster's points relative to its centre.

struct UniformInterval {
  double halfwidth;
};

struct IsotropicGaussian {
  std::size_t dimension;
  double sigma;
};

// Points stored row-major, equal weights.
struct EmpiricalCloud {
  std::size_t dimension;
  std::vector<double> coords;

  std::size_t size() const { return dimension == 0 ? 0 : coords.size() / dimension; }
  std::span<const double> point(std::size_t i) const {
    return {coords.data() + i * dimension, dimension};
  }
};

class ClusterDistribution {
 public:
  using Variant = std::variant<UniformInterval, IsotropicGaussian, EmpiricalCloud>;

  static ClusterDistribution uniform(double halfwidth) {
    if (!(halfwidth > 0.0) || !std::isfinite(halfwidth))
      throw ValidationError("uniform halfwidth must be positive");
    return ClusterDistribution(UniformInterval{halfwidth});
  }

  static ClusterDistribution gaussian(std::size_t dimension, double sigma) {
    if (dimension < 1) throw ValidationError("gaussian dimension must be at least 1");
    if (!(sigma > 0.0) || !std::isfinite(sigma))
      throw ValidationError("gaussian sigma must be positive");
    return ClusterDistribution(IsotropicGaussian{dimension, sigma});
  }

  static ClusterDistribution empirical(std::size_t dimension, std::vector<double> coords) {
    if (dimension < 1) throw ValidationError("cloud dimension must be at least 1");
    if (coords.empty()) throw ValidationError("empirical cloud must be non-empty");
    if (coords.size() % dimension != 0)
      throw ValidationError("cloud coordinate count not a multiple of dimension");
    for (double c : coords)
      if (!std::isfinite(c)) throw ValidationError("cloud coordinates must be finite");
    return ClusterDistribution(EmpiricalCloud{dimension, std::move(coords)});
  }

  const Variant& variant() const noexcept { return v_; }

  std::size_t dim() const {
    return std::visit(
        [](const auto& m) -> std::size_t {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, UniformInterval>) return 1;
          else return m.dimension;
        },
        v_);
  }

  // Buffer that makes buffered simulation exact (uniform, cloud) or
  // truncation-biased below 1e-8 per point (Gaussian, 6 sigma).
  double recommended_buffer() const {
    return std::visit(
        [](const auto& m) -> double {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, UniformInterval>) {
            return m.halfwidth;
          } else if constexpr (std::is_same_v<T, IsotropicGaussian>) {
            return 6.0 * m.sigma;
          } else {
            double r = 0.0;
            for (std::size_t i = 0; i < m.size(); ++i) {
              double s = 0.0;
              for (double c : m.point(i)) s += c * c;
              r = std::max(r, std::sqrt(s));
            }
            return r;
          }
        },
        v_);
  }

  std::string describe() const {
    return std::visit(
        [](const auto& m) -> std::string {
          using T = std::decay_t<decltype(m)>;
          if constexpr (std::is_same_v<T, UniformInterval>)
            return "uniform:" + format_coord(m.halfwidth);
          else if constexpr (std::is_same_v<T, IsotropicGaussian>)
            return "gauss:" + std::to_string(m.dimension) + ":" + format_coord(m.sigma);
          else
            return "cloud[" + std::to_string(m.size()) + "]";
        },
        v_);
  }

 private:
  explicit ClusterDistribution(Variant v) : v_(std::move(v)) {}
  Variant v_;
};

// ---------------------------------------------------------------------------

struct TasParameters {
  double alpha;
  double lambda;
  ClusterDistribution mu0;

  TasParameters(double alpha_, double lambda_, ClusterDistribution mu0_)
      : alpha(alpha_), lambda(lambda_), mu0(std::move(mu0_)) {
    if (!(alpha > 0.0 && alpha <= 1.0))
      throw DomainError("alpha must lie in (0, 1], got " + format_coord(alpha));
    if (!(lambda > 0.0) || !std::isfinite(lambda))
      throw DomainError("lambda must be positive, got " + format_coord(lambda));
  }

  std::size_t dim() const { return mu0.dim(); }
};

// ---------------------------------------------------------------------------
// PointPattern: points observed inside a window, optionally labeled.

class PointPattern {
 public:
  explicit PointPattern(Window window) : window_(std::move(window)) {}

  PointPattern(Window window, std::vector<double> coords,
               std::optional<std::vector<std::string>> labels = std::nullopt)
      : window_(std::move(window)), coords_(std::move(coords)), labels_(std::move(labels)) {
    const std::size_t d = window_.dim();
    if (coords_.size() % d != 0)
      throw ValidationError("coordinate count not a multiple of window dimension");
    if (labels_ && labels_->size() != size())
      throw ValidationError("label count does not match point count");
    for (std::size_t i = 0; i < size(); ++i)
      if (!window_.contains(point(i)))
        throw ValidationError("point " + std::to_string(i) + " lies outside the window");
  }

  const Window& window() const noexcept { return window_; }
  std::size_t dim() const noexcept { return window_.dim(); }
  std::size_t size() const noexcept { return coords_.size() / window_.dim(); }
  bool empty() const noexcept { return coords_.empty(); }

  std::span<const double> point(std::size_t i) const {
    return {coords_.data() + i * dim(), dim()};
  }
  const std::vector<double>& coords() const noexcept { return coords_; }

  bool has_labels() const noexcept { return labels_.has_value(); }
  const std::vector<std::string>& labels() const {
    if (!labels_) throw ValidationError("pattern carries no cluster labels");
    return *labels_;
  }

  // Point indices grouped by label, in order of first appearance.
  std::vector<std::pair<std::string, std::vector<std::size_t>>> clusters() const {
    const auto& lab = labels();
    std::map<std::string, std::size_t> slot;
    std::vector<std::pair<std::string, std::vector<std::size_t>>> out;
    for (std::size_t i = 0; i < lab.size(); ++i) {
      auto [it, inserted] = slot.try_emplace(lab[i], out.size());
      if (inserted) out.push_back({lab[i], {}});
      out[it->second].second.push_back(i);
    }
    return out;
  }

  std::vector<std::size_t> cluster_sizes() const {
    std::vector<std::size_t> sizes;
    for (const auto& [name, members] : clusters()) sizes.push_back(members.size());
    return sizes;
  }

 private:
  Window window_;
  std::vector<double> coords_;
  std::optional<std::vector<std::string>> labels_;
};

// ---------------------------------------------------------------------------
// DistanceProfile: per test point, the ascending K nearest pattern distances.

struct DistanceProfile {
  std::size_t dim = 1;
  std::size_t depth = 0;                   // K
  std::vector<double> test_points;         // row-major, n x dim
  std::vector<double> distances;           // row-major, n x depth, rows ascending
  std::vector<double> boundary_distances;  // test point to window complement
  bool depth_clamped = false;              // requested depth exceeded pattern size

  std::size_t size() const { return dim == 0 ? 0 : test_points.size() / dim; }
  std::span<const double> row(std::size_t i) const {
    return {distances.data() + i * depth, depth};
  }
  std::span<const double> test_point(std::size_t i) const {
    return {test_points.data() + i * dim, dim};
  }
  double nearest(std::size_t i) const { return distances[i * depth]; }
};

// ---------------------------------------------------------------------------

class ContactCurve {
 public:
  ContactCurve() = default;
  ContactCurve(std::vector<double> radii, std::vector<double> values)
      : radii_(std::move(radii)), values_(std::move(values)) {
    if (radii_.size() != values_.size())
      throw ValidationError("contact curve radii/values length mismatch");
    for (std::size_t i = 0; i < radii_.size(); ++i) {
      if (!(radii_[i] >= 0.0)) throw ValidationError("contact curve radius must be >= 0");
      if (i > 0 && !(radii_[i] > radii_[i - 1]))
        throw ValidationError("contact curve radii must be strictly increasing");
      if (!(values_[i] >= 0.0 && values_[i] <= 1.0))
        throw ValidationError("contact curve values must lie in [0, 1]");
    }
  }

  std::size_t size() const noexcept { return radii_.size(); }
  const std::vector<double>& radii() const noexcept { return radii_; }
  const std::vector<double>& values() const noexcept { return values_; }

 private:
  std::vector<double> radii_;
  std::vector<double> values_;
};

// Strictly increasing copy of a radius list; throws on non-positive radii.
inline std::vector<double> validated_radii(std::span<const double> radii) {
  std::vector<double> r(radii.begin(), radii.end());
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (!(r[i] > 0.0) || !std::isfinite(r[i])) throw DomainError("radii must be positive");
    if (i > 0 && !(r[i] > r[i - 1])) throw DomainError("radii must be strictly increasing");
  }
  return r;
}

}  // namespace tas
