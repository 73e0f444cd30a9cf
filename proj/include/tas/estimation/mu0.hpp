#pragma once

// Recovery of the cluster law mu0: pooled recentred clusters when cluster
// identities are known, a Gaussian mixture fitted by EM when they are not.

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <string>
#include <variant>
#include <vector>

#include <Eigen/Dense>

#include "tas/core.hpp"
#include "tas/random.hpp"

namespace tas {

// ---------------------------------------------------------------------------
// Empirical estimate from labeled clusters

struct AllLabeled {
  std::size_t min_size = 2;
};
struct LargestK {
  std::size_t k;
};
struct NamedClusters {
  std::vector<std::string> labels;
};

using ClusterSelection = std::variant<AllLabeled, LargestK, NamedClusters>;

// Each selected cluster is shifted by its centre of mass (coordinate mean);
// the shifted points are pooled with equal weights.
inline ClusterDistribution estimate_mu0_empirical(const PointPattern& pattern,
                                                  const ClusterSelection& selection) {
  if (!pattern.has_labels())
    throw DomainError("empirical mu0 needs cluster labels; run the EM mixture fit instead");
  auto clusters = pattern.clusters();
  std::vector<const std::vector<std::size_t>*> chosen;
  std::visit(
      [&](const auto& s) {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, AllLabeled>) {
          for (const auto& [name, members] : clusters)
            if (members.size() >= std::max<std::size_t>(2, s.min_size)) chosen.push_back(&members);
        } else if constexpr (std::is_same_v<T, LargestK>) {
          std::stable_sort(clusters.begin(), clusters.end(), [](const auto& a, const auto& b) {
            return a.second.size() > b.second.size();
          });
          for (std::size_t i = 0; i < std::min(s.k, clusters.size()); ++i)
            if (clusters[i].second.size() >= 2) chosen.push_back(&clusters[i].second);
        } else {
          for (const auto& want : s.labels) {
            const auto it = std::find_if(clusters.begin(), clusters.end(),
                                         [&](const auto& c) { return c.first == want; });
            if (it == clusters.end()) throw DomainError("no cluster labeled '" + want + "'");
            if (it->second.size() < 2)
              throw DomainError("cluster '" + want + "' has fewer than 2 points");
            chosen.push_back(&it->second);
          }
        }
      },
      selection);
  if (chosen.empty()) throw DegenerateDataError("no cluster with at least 2 points selected");

  const std::size_t d = pattern.dim();
  std::vector<double> cloud;
  for (const auto* members : chosen) {
    std::vector<double> centre(d, 0.0);
    for (std::size_t i : *members)
      for (std::size_t k = 0; k < d; ++k) centre[k] += pattern.point(i)[k];
    for (double& c : centre) c /= static_cast<double>(members->size());
    for (std::size_t i : *members)
      for (std::size_t k = 0; k < d; ++k) cloud.push_back(pattern.point(i)[k] - centre[k]);
  }
  return ClusterDistribution::empirical(d, std::move(cloud));
}

// ---------------------------------------------------------------------------
// Gaussian mixture by EM

struct MixtureComponent {
  double weight = 0.0;
  std::vector<double> mean;
  std::vector<double> covariance;  // row-major d x d
};

struct MixtureModel {
  std::size_t dim = 0;
  std::vector<MixtureComponent> components;
  double noise_weight = 0.0;
  double noise_density = 0.0;  // 1 / |W| when a noise component is fitted
  double log_likelihood = 0.0;
  double bic = 0.0;
  int iterations = 0;
  bool converged = false;
  std::size_t reseeds = 0;
  std::size_t dropped = 0;
  std::vector<double> log_likelihood_trace;  // one entry per E-step
  std::vector<std::pair<std::size_t, double>> bic_by_k;
};

struct EmOptions {
  std::size_t k_min = 1;
  std::size_t k_max = 5;
  bool noise = false;
  int max_iter = 500;
  double tol = 1e-8;  // per-point log-likelihood gain
};

// Isotropic Gaussian mu0 implied by the mixture: sigma^2 is the
// weight-averaged per-coordinate variance of the components.
inline ClusterDistribution mixture_to_mu0(const MixtureModel& m) {
  if (m.components.empty()) throw DegenerateDataError("mixture has no components");
  double var = 0.0, w = 0.0;
  for (const auto& c : m.components) {
    double tr = 0.0;
    for (std::size_t k = 0; k < m.dim; ++k) tr += c.covariance[k * m.dim + k];
    var += c.weight * tr / static_cast<double>(m.dim);
    w += c.weight;
  }
  return ClusterDistribution::gaussian(m.dim, std::sqrt(var / w));
}

namespace detail {

struct GaussComp {
  double weight;
  Eigen::VectorXd mean;
  Eigen::MatrixXd cov;
  bool reseeded = false;
};

class EmRun {
 public:
  EmRun(const Eigen::MatrixXd& x, const Window& w, const EmOptions& opt)
      : x_(x), n_(x.rows()), d_(x.cols()), opt_(opt) {
    const double scale = w.max_side();
    ridge_ = 1e-6 * scale * scale;
    log_noise_ = -std::log(w.volume());
  }

  MixtureModel fit(std::size_t k, RandomSource& rng) {
    init(k, rng);
    MixtureModel out;
    out.dim = static_cast<std::size_t>(d_);
    double prev = -std::numeric_limits<double>::infinity();
    for (out.iterations = 0; out.iterations < opt_.max_iter; ++out.iterations) {
      const double ll = e_step();
      out.log_likelihood_trace.push_back(ll);
      if (ll - prev < opt_.tol * static_cast<double>(n_)) {
        out.converged = true;
        break;
      }
      prev = ll;
      const int structural = m_step(out);
      if (structural > 0) prev = -std::numeric_limits<double>::infinity();
    }
    out.log_likelihood = out.log_likelihood_trace.back();
    for (const auto& c : comps_) {
      MixtureComponent mc;
      mc.weight = c.weight;
      mc.mean.assign(c.mean.data(), c.mean.data() + d_);
      for (Eigen::Index r = 0; r < d_; ++r)
        for (Eigen::Index s = 0; s < d_; ++s) mc.covariance.push_back(c.cov(r, s));
      out.components.push_back(std::move(mc));
    }
    out.noise_weight = opt_.noise ? noise_weight_ : 0.0;
    out.noise_density = opt_.noise ? std::exp(log_noise_) : 0.0;
    const double kk = static_cast<double>(comps_.size());
    const double dd = static_cast<double>(d_);
    const double params = kk * (dd + dd * (dd + 1.0) / 2.0) + (kk - 1.0) + (opt_.noise ? 1.0 : 0.0);
    out.bic = -2.0 * out.log_likelihood + params * std::log(static_cast<double>(n_));
    return out;
  }

 private:
  // Farthest-point seeding, then hard assignment for initial moments.
  void init(std::size_t k, RandomSource& rng) {
    std::vector<Eigen::Index> seeds{static_cast<Eigen::Index>(rng.below(static_cast<std::uint64_t>(n_)))};
    Eigen::VectorXd mind = (x_.rowwise() - x_.row(seeds[0])).rowwise().squaredNorm();
    while (seeds.size() < k) {
      Eigen::Index far;
      mind.maxCoeff(&far);
      seeds.push_back(far);
      mind = mind.cwiseMin((x_.rowwise() - x_.row(far)).rowwise().squaredNorm());
    }
    std::vector<std::vector<Eigen::Index>> members(k);
    for (Eigen::Index i = 0; i < n_; ++i) {
      std::size_t best = 0;
      double bd = std::numeric_limits<double>::infinity();
      for (std::size_t j = 0; j < k; ++j) {
        const double dd = (x_.row(i) - x_.row(seeds[j])).squaredNorm();
        if (dd < bd) {
          bd = dd;
          best = j;
        }
      }
      members[best].push_back(i);
    }
    const Eigen::VectorXd gmean = x_.colwise().mean();
    const Eigen::MatrixXd centred = x_.rowwise() - gmean.transpose();
    const Eigen::MatrixXd gcov = centred.transpose() * centred / static_cast<double>(n_);
    const double share = opt_.noise ? 0.9 : 1.0;
    noise_weight_ = opt_.noise ? 0.1 : 0.0;
    comps_.clear();
    for (std::size_t j = 0; j < k; ++j) {
      GaussComp c;
      c.weight = share * static_cast<double>(members[j].size()) / static_cast<double>(n_);
      c.mean = x_.row(seeds[j]).transpose();
      if (members[j].size() > static_cast<std::size_t>(d_)) {
        c.mean.setZero();
        for (auto i : members[j]) c.mean += x_.row(i).transpose();
        c.mean /= static_cast<double>(members[j].size());
        c.cov = Eigen::MatrixXd::Zero(d_, d_);
        for (auto i : members[j]) {
          const Eigen::VectorXd dv = x_.row(i).transpose() - c.mean;
          c.cov += dv * dv.transpose();
        }
        c.cov /= static_cast<double>(members[j].size());
      } else {
        c.cov = gcov / static_cast<double>(k * k);
      }
      regularise(c.cov);
      if (c.weight <= 0.0) c.weight = share / static_cast<double>(n_);
      comps_.push_back(std::move(c));
    }
  }

  void regularise(Eigen::MatrixXd& cov) const {
    cov = 0.5 * (cov + cov.transpose());
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(cov, Eigen::EigenvaluesOnly);
    if (!(es.eigenvalues().minCoeff() > ridge_)) cov += ridge_ * Eigen::MatrixXd::Identity(d_, d_);
  }

  // Log densities into logp_ (n x (K [+1])); returns the total log-likelihood
  // and leaves responsibilities in resp_.
  double e_step() {
    const std::size_t k = comps_.size();
    const Eigen::Index cols = static_cast<Eigen::Index>(k) + (opt_.noise ? 1 : 0);
    resp_.resize(n_, cols);
    const double log2pi = std::log(2.0 * std::numbers::pi);
    for (std::size_t j = 0; j < k; ++j) {
      const auto& c = comps_[j];
      Eigen::LLT<Eigen::MatrixXd> llt(c.cov);
      const Eigen::MatrixXd L = llt.matrixL();
      const double logdet = 2.0 * L.diagonal().array().log().sum();
      const Eigen::MatrixXd centred = (x_.rowwise() - c.mean.transpose()).transpose();
      const Eigen::MatrixXd z = L.triangularView<Eigen::Lower>().solve(centred);
      const Eigen::VectorXd maha = z.colwise().squaredNorm().transpose();
      resp_.col(static_cast<Eigen::Index>(j)) =
          (std::log(c.weight) - 0.5 * (static_cast<double>(d_) * log2pi + logdet)) -
          0.5 * maha.array();
    }
    if (opt_.noise)
      resp_.col(cols - 1).setConstant(std::log(std::max(noise_weight_, 1e-300)) + log_noise_);
    double ll = 0.0;
    for (Eigen::Index i = 0; i < n_; ++i) {
      const double m = resp_.row(i).maxCoeff();
      const double lse = m + std::log((resp_.row(i).array() - m).exp().sum());
      ll += lse;
      point_ll_.resize(n_);
      point_ll_(i) = lse;
      resp_.row(i) = (resp_.row(i).array() - lse).exp();
    }
    return ll;
  }

  // Returns the number of structural changes (reseeds or drops).
  int m_step(MixtureModel& out) {
    int structural = 0;
    const double tiny = 1e-10 * static_cast<double>(n_);
    for (std::size_t j = 0; j < comps_.size();) {
      auto& c = comps_[j];
      const Eigen::VectorXd r = resp_.col(static_cast<Eigen::Index>(j));
      const double nk = r.sum();
      if (!(nk > tiny)) {
        ++structural;
        if (!c.reseeded) {
          Eigen::Index worst;
          point_ll_.minCoeff(&worst);
          c.mean = x_.row(worst).transpose();
          c.weight = 1.0 / static_cast<double>(n_);
          c.reseeded = true;
          ++out.reseeds;
          ++j;
        } else {
          comps_.erase(comps_.begin() + static_cast<std::ptrdiff_t>(j));
          // Drop the matching responsibility column so later indices align.
          Eigen::MatrixXd kept(n_, resp_.cols() - 1);
          kept << resp_.leftCols(static_cast<Eigen::Index>(j)),
              resp_.rightCols(resp_.cols() - static_cast<Eigen::Index>(j) - 1);
          resp_ = std::move(kept);
          ++out.dropped;
        }
        continue;
      }
      c.weight = nk / static_cast<double>(n_);
      c.mean = (x_.transpose() * r) / nk;
      const Eigen::MatrixXd centred = x_.rowwise() - c.mean.transpose();
      c.cov = (centred.transpose() * r.asDiagonal() * centred) / nk;
      regularise(c.cov);
      ++j;
    }
    if (comps_.empty()) throw DegenerateDataError("EM lost every mixture component");
    if (opt_.noise) noise_weight_ = resp_.col(resp_.cols() - 1).sum() / static_cast<double>(n_);
    // Renormalise after reseeds or drops.
    double total = noise_weight_;
    for (const auto& c : comps_) total += c.weight;
    for (auto& c : comps_) c.weight /= total;
    noise_weight_ /= total;
    return structural;
  }

  const Eigen::MatrixXd& x_;
  Eigen::Index n_;
  Eigen::Index d_;
  EmOptions opt_;
  double ridge_ = 0.0;
  double log_noise_ = 0.0;
  double noise_weight_ = 0.0;
  std::vector<GaussComp> comps_;
  Eigen::MatrixXd resp_;
  Eigen::VectorXd point_ll_;
};

}  // namespace detail

// Fits a Gaussian mixture for every K in [k_min, k_max] and keeps the lowest
// BIC. The log-likelihood trace of the selected fit is nondecreasing between
// structural changes (reseeded or dropped components).
inline MixtureModel em_estimate_mu0(const PointPattern& pattern, const EmOptions& opt,
                                    RandomSource& rng) {
  if (opt.k_min < 1 || opt.k_max < opt.k_min) throw DomainError("invalid component range");
  if (pattern.size() < 2 * opt.k_min)
    throw DegenerateDataError("pattern too small for the requested number of components");
  const std::size_t n = pattern.size(), d = pattern.dim();
  Eigen::MatrixXd x(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(d));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < d; ++k)
      x(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(k)) = pattern.point(i)[k];

  detail::EmRun run(x, pattern.window(), opt);
  std::optional<MixtureModel> best;
  std::vector<std::pair<std::size_t, double>> bics;
  for (std::size_t k = opt.k_min; k <= std::min(opt.k_max, n / 2); ++k) {
    MixtureModel m = run.fit(k, rng);
    bics.emplace_back(k, m.bic);
    if (!best || m.bic < best->bic) best = std::move(m);
  }
  best->bic_by_k = std::move(bics);
  return *best;
}

}  // namespace tas
