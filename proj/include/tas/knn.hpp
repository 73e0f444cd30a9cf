#pragma once

// Exact nearest-neighbour queries over a point set. Distances are produced by
// euclidean_distance() on the original coordinates, so results are
// bit-identical to a brute-force scan; the index only prunes candidates.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <queue>
#include <span>
#include <vector>

#include "tas/core.hpp"

namespace tas {

class NearestNeighbours {
 public:
  NearestNeighbours(std::span<const double> coords, std::size_t dim)
      : dim_(dim), coords_(coords.begin(), coords.end()) {
    if (dim_ == 0) throw DomainError("dimension must be at least 1");
    n_ = coords_.size() / dim_;
    if (dim_ == 1) {
      std::sort(coords_.begin(), coords_.end());
    } else {
      order_.resize(n_);
      std::iota(order_.begin(), order_.end(), std::size_t{0});
      if (n_ > 0) build(0, n_);
    }
  }

  std::size_t size() const noexcept { return n_; }
  std::size_t dim() const noexcept { return dim_; }

  // The min(k, size()) smallest distances from q, ascending.
  std::vector<double> k_nearest(std::span<const double> q, std::size_t k) const {
    k = std::min(k, n_);
    std::vector<double> out;
    out.reserve(k);
    if (k == 0) return out;
    if (dim_ == 1) {
      const auto it = std::lower_bound(coords_.begin(), coords_.end(), q[0]);
      std::ptrdiff_t right = it - coords_.begin();
      std::ptrdiff_t left = right - 1;
      const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(n_);
      while (out.size() < k) {
        const double dl = left >= 0 ? dist1(left, q) : std::numeric_limits<double>::infinity();
        const double dr = right < n ? dist1(right, q) : std::numeric_limits<double>::infinity();
        if (dl <= dr) {
          out.push_back(dl);
          --left;
        } else {
          out.push_back(dr);
          ++right;
        }
      }
      return out;
    }
    std::priority_queue<double> heap;  // squared distances, max on top
    search_knn(0, q, k, heap);
    out.resize(heap.size());
    for (std::size_t i = heap.size(); i-- > 0;) {
      out[i] = std::sqrt(heap.top());
      heap.pop();
    }
    return out;
  }

  // Number of points x with euclidean_distance(x, q) <= r.
  std::size_t count_within(std::span<const double> q, double r) const {
    if (n_ == 0) return 0;
    if (dim_ == 1) {
      const std::ptrdiff_t n = static_cast<std::ptrdiff_t>(n_);
      std::ptrdiff_t lo = std::lower_bound(coords_.begin(), coords_.end(), q[0] - r) - coords_.begin();
      std::ptrdiff_t hi = std::upper_bound(coords_.begin(), coords_.end(), q[0] + r) - coords_.begin();
      // Reconcile the arithmetic bounds with the exact distance predicate.
      while (lo > 0 && dist1(lo - 1, q) <= r) --lo;
      while (lo < hi && dist1(lo, q) > r) ++lo;
      while (hi < n && dist1(hi, q) <= r) ++hi;
      while (hi > lo && dist1(hi - 1, q) > r) --hi;
      return static_cast<std::size_t>(hi - lo);
    }
    return search_count(0, q, r);
  }

 private:
  struct Node {
    std::size_t begin, end;  // range in order_
    std::size_t axis = 0;
    double split = 0.0;
    std::size_t left = 0, right = 0;  // child node ids; 0 = none (root is 0)
    bool leaf = true;
  };

  static constexpr std::size_t kLeafSize = 16;

  double dist1(std::ptrdiff_t i, std::span<const double> q) const {
    return euclidean_distance(std::span<const double>(&coords_[static_cast<std::size_t>(i)], 1), q);
  }

  std::span<const double> pt(std::size_t i) const { return {coords_.data() + i * dim_, dim_}; }

  std::size_t build(std::size_t begin, std::size_t end) {
    const std::size_t id = nodes_.size();
    nodes_.push_back(Node{begin, end});
    if (end - begin <= kLeafSize) return id;
    std::vector<double> lo(dim_, std::numeric_limits<double>::infinity());
    std::vector<double> hi(dim_, -std::numeric_limits<double>::infinity());
    for (std::size_t i = begin; i < end; ++i) {
      const auto p = pt(order_[i]);
      for (std::size_t k = 0; k < dim_; ++k) {
        lo[k] = std::min(lo[k], p[k]);
        hi[k] = std::max(hi[k], p[k]);
      }
    }
    std::size_t axis = 0;
    for (std::size_t k = 1; k < dim_; ++k)
      if (hi[k] - lo[k] > hi[axis] - lo[axis]) axis = k;
    if (!(hi[axis] > lo[axis])) return id;  // all coincident
    const std::size_t mid = begin + (end - begin) / 2;
    std::nth_element(order_.begin() + static_cast<std::ptrdiff_t>(begin),
                     order_.begin() + static_cast<std::ptrdiff_t>(mid),
                     order_.begin() + static_cast<std::ptrdiff_t>(end),
                     [&](std::size_t a, std::size_t b) { return pt(a)[axis] < pt(b)[axis]; });
    const double split = pt(order_[mid])[axis];
    const std::size_t l = build(begin, mid);
    const std::size_t r = build(mid, end);
    Node& node = nodes_[id];
    node.leaf = false;
    node.axis = axis;
    node.split = split;
    node.left = l;
    node.right = r;
    return id;
  }

  void search_knn(std::size_t id, std::span<const double> q, std::size_t k,
                  std::priority_queue<double>& heap) const {
    const Node& node = nodes_[id];
    if (node.leaf) {
      for (std::size_t i = node.begin; i < node.end; ++i) {
        const double s = squared_distance(pt(order_[i]), q);
        if (heap.size() < k) heap.push(s);
        else if (s < heap.top()) {
          heap.pop();
          heap.push(s);
        }
      }
      return;
    }
    const double diff = q[node.axis] - node.split;
    const std::size_t near = diff < 0.0 ? node.left : node.right;
    const std::size_t far = diff < 0.0 ? node.right : node.left;
    search_knn(near, q, k, heap);
    // Far-side points are at least |diff| away.
    if (heap.size() < k || !(std::fabs(diff) > std::sqrt(heap.top()))) search_knn(far, q, k, heap);
  }

  std::size_t search_count(std::size_t id, std::span<const double> q, double r) const {
    const Node& node = nodes_[id];
    if (node.leaf) {
      std::size_t c = 0;
      for (std::size_t i = node.begin; i < node.end; ++i)
        if (euclidean_distance(pt(order_[i]), q) <= r) ++c;
      return c;
    }
    const double diff = q[node.axis] - node.split;
    const std::size_t near = diff < 0.0 ? node.left : node.right;
    const std::size_t far = diff < 0.0 ? node.right : node.left;
    std::size_t c = search_count(near, q, r);
    if (!(std::fabs(diff) > r)) c += search_count(far, q, r);
    return c;
  }

  std::size_t dim_;
  std::size_t n_ = 0;
  std::vector<double> coords_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
};

// O(n m) reference: the k smallest distances from q, ascending.
inline std::vector<double> brute_force_k_nearest(std::span<const double> coords, std::size_t dim,
                                                 std::span<const double> q, std::size_t k) {
  const std::size_t n = coords.size() / dim;
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i) d[i] = euclidean_distance(coords.subspan(i * dim, dim), q);
  k = std::min(k, n);
  std::partial_sort(d.begin(), d.begin() + static_cast<std::ptrdiff_t>(k), d.end());
  d.resize(k);
  return d;
}

}  // namespace tas
