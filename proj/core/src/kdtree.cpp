#include "copent/kdtree.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "copent/error.hpp"

namespace copent {

namespace {

// Fixed-capacity ascending list of the k smallest distances seen so far.
class BestK {
 public:
  explicit BestK(int k) : k_(static_cast<std::size_t>(k)) { d_.reserve(k_ + 1); }

  double worst() const {
    return d_.size() < k_ ? std::numeric_limits<double>::infinity() : d_.back();
  }

  void offer(double dist) {
    if (d_.size() == k_ && dist >= d_.back()) return;
    d_.insert(std::upper_bound(d_.begin(), d_.end(), dist), dist);
    if (d_.size() > k_) d_.pop_back();
  }

 private:
  std::size_t k_;
  std::vector<double> d_;
};

}  // namespace

double distance(std::span<const double> a, std::span<const double> b, Metric metric) {
  if (metric == Metric::chebyshev) {
    double m = 0.0;
    for (std::size_t j = 0; j < a.size(); ++j) m = std::max(m, std::abs(a[j] - b[j]));
    return m;
  }
  double s = 0.0;
  for (std::size_t j = 0; j < a.size(); ++j) {
    const double d = a[j] - b[j];
    s += d * d;
  }
  return std::sqrt(s);
}

KdTree::KdTree(const Matrix& points, Metric metric, std::size_t leaf_size)
    : points_(points), metric_(metric), leaf_size_(std::max<std::size_t>(leaf_size, 1)) {
  if (points.rows > std::numeric_limits<std::uint32_t>::max()) throw Error("kd-tree: too many points");
  index_.resize(points.rows);
  std::iota(index_.begin(), index_.end(), 0u);
  if (!index_.empty()) build(0, static_cast<std::uint32_t>(index_.size()));
}

std::int32_t KdTree::build(std::uint32_t begin, std::uint32_t end) {
  const auto id = static_cast<std::int32_t>(nodes_.size());
  nodes_.push_back(Node{begin, end});
  if (end - begin <= leaf_size_) return id;

  // Split on the widest dimension at the median.
  std::uint32_t best_dim = 0;
  double best_spread = -1.0;
  for (std::uint32_t d = 0; d < points_.cols; ++d) {
    double lo = std::numeric_limits<double>::infinity(), hi = -lo;
    for (std::uint32_t p = begin; p < end; ++p) {
      const double v = points_(index_[p], d);
      lo = std::min(lo, v);
      hi = std::max(hi, v);
    }
    if (hi - lo > best_spread) {
      best_spread = hi - lo;
      best_dim = d;
    }
  }
  if (best_spread <= 0.0) return id;  // all points coincide

  const std::uint32_t mid = begin + (end - begin) / 2;
  std::nth_element(index_.begin() + begin, index_.begin() + mid, index_.begin() + end,
                   [&](std::uint32_t a, std::uint32_t b) { return points_(a, best_dim) < points_(b, best_dim); });
  const double split = points_(index_[mid], best_dim);

  const std::int32_t left = build(begin, mid);
  const std::int32_t right = build(mid, end);
  Node& node = nodes_[static_cast<std::size_t>(id)];
  node.dim = best_dim;
  node.split = split;
  node.left = left;
  node.right = right;
  return id;
}

double KdTree::kth_distance(std::size_t i, int k) const {
  if (k < 1 || static_cast<std::size_t>(k) >= points_.rows)
    throw Error("kd-tree: k must satisfy 1 <= k < number of points");
  const auto query = points_.row(i);
  BestK best(k);

  // Explicit stack of (node, lower bound on distance to its region).
  std::vector<std::pair<std::int32_t, double>> stack;
  stack.reserve(64);
  stack.emplace_back(0, 0.0);
  while (!stack.empty()) {
    auto [id, bound] = stack.back();
    stack.pop_back();
    if (bound >= best.worst()) continue;
    const Node& node = nodes_[static_cast<std::size_t>(id)];
    if (node.left < 0) {
      for (std::uint32_t p = node.begin; p < node.end; ++p) {
        const std::uint32_t j = index_[p];
        if (j == i) continue;
        best.offer(distance(query, points_.row(j), metric_));
      }
      continue;
    }
    // Left holds coordinates <= split, right >= split.
    const double diff = query[node.dim] - node.split;
    const std::int32_t near = diff <= 0.0 ? node.left : node.right;
    const std::int32_t far = diff <= 0.0 ? node.right : node.left;
    // Far side is at least |diff| away along one axis, under either metric.
    stack.emplace_back(far, std::max(bound, std::abs(diff)));
    stack.emplace_back(near, bound);
  }
  return best.worst();
}

std::vector<double> kth_distances_brute(const Matrix& points, int k, Metric metric) {
  const std::size_t n = points.rows;
  if (k < 1 || static_cast<std::size_t>(k) >= n) throw Error("knn: k must satisfy 1 <= k < number of points");
  std::vector<double> out(n);
  std::vector<double> dist;
  dist.reserve(n);
  for (std::size_t i = 0; i < n; ++i) {
    dist.clear();
    for (std::size_t j = 0; j < n; ++j)
      if (j != i) dist.push_back(distance(points.row(i), points.row(j), metric));
    std::nth_element(dist.begin(), dist.begin() + (k - 1), dist.end());
    out[i] = dist[static_cast<std::size_t>(k - 1)];
  }
  return out;
}

std::vector<double> kth_distances(const Matrix& points, int k, Metric metric) {
  if (points.rows < 64 || points.cols > 20) return kth_distances_brute(points, k, metric);
  KdTree tree(points, metric);
  std::vector<double> out(points.rows);
  for (std::size_t i = 0; i < points.rows; ++i) out[i] = tree.kth_distance(i, k);
  return out;
}

}  // namespace copent
