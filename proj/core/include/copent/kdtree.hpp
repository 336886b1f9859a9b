#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "copent/matrix.hpp"

namespace copent {

enum class Metric { chebyshev, euclidean };

double distance(std::span<const double> a, std::span<const double> b, Metric metric);

// Exact k-nearest-neighbour index over the rows of a point matrix. The tree
// stores indices only; `points` must outlive it.
class KdTree {
 public:
  KdTree(const Matrix& points, Metric metric, std::size_t leaf_size = 16);

  // Distance from point `i` to its k-th nearest other point (i excluded).
  double kth_distance(std::size_t i, int k) const;

 private:
  struct Node {
    std::uint32_t begin = 0, end = 0;  // leaf range in index_
    std::int32_t left = -1, right = -1;
    std::uint32_t dim = 0;
    double split = 0.0;
  };

  std::int32_t build(std::uint32_t begin, std::uint32_t end);

  const Matrix& points_;
  Metric metric_;
  std::size_t leaf_size_;
  std::vector<std::uint32_t> index_;
  std::vector<Node> nodes_;
};

// O(n^2) scan; same contract as KdTree::kth_distance for every point.
std::vector<double> kth_distances_brute(const Matrix& points, int k, Metric metric);

// k-th neighbour distance of every point, through the k-d tree unless the
// data is small (n < 64) or high-dimensional (d > 20).
std::vector<double> kth_distances(const Matrix& points, int k, Metric metric);

}  // namespace copent
