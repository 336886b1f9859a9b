#pragma once

#include <cstddef>
#include <cstdint>
#include <string_view>
#include <vector>

#include "copent/dataset.hpp"
#include "copent/kdtree.hpp"
#include "copent/matrix.hpp"

namespace copent {

struct EstimatorConfig {
  int k = 3;
  Metric metric = Metric::chebyshev;
  // Per-coordinate uniform jitter in [0, jitter_magnitude) added before the
  // neighbour search; breaks exact duplicates. Zero disables it.
  double jitter_magnitude = 1e-10;
  std::uint64_t jitter_seed = 1;

  // Throws copent::Error unless 1 <= k < n_rows and jitter_magnitude >= 0.
  void validate(std::size_t n_rows) const;
};

Metric parse_metric(std::string_view s);
std::string_view to_string(Metric m);

// Differential entropy estimate, in nats.
struct EntropyEstimate {
  double value = 0.0;
  std::size_t n_samples = 0;
  std::size_t dim = 0;
  EstimatorConfig config;
};

// log of the volume of the unit ball of `metric` in d dimensions.
double log_unit_ball_volume(Metric metric, std::size_t d);

// Kozachenko-Leonenko estimator:
//   H = psi(n) - psi(k) + log c_d + (d/n) * sum_i log eps_i
// with eps_i the distance from point i to its k-th nearest neighbour. The
// sum runs in point order, so the result is bit-reproducible.
EntropyEstimate knn_entropy(const Matrix& points, const EstimatorConfig& cfg);

// Copy of `points` with the configured jitter applied (row-major draw order).
Matrix jittered(const Matrix& points, const EstimatorConfig& cfg);

// Column-major dataset to row-major point matrix. Rejects missing entries.
Matrix to_points(const Dataset& ds);

// Entropy of the empirical copula density: knn_entropy(rank_transform(ds)).
// Needs at least two columns.
EntropyEstimate copula_entropy(const Dataset& ds, const EstimatorConfig& cfg);

// Mutual information, exactly the negated copula entropy.
EntropyEstimate mutual_information(const Dataset& ds, const EstimatorConfig& cfg);

// Checks H(X) = sum_i H(X_i) + H_c(X) on a sample. `residual` is
// joint - (sum of marginals + ce) and should be near zero.
struct DecompositionReport {
  EntropyEstimate joint;
  std::vector<EntropyEstimate> marginals;
  EntropyEstimate ce;
  double residual = 0.0;
};

DecompositionReport decomposition_report(const Dataset& ds, const EstimatorConfig& cfg);

}  // namespace copent
