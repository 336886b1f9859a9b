#include "copent/entropy.hpp"

#include <boost/math/special_functions/digamma.hpp>
#include <cmath>
#include <numbers>
#include <string>

#include "copent/copula.hpp"
#include "copent/error.hpp"
#include "copent/rng.hpp"

namespace copent {

void EstimatorConfig::validate(std::size_t n_rows) const {
  if (k < 1) throw Error("k must be >= 1");
  if (static_cast<std::size_t>(k) >= n_rows) throw Error("k must be < number of rows");
  if (!(jitter_magnitude >= 0.0) || !std::isfinite(jitter_magnitude))
    throw Error("jitter magnitude must be finite and >= 0");
}

Metric parse_metric(std::string_view s) {
  if (s == "chebyshev" || s == "max") return Metric::chebyshev;
  if (s == "euclidean") return Metric::euclidean;
  throw Error("unknown metric '" + std::string(s) + "'");
}

std::string_view to_string(Metric m) { return m == Metric::chebyshev ? "chebyshev" : "euclidean"; }

double log_unit_ball_volume(Metric metric, std::size_t d) {
  const auto dd = static_cast<double>(d);
  if (metric == Metric::chebyshev) return dd * std::numbers::ln2;
  return 0.5 * dd * std::log(std::numbers::pi) - std::lgamma(0.5 * dd + 1.0);
}

Matrix jittered(const Matrix& points, const EstimatorConfig& cfg) {
  Matrix out = points;
  if (cfg.jitter_magnitude == 0.0) return out;
  SplitMix64 rng(cfg.jitter_seed);
  for (double& v : out.data) v += cfg.jitter_magnitude * rng.uniform();
  return out;
}

Matrix to_points(const Dataset& ds) {
  if (ds.has_missing()) throw Error("dataset has missing entries (impute first)");
  Matrix m(ds.n_rows(), ds.n_cols());
  for (std::size_t c = 0; c < ds.n_cols(); ++c) {
    const auto& values = ds.column(c).values;
    for (std::size_t r = 0; r < ds.n_rows(); ++r) m(r, c) = values[r];
  }
  return m;
}

EntropyEstimate knn_entropy(const Matrix& points, const EstimatorConfig& cfg) {
  if (points.cols < 1) throw Error("knn entropy: need at least one dimension");
  cfg.validate(points.rows);
  for (double v : points.data)
    if (!std::isfinite(v)) throw Error("knn entropy: non-finite coordinate");

  const Matrix pts = jittered(points, cfg);
  const std::vector<double> eps = kth_distances(pts, cfg.k, cfg.metric);

  double log_sum = 0.0;
  for (double e : eps) {
    if (!(e > 0.0)) throw Error("knn entropy: zero neighbour distance (duplicate points; enable jitter)");
    log_sum += std::log(e);
  }
  const auto n = static_cast<double>(points.rows);
  const auto d = static_cast<double>(points.cols);
  const double value = boost::math::digamma(n) - boost::math::digamma(static_cast<double>(cfg.k)) +
                       log_unit_ball_volume(cfg.metric, points.cols) + d * log_sum / n;
  return {value, points.rows, points.cols, cfg};
}

EntropyEstimate copula_entropy(const Dataset& ds, const EstimatorConfig& cfg) {
  if (ds.n_cols() < 2) throw Error("copula entropy: need at least 2 columns");
  cfg.validate(ds.n_rows());
  return knn_entropy(rank_transform(ds).matrix, cfg);
}

EntropyEstimate mutual_information(const Dataset& ds, const EstimatorConfig& cfg) {
  EntropyEstimate e = copula_entropy(ds, cfg);
  e.value = -e.value;
  return e;
}

DecompositionReport decomposition_report(const Dataset& ds, const EstimatorConfig& cfg) {
  if (ds.n_cols() < 2) throw Error("decomposition: need at least 2 columns");
  DecompositionReport rep;
  const Matrix pts = to_points(ds);
  rep.joint = knn_entropy(pts, cfg);
  double marginal_sum = 0.0;
  for (std::size_t c = 0; c < ds.n_cols(); ++c) {
    Matrix col(ds.n_rows(), 1);
    for (std::size_t r = 0; r < ds.n_rows(); ++r) col(r, 0) = pts(r, c);
    rep.marginals.push_back(knn_entropy(col, cfg));
    marginal_sum += rep.marginals.back().value;
  }
  rep.ce = copula_entropy(ds, cfg);
  rep.residual = rep.joint.value - (marginal_sum + rep.ce.value);
  return rep;
}

}  // namespace copent
