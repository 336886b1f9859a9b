#pragma once

#include <span>
#include <string>
#include <vector>

#include "copent/dataset.hpp"
#include "copent/matrix.hpp"

namespace copent {

// How equal values share a rank.
//   maximal: rank = number of values <= x (the empirical CDF count); ties
//            all receive the largest position of their run.
//   average: ties receive the mean of their positions (statistical convention).
enum class TieRule { maximal, average };

// 1-based ranks of `values` under `rule`. Sorts once, O(T log T).
// Throws on non-finite input.
std::vector<double> ranks(std::span<const double> values, TieRule rule = TieRule::maximal);

// Empirical-copula sample: entry (t, i) is the empirical CDF of column i
// evaluated at x_{t,i}, i.e. |{s : x_{s,i} <= x_{t,i}}| / T.
struct PseudoObservations {
  Matrix matrix;  // n_rows x n_cols, row-major
  std::vector<std::string> source_names;

  std::size_t n_rows() const { return matrix.rows; }
  std::size_t n_cols() const { return matrix.cols; }
};

// Requires no missing entries and at least two rows. The default maximal
// rule makes every value lie in {1/T, ..., T/T} with column maximum 1.
PseudoObservations rank_transform(const Dataset& ds, TieRule rule = TieRule::maximal);

}  // namespace copent
