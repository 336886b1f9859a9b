#include "copent/copula.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "copent/error.hpp"

namespace copent {

std::vector<double> ranks(std::span<const double> values, TieRule rule) {
  const std::size_t n = values.size();
  for (double v : values)
    if (!std::isfinite(v)) throw Error("rank: non-finite value in input");

  std::vector<std::size_t> order(n);
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return values[a] < values[b]; });

  std::vector<double> out(n);
  std::size_t start = 0;
  while (start < n) {
    std::size_t stop = start + 1;
    while (stop < n && values[order[stop]] == values[order[start]]) ++stop;
    // Positions start+1 .. stop (1-based) share one rank.
    const double rank = rule == TieRule::maximal
                            ? static_cast<double>(stop)
                            : 0.5 * static_cast<double>(start + 1 + stop);
    for (std::size_t p = start; p < stop; ++p) out[order[p]] = rank;
    start = stop;
  }
  return out;
}

PseudoObservations rank_transform(const Dataset& ds, TieRule rule) {
  if (ds.has_missing()) throw Error("rank transform: dataset has missing entries (impute first)");
  if (ds.n_rows() < 2) throw Error("rank transform: need at least 2 rows");

  const std::size_t n = ds.n_rows();
  const auto denom = static_cast<double>(n);
  PseudoObservations po{Matrix(n, ds.n_cols()), ds.names()};
  for (std::size_t c = 0; c < ds.n_cols(); ++c) {
    auto r = ranks(ds.column(c).values, rule);
    for (std::size_t t = 0; t < n; ++t) po.matrix(t, c) = r[t] / denom;
  }
  return po;
}

}  // namespace copent
