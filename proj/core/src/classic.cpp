#include "copent/classic.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>
#include <vector>

#include "copent/copula.hpp"
#include "copent/error.hpp"

namespace copent {

namespace {

void check_pair(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size())
    throw Error("length mismatch (" + std::to_string(x.size()) + " vs " + std::to_string(y.size()) + ")");
  if (x.size() < 2) throw Error("need at least 2 observations");
  for (std::size_t i = 0; i < x.size(); ++i)
    if (!std::isfinite(x[i]) || !std::isfinite(y[i])) throw Error("non-finite value in input");
}

double clamp_unit(double v) { return std::clamp(v, -1.0, 1.0); }

// Number of tied pairs within runs of equal keys of an already sorted range.
template <typename Eq>
std::int64_t tied_pairs(std::span<const std::size_t> order, Eq equal) {
  std::int64_t ties = 0;
  std::size_t start = 0;
  while (start < order.size()) {
    std::size_t stop = start + 1;
    while (stop < order.size() && equal(order[start], order[stop])) ++stop;
    const auto run = static_cast<std::int64_t>(stop - start);
    ties += run * (run - 1) / 2;
    start = stop;
  }
  return ties;
}

// Stable merge sort of `idx` by key, returning the number of exchanges
// (inversions) needed.
std::int64_t merge_count(std::vector<std::size_t>& idx, std::vector<std::size_t>& buf,
                         std::span<const double> key, std::size_t lo, std::size_t hi) {
  if (hi - lo < 2) return 0;
  const std::size_t mid = lo + (hi - lo) / 2;
  std::int64_t swaps = merge_count(idx, buf, key, lo, mid) + merge_count(idx, buf, key, mid, hi);
  std::size_t i = lo, j = mid, out = lo;
  while (i < mid && j < hi) {
    if (key[idx[j]] < key[idx[i]]) {
      swaps += static_cast<std::int64_t>(mid - i);
      buf[out++] = idx[j++];
    } else {
      buf[out++] = idx[i++];
    }
  }
  while (i < mid) buf[out++] = idx[i++];
  while (j < hi) buf[out++] = idx[j++];
  std::copy(buf.begin() + static_cast<std::ptrdiff_t>(lo), buf.begin() + static_cast<std::ptrdiff_t>(hi),
            idx.begin() + static_cast<std::ptrdiff_t>(lo));
  return swaps;
}

}  // namespace

Measure parse_measure(std::string_view s) {
  if (s == "pearson") return Measure::pearson;
  if (s == "spearman") return Measure::spearman;
  if (s == "kendall") return Measure::kendall;
  if (s == "ce") return Measure::ce;
  throw Error("unknown measure '" + std::string(s) + "' (expected pearson, spearman, kendall or ce)");
}

std::string_view to_string(Measure m) {
  switch (m) {
    case Measure::pearson: return "pearson";
    case Measure::spearman: return "spearman";
    case Measure::kendall: return "kendall";
    case Measure::ce: return "ce";
  }
  return "?";
}

PairStat pearson_r(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const std::size_t n = x.size();
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += x[i];
    my += y[i];
  }
  mx /= static_cast<double>(n);
  my /= static_cast<double>(n);
  double sxx = 0.0, syy = 0.0, sxy = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    const double dx = x[i] - mx, dy = y[i] - my;
    sxx += dx * dx;
    syy += dy * dy;
    sxy += dx * dy;
  }
  if (sxx == 0.0 || syy == 0.0) throw Error("constant input (zero standard deviation)");
  return {clamp_unit(sxy / std::sqrt(sxx * syy)), n, Measure::pearson};
}

PairStat spearman_rho(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const auto rx = ranks(x, TieRule::average);
  const auto ry = ranks(y, TieRule::average);
  PairStat s = pearson_r(rx, ry);
  s.measure = Measure::spearman;
  return s;
}

KendallCounts kendall_counts(std::span<const double> x, std::span<const double> y) {
  check_pair(x, y);
  const std::size_t n = x.size();
  KendallCounts c;
  c.pairs = static_cast<std::int64_t>(n) * static_cast<std::int64_t>(n - 1) / 2;

  std::vector<std::size_t> idx(n);
  std::iota(idx.begin(), idx.end(), std::size_t{0});
  std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
    return x[a] < x[b] || (x[a] == x[b] && y[a] < y[b]);
  });
  c.x_ties = tied_pairs(idx, [&](std::size_t a, std::size_t b) { return x[a] == x[b]; });
  c.joint_ties = tied_pairs(idx, [&](std::size_t a, std::size_t b) { return x[a] == x[b] && y[a] == y[b]; });

  std::vector<std::size_t> buf(n);
  const std::int64_t swaps = merge_count(idx, buf, y, 0, n);
  c.y_ties = tied_pairs(idx, [&](std::size_t a, std::size_t b) { return y[a] == y[b]; });

  // Pairs untied in both coordinates number n0 - n1 - n2 + n3; each is
  // concordant unless the y-sort had to exchange it.
  c.score = c.pairs - c.x_ties - c.y_ties + c.joint_ties - 2 * swaps;
  return c;
}

double tau_b_from_counts(std::int64_t score, std::int64_t pairs, std::int64_t x_ties, std::int64_t y_ties) {
  return static_cast<double>(score) /
         std::sqrt(static_cast<double>(pairs - x_ties) * static_cast<double>(pairs - y_ties));
}

PairStat kendall_tau(std::span<const double> x, std::span<const double> y) {
  const KendallCounts c = kendall_counts(x, y);
  if (c.x_ties == c.pairs || c.y_ties == c.pairs) throw Error("constant input (all values tied)");
  return {clamp_unit(tau_b_from_counts(c.score, c.pairs, c.x_ties, c.y_ties)), x.size(), Measure::kendall};
}

PairStat pair_statistic(Measure m, std::span<const double> x, std::span<const double> y) {
  switch (m) {
    case Measure::pearson: return pearson_r(x, y);
    case Measure::spearman: return spearman_rho(x, y);
    case Measure::kendall: return kendall_tau(x, y);
    case Measure::ce: break;
  }
  throw Error("pair_statistic: ce is not a classical measure");
}

}  // namespace copent
