#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <string_view>

namespace copent {

enum class Measure { pearson, spearman, kendall, ce };

Measure parse_measure(std::string_view s);
std::string_view to_string(Measure m);
inline bool is_classical(Measure m) { return m != Measure::ce; }

struct PairStat {
  double value = 0.0;  // in [-1, 1]
  std::size_t n = 0;
  Measure measure = Measure::pearson;
};

// Sample covariance over the product of sample standard deviations.
PairStat pearson_r(std::span<const double> x, std::span<const double> y);

// Pearson's r on averaged (mid) ranks.
PairStat spearman_rho(std::span<const double> x, std::span<const double> y);

// Kendall's tau-b, O(n log n) via Knight's merge-sort discordance count:
//   (concordant - discordant) / sqrt((n0 - n1) * (n0 - n2))
// where n0 = n(n-1)/2 and n1, n2 count pairs tied in x and in y.
PairStat kendall_tau(std::span<const double> x, std::span<const double> y);

// Intermediate counts, exposed for verification against pair enumeration.
struct KendallCounts {
  std::int64_t pairs = 0;       // n0
  std::int64_t x_ties = 0;      // n1
  std::int64_t y_ties = 0;      // n2
  std::int64_t joint_ties = 0;  // pairs tied in both
  std::int64_t score = 0;       // concordant - discordant
};

KendallCounts kendall_counts(std::span<const double> x, std::span<const double> y);

// Shared by kendall_tau and its test oracle so both round identically.
double tau_b_from_counts(std::int64_t score, std::int64_t pairs, std::int64_t x_ties, std::int64_t y_ties);

PairStat pair_statistic(Measure m, std::span<const double> x, std::span<const double> y);

}  // namespace copent
