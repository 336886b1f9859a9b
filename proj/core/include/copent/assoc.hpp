#pragma once

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <limits>
#include <string>
#include <string_view>
#include <vector>

#include "copent/classic.hpp"
#include "copent/dataset.hpp"
#include "copent/entropy.hpp"

namespace copent {

// Marker for undefined entries: the diagonal and any pair that involves a
// constant column. Rendered as "NA" in CSV and null in JSON.
inline constexpr double kSentinel = std::numeric_limits<double>::quiet_NaN();
inline bool is_sentinel(double v) { return std::isnan(v); }

struct AssociationMatrix {
  std::vector<std::string> names;
  Measure measure = Measure::ce;
  EstimatorConfig config;  // meaningful for ce only
  std::vector<double> values;  // size() x size(), row-major
  std::vector<std::string> warnings;

  std::size_t size() const { return names.size(); }
  double at(std::size_t i, std::size_t j) const { return values[i * names.size() + j]; }
};

// Seed of the jitter stream used for the (a, b) pair. Depends on the names
// as an unordered pair, so reordering columns does not change any entry.
std::uint64_t pair_seed(std::uint64_t global_seed, std::string_view a, std::string_view b);

// Every unordered pair i < j is computed once and mirrored. For ce each entry
// is the mutual information of the two columns, ordered by name and jittered
// with pair_seed(cfg.jitter_seed, ...). `jobs` = 0 uses the hardware
// concurrency; results do not depend on it.
AssociationMatrix association_matrix(const Dataset& ds, Measure measure, const EstimatorConfig& cfg = {},
                                     unsigned jobs = 0);

struct Group {
  std::vector<std::size_t> members;  // 0-based, ascending
  std::vector<std::string> names;
  // Over the edges that joined the group (strength >= threshold).
  double min_strength = 0.0;
  double mean_strength = 0.0;
  std::size_t edges = 0;
};

struct GroupReport {
  std::vector<Group> groups;
  double threshold = 0.0;
  Measure measure = Measure::ce;
};

inline double default_threshold(Measure m) { return m == Measure::ce ? 0.1 : 0.5; }

// Connected components of the graph with an edge wherever the strength
// (|value| for classical measures) reaches `threshold`. Singletons are
// dropped; groups are ordered by descending size, then smallest member.
// Groups are not cliques: a chain a-b-c forms one group.
GroupReport extract_groups(const AssociationMatrix& m, double threshold);

struct LongFormEntry {
  std::string first;
  std::string second;
  double value;
};

// Upper triangle, row-major over i < j.
std::vector<LongFormEntry> matrix_to_long_form(const AssociationMatrix& m);

// CSV: header row of names, then one row of values per variable, "NA" for
// sentinels. The measure is not stored, so the reader takes it as a hint.
void write_matrix_csv(const AssociationMatrix& m, std::ostream& out);
AssociationMatrix parse_matrix_csv(std::string_view text, Measure measure = Measure::ce);

// JSON: {names, measure, config, values (nested, null for sentinels), warnings}.
std::string matrix_to_json(const AssociationMatrix& m);
AssociationMatrix parse_matrix_json(std::string_view text);

// Reads either format, sniffing for a leading '{'. `csv_measure` applies
// only to CSV input.
AssociationMatrix load_matrix(const std::filesystem::path& path, Measure csv_measure = Measure::ce);

std::string group_report_to_json(const GroupReport& r);

}  // namespace copent
