#pragma once

#include <cstddef>
#include <filesystem>
#include <iosfwd>
#include <optional>
#include <set>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace copent {

struct Column {
  std::string name;
  std::vector<double> values;
  std::vector<bool> missing;
};

// Column-major numeric table with a per-cell missing mask. Immutable once
// constructed; all transforming operations return new datasets.
//
// Missing cells hold NaN in `values` but callers must consult the mask, not
// the stored value: a present cell may legitimately be NaN.
class Dataset {
 public:
  Dataset() = default;

  // Validates shape and names; throws copent::Error on violation.
  // `n_rows` is needed only to describe zero-column tables.
  explicit Dataset(std::vector<Column> columns, std::optional<std::size_t> n_rows = {});

  std::size_t n_rows() const { return n_rows_; }
  std::size_t n_cols() const { return columns_.size(); }

  const Column& column(std::size_t i) const { return columns_.at(i); }
  const std::vector<Column>& columns() const { return columns_; }
  std::vector<std::string> names() const;
  std::optional<std::size_t> index_of(std::string_view name) const;

  bool has_missing() const;
  std::size_t missing_count() const;

  friend bool operator==(const Dataset& a, const Dataset& b);

 private:
  std::vector<Column> columns_;
  std::size_t n_rows_ = 0;
};

struct CsvOptions {
  char delimiter = ',';
  bool header = true;
  std::set<std::string> na_tokens = {"", "NA"};
};

Dataset parse_csv(std::string_view text, const CsvOptions& options = {});
Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options = {});

// Comma-delimited, header row, "NA" for missing, shortest round-trip decimals.
void write_csv(const Dataset& ds, std::ostream& out);
std::string to_csv(const Dataset& ds);
void save_csv(const Dataset& ds, const std::filesystem::path& path);

// Shortest decimal that parses back to exactly `v`.
std::string format_double(double v);

enum class ImputePolicy { mean, drop_rows, none };

ImputePolicy parse_impute_policy(std::string_view s);
std::string_view to_string(ImputePolicy p);

Dataset impute(const Dataset& ds, ImputePolicy policy);

// Each entry of `selection` is a column name, a 1-based index ("7") or an
// inclusive 1-based range ("288-302"). Purely numeric tokens are always
// treated as indices.
Dataset select_columns(const Dataset& ds, std::span<const std::string> selection);

// Splits "a,b,3-5" on commas, trimming blanks.
std::vector<std::string> split_selection(std::string_view text);

}  // namespace copent
