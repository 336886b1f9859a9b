#include "copent/dataset.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>
#include <unordered_set>

#include "copent/error.hpp"

namespace copent {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

std::string_view trim(std::string_view s) {
  while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r'))
    s.remove_suffix(1);
  return s;
}

std::optional<double> parse_number(std::string_view s) {
  s = trim(s);
  if (!s.empty() && s.front() == '+') s.remove_prefix(1);
  if (s.empty()) return std::nullopt;
  double v = 0.0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) return std::nullopt;
  return v;
}

// RFC-4180 record splitter. Quoted fields may contain delimiters, doubled
// quotes and line breaks.
class CsvReader {
 public:
  CsvReader(std::string_view text, char delim) : text_(text), delim_(delim) {}

  bool next(std::vector<std::string>& fields) {
    fields.clear();
    if (pos_ >= text_.size()) return false;
    std::string field;
    bool quoted = false;
    bool was_quoted = false;
    while (pos_ < text_.size()) {
      char c = text_[pos_++];
      if (quoted) {
        if (c == '"') {
          if (pos_ < text_.size() && text_[pos_] == '"') {
            field.push_back('"');
            ++pos_;
          } else {
            quoted = false;
          }
        } else {
          field.push_back(c);
        }
      } else if (c == '"' && !was_quoted && trim(field).empty()) {
        quoted = true;
        was_quoted = true;
        field.clear();
      } else if (c == delim_) {
        fields.push_back(std::move(field));
        field.clear();
        was_quoted = false;
      } else if (c == '\n') {
        break;
      } else if (c == '\r') {
        if (pos_ < text_.size() && text_[pos_] == '\n') ++pos_;
        break;
      } else {
        field.push_back(c);
      }
    }
    if (quoted) throw Error("csv: unterminated quoted field at record " + std::to_string(record_ + 1));
    fields.push_back(std::move(field));
    ++record_;
    return true;
  }

  std::size_t record() const { return record_; }

 private:
  std::string_view text_;
  char delim_;
  std::size_t pos_ = 0;
  std::size_t record_ = 0;
};

bool blank_record(const std::vector<std::string>& fields) {
  return fields.size() == 1 && trim(fields[0]).empty();
}

}  // namespace

Dataset::Dataset(std::vector<Column> columns, std::optional<std::size_t> n_rows)
    : columns_(std::move(columns)) {
  if (n_rows) {
    n_rows_ = *n_rows;
  } else {
    n_rows_ = columns_.empty() ? 0 : columns_.front().values.size();
  }
  std::unordered_set<std::string> seen;
  for (auto& col : columns_) {
    if (col.name.empty()) throw Error("dataset: empty column name");
    if (!seen.insert(col.name).second) throw Error("dataset: duplicate column name '" + col.name + "'");
    if (col.values.size() != n_rows_)
      throw Error("dataset: column '" + col.name + "' has " + std::to_string(col.values.size()) +
                  " values, expected " + std::to_string(n_rows_));
    if (col.missing.empty()) col.missing.assign(n_rows_, false);
    if (col.missing.size() != n_rows_)
      throw Error("dataset: column '" + col.name + "' mask length mismatch");
    for (std::size_t r = 0; r < n_rows_; ++r)
      if (col.missing[r]) col.values[r] = kNaN;
  }
}

std::vector<std::string> Dataset::names() const {
  std::vector<std::string> out;
  out.reserve(columns_.size());
  for (const auto& c : columns_) out.push_back(c.name);
  return out;
}

std::optional<std::size_t> Dataset::index_of(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i)
    if (columns_[i].name == name) return i;
  return std::nullopt;
}

bool Dataset::has_missing() const { return missing_count() > 0; }

std::size_t Dataset::missing_count() const {
  std::size_t n = 0;
  for (const auto& c : columns_) n += static_cast<std::size_t>(std::count(c.missing.begin(), c.missing.end(), true));
  return n;
}

bool operator==(const Dataset& a, const Dataset& b) {
  if (a.n_rows_ != b.n_rows_ || a.columns_.size() != b.columns_.size()) return false;
  for (std::size_t i = 0; i < a.columns_.size(); ++i) {
    const Column& x = a.columns_[i];
    const Column& y = b.columns_[i];
    if (x.name != y.name || x.missing != y.missing) return false;
    for (std::size_t r = 0; r < a.n_rows_; ++r) {
      if (x.missing[r]) continue;
      double u = x.values[r], v = y.values[r];
      if (u != v && !(std::isnan(u) && std::isnan(v))) return false;
    }
  }
  return true;
}

Dataset parse_csv(std::string_view text, const CsvOptions& options) {
  CsvReader reader(text, options.delimiter);
  std::vector<std::string> fields;
  std::vector<std::string> names;

  if (options.header) {
    do {
      if (!reader.next(fields)) throw Error("csv: no header row");
    } while (blank_record(fields));
    for (auto& f : fields) names.emplace_back(trim(f));
  }

  std::vector<std::vector<std::string>> rows;
  while (reader.next(fields)) {
    // In a single-column file a blank line is a missing cell.
    if (blank_record(fields) && names.size() != 1) continue;
    if (names.empty()) {
      for (std::size_t i = 0; i < fields.size(); ++i) names.push_back("V" + std::to_string(i + 1));
    }
    if (fields.size() != names.size())
      throw Error("csv: ragged row at record " + std::to_string(reader.record()) + " (" +
                  std::to_string(fields.size()) + " fields, expected " +
                  std::to_string(names.size()) + ")");
    rows.push_back(fields);
  }
  if (rows.empty()) throw Error("csv: zero data rows");

  std::vector<Column> columns(names.size());
  for (std::size_t c = 0; c < names.size(); ++c) {
    columns[c].name = names[c];
    columns[c].values.resize(rows.size());
    columns[c].missing.resize(rows.size());
  }
  for (std::size_t r = 0; r < rows.size(); ++r) {
    for (std::size_t c = 0; c < names.size(); ++c) {
      std::string_view cell = trim(rows[r][c]);
      std::optional<double> v;
      if (!options.na_tokens.contains(std::string(cell))) v = parse_number(cell);
      columns[c].values[r] = v.value_or(kNaN);
      columns[c].missing[r] = !v.has_value();
    }
  }
  return Dataset(std::move(columns), rows.size());
}

Dataset load_csv(const std::filesystem::path& path, const CsvOptions& options) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_csv(buf.str(), options);
}

std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

namespace {

std::string csv_quote(const std::string& s) {
  if (s.find_first_of(",\"\r\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out.push_back('"');
    out.push_back(c);
  }
  out.push_back('"');
  return out;
}

}  // namespace

void write_csv(const Dataset& ds, std::ostream& out) {
  for (std::size_t c = 0; c < ds.n_cols(); ++c) {
    if (c) out << ',';
    out << csv_quote(ds.column(c).name);
  }
  out << '\n';
  for (std::size_t r = 0; r < ds.n_rows(); ++r) {
    for (std::size_t c = 0; c < ds.n_cols(); ++c) {
      if (c) out << ',';
      const Column& col = ds.column(c);
      if (col.missing[r]) {
        out << "NA";
      } else {
        out << format_double(col.values[r]);
      }
    }
    out << '\n';
  }
}

std::string to_csv(const Dataset& ds) {
  std::ostringstream out;
  write_csv(ds, out);
  return out.str();
}

void save_csv(const Dataset& ds, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path.string() + "'");
  write_csv(ds, out);
}

ImputePolicy parse_impute_policy(std::string_view s) {
  if (s == "mean") return ImputePolicy::mean;
  if (s == "drop_rows" || s == "drop-rows") return ImputePolicy::drop_rows;
  if (s == "none") return ImputePolicy::none;
  throw Error("unknown impute policy '" + std::string(s) + "' (expected mean, drop_rows or none)");
}

std::string_view to_string(ImputePolicy p) {
  switch (p) {
    case ImputePolicy::mean: return "mean";
    case ImputePolicy::drop_rows: return "drop_rows";
    case ImputePolicy::none: return "none";
  }
  return "?";
}

Dataset impute(const Dataset& ds, ImputePolicy policy) {
  if (policy == ImputePolicy::none || !ds.has_missing()) return ds;

  std::vector<Column> columns = ds.columns();
  if (policy == ImputePolicy::mean) {
    for (auto& col : columns) {
      double sum = 0.0;
      std::size_t n = 0;
      for (std::size_t r = 0; r < col.values.size(); ++r) {
        if (col.missing[r]) continue;
        sum += col.values[r];
        ++n;
      }
      if (n == 0) throw Error("impute: column '" + col.name + "' has no observed values");
      const double mean = sum / static_cast<double>(n);
      for (std::size_t r = 0; r < col.values.size(); ++r) {
        if (!col.missing[r]) continue;
        col.values[r] = mean;
        col.missing[r] = false;
      }
    }
    return Dataset(std::move(columns), ds.n_rows());
  }

  std::vector<bool> keep(ds.n_rows(), true);
  for (const auto& col : ds.columns())
    for (std::size_t r = 0; r < ds.n_rows(); ++r)
      if (col.missing[r]) keep[r] = false;
  const auto survivors = static_cast<std::size_t>(std::count(keep.begin(), keep.end(), true));
  if (survivors == 0) throw Error("impute: no rows survive drop_rows");
  for (auto& col : columns) {
    Column kept{col.name, {}, {}};
    kept.values.reserve(survivors);
    for (std::size_t r = 0; r < ds.n_rows(); ++r)
      if (keep[r]) kept.values.push_back(col.values[r]);
    kept.missing.assign(survivors, false);
    col = std::move(kept);
  }
  return Dataset(std::move(columns), survivors);
}

namespace {

std::optional<std::size_t> parse_index(std::string_view s) {
  if (s.empty() || !std::all_of(s.begin(), s.end(), [](char c) { return c >= '0' && c <= '9'; }))
    return std::nullopt;
  std::size_t v = 0;
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc()) return std::nullopt;
  return v;
}

}  // namespace

Dataset select_columns(const Dataset& ds, std::span<const std::string> selection) {
  std::vector<std::size_t> picked;
  auto check_index = [&](std::size_t i, std::string_view token) {
    if (i < 1 || i > ds.n_cols())
      throw Error("select: index " + std::to_string(i) + " in '" + std::string(token) +
                  "' out of range 1-" + std::to_string(ds.n_cols()));
    return i - 1;
  };
  for (const std::string& raw : selection) {
    std::string_view token = trim(raw);
    if (token.empty()) continue;
    if (auto idx = parse_index(token)) {
      picked.push_back(check_index(*idx, token));
      continue;
    }
    auto dash = token.find('-');
    if (dash != std::string_view::npos && dash > 0) {
      auto lo = parse_index(trim(token.substr(0, dash)));
      auto hi = parse_index(trim(token.substr(dash + 1)));
      if (lo && hi) {
        if (*lo > *hi) throw Error("select: descending range '" + std::string(token) + "'");
        check_index(*lo, token);
        check_index(*hi, token);
        for (std::size_t i = *lo; i <= *hi; ++i) picked.push_back(i - 1);
        continue;
      }
    }
    auto idx = ds.index_of(token);
    if (!idx) throw Error("select: unknown column '" + std::string(token) + "'");
    picked.push_back(*idx);
  }
  if (picked.empty()) throw Error("select: empty selection");

  std::vector<Column> columns;
  columns.reserve(picked.size());
  for (std::size_t i : picked) columns.push_back(ds.column(i));
  return Dataset(std::move(columns), ds.n_rows());
}

std::vector<std::string> split_selection(std::string_view text) {
  std::vector<std::string> out;
  while (true) {
    auto comma = text.find(',');
    auto token = trim(text.substr(0, comma));
    if (!token.empty()) out.emplace_back(token);
    if (comma == std::string_view::npos) break;
    text.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace copent
