#include "copent/assoc.hpp"

#include <algorithm>
#include <atomic>
#include <fstream>
#include <map>
#include <numeric>
#include <sstream>
#include <thread>

#include "copent/error.hpp"
#include "copent/rng.hpp"
#include "json.hpp"

namespace copent {

using nlohmann::json;

namespace {

bool is_constant(const Column& c) {
  return std::adjacent_find(c.values.begin(), c.values.end(), std::not_equal_to<>()) == c.values.end();
}

double pair_value(const Dataset& ds, std::size_t i, std::size_t j, Measure measure, const EstimatorConfig& cfg) {
  const Column& a = ds.column(i);
  const Column& b = ds.column(j);
  if (measure != Measure::ce) return pair_statistic(measure, a.values, b.values).value;

  // Name order, not column order, fixes which coordinate is which.
  const bool swap = b.name < a.name;
  std::vector<Column> cols = swap ? std::vector<Column>{b, a} : std::vector<Column>{a, b};
  EstimatorConfig pair_cfg = cfg;
  pair_cfg.jitter_seed = pair_seed(cfg.jitter_seed, a.name, b.name);
  return mutual_information(Dataset(std::move(cols), ds.n_rows()), pair_cfg).value;
}

}  // namespace

std::uint64_t pair_seed(std::uint64_t global_seed, std::string_view a, std::string_view b) {
  if (b < a) std::swap(a, b);
  std::uint64_t h = SplitMix64::mix64(global_seed ^ 0x6A09E667F3BCC909ull);
  h = SplitMix64::mix64(h ^ fnv1a64(a));
  h = SplitMix64::mix64(h ^ fnv1a64(b));
  return h;
}

AssociationMatrix association_matrix(const Dataset& ds, Measure measure, const EstimatorConfig& cfg,
                                     unsigned jobs) {
  if (ds.n_cols() < 2) throw Error("association matrix: need at least 2 columns");
  if (ds.has_missing()) throw Error("association matrix: dataset has missing entries (impute first)");
  if (measure == Measure::ce) {
    cfg.validate(ds.n_rows());
  } else if (ds.n_rows() < 2) {
    throw Error("association matrix: need at least 2 rows");
  }

  const std::size_t n = ds.n_cols();
  AssociationMatrix m;
  m.names = ds.names();
  m.measure = measure;
  m.config = cfg;
  m.values.assign(n * n, kSentinel);

  std::vector<bool> constant(n);
  for (std::size_t c = 0; c < n; ++c) {
    constant[c] = is_constant(ds.column(c));
    if (constant[c]) m.warnings.push_back("column '" + m.names[c] + "' is constant; its entries are NA");
  }

  std::vector<std::pair<std::size_t, std::size_t>> pairs;
  pairs.reserve(n * (n - 1) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!constant[i] && !constant[j]) pairs.emplace_back(i, j);

  std::vector<double> results(pairs.size(), kSentinel);
  std::vector<std::string> errors(pairs.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t p = next++; p < pairs.size(); p = next++) {
      try {
        results[p] = pair_value(ds, pairs[p].first, pairs[p].second, measure, cfg);
      } catch (const Error& e) {
        errors[p] = e.what();
      }
    }
  };

  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  jobs = static_cast<unsigned>(std::min<std::size_t>(jobs, std::max<std::size_t>(pairs.size(), 1)));
  if (jobs <= 1) {
    worker();
  } else {
    std::vector<std::jthread> threads;
    for (unsigned t = 0; t < jobs; ++t) threads.emplace_back(worker);
  }

  for (std::size_t p = 0; p < pairs.size(); ++p) {
    auto [i, j] = pairs[p];
    m.values[i * n + j] = m.values[j * n + i] = results[p];
    if (!errors[p].empty())
      m.warnings.push_back("pair ('" + m.names[i] + "', '" + m.names[j] + "'): " + errors[p]);
  }
  return m;
}

GroupReport extract_groups(const AssociationMatrix& m, double threshold) {
  if (!(threshold > 0.0)) throw Error("group threshold must be > 0");
  if (is_classical(m.measure) && threshold > 1.0)
    throw Error("group threshold for classical measures must lie in (0, 1]");

  const std::size_t n = m.size();
  auto strength = [&](std::size_t i, std::size_t j) {
    const double v = m.at(i, j);
    return is_classical(m.measure) ? std::abs(v) : v;
  };

  std::vector<std::size_t> parent(n);
  std::iota(parent.begin(), parent.end(), std::size_t{0});
  auto find = [&](std::size_t x) {
    while (parent[x] != x) x = parent[x] = parent[parent[x]];
    return x;
  };
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if (!is_sentinel(m.at(i, j)) && strength(i, j) >= threshold) {
        // Smaller index becomes the root so component ids are stable.
        std::size_t a = find(i), b = find(j);
        if (a != b) parent[std::max(a, b)] = std::min(a, b);
      }

  std::map<std::size_t, std::vector<std::size_t>> components;
  for (std::size_t i = 0; i < n; ++i) components[find(i)].push_back(i);

  GroupReport report;
  report.threshold = threshold;
  report.measure = m.measure;
  for (auto& [root, members] : components) {
    if (members.size() < 2) continue;
    Group g;
    g.members = members;
    double sum = 0.0;
    g.min_strength = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < members.size(); ++a) {
      g.names.push_back(m.names[members[a]]);
      for (std::size_t b = a + 1; b < members.size(); ++b) {
        const double v = m.at(members[a], members[b]);
        if (is_sentinel(v) || strength(members[a], members[b]) < threshold) continue;
        sum += strength(members[a], members[b]);
        g.min_strength = std::min(g.min_strength, strength(members[a], members[b]));
        ++g.edges;
      }
    }
    g.mean_strength = sum / static_cast<double>(g.edges);
    report.groups.push_back(std::move(g));
  }
  std::stable_sort(report.groups.begin(), report.groups.end(), [](const Group& a, const Group& b) {
    if (a.members.size() != b.members.size()) return a.members.size() > b.members.size();
    return a.members.front() < b.members.front();
  });
  return report;
}

std::vector<LongFormEntry> matrix_to_long_form(const AssociationMatrix& m) {
  std::vector<LongFormEntry> out;
  const std::size_t n = m.size();
  out.reserve(n * (n - (n > 0)) / 2);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) out.push_back({m.names[i], m.names[j], m.at(i, j)});
  return out;
}

void write_matrix_csv(const AssociationMatrix& m, std::ostream& out) {
  std::vector<Column> cols;
  const std::size_t n = m.size();
  for (std::size_t j = 0; j < n; ++j) {
    Column c{m.names[j], std::vector<double>(n), std::vector<bool>(n)};
    for (std::size_t i = 0; i < n; ++i) {
      c.values[i] = m.at(i, j);
      c.missing[i] = is_sentinel(c.values[i]);
    }
    cols.push_back(std::move(c));
  }
  write_csv(Dataset(std::move(cols), n), out);
}

AssociationMatrix parse_matrix_csv(std::string_view text, Measure measure) {
  CsvOptions opts;
  opts.na_tokens = {"NA", ""};
  const Dataset ds = parse_csv(text, opts);
  const std::size_t n = ds.n_cols();
  if (ds.n_rows() != n)
    throw Error("matrix csv: expected " + std::to_string(n) + " rows, found " + std::to_string(ds.n_rows()));
  AssociationMatrix m;
  m.names = ds.names();
  m.measure = measure;
  m.values.assign(n * n, kSentinel);
  for (std::size_t j = 0; j < n; ++j) {
    const Column& c = ds.column(j);
    for (std::size_t i = 0; i < n; ++i)
      if (!c.missing[i]) m.values[i * n + j] = c.values[i];
  }
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) {
      const double a = m.at(i, j), b = m.at(j, i);
      if (!(a == b || (is_sentinel(a) && is_sentinel(b))))
        throw Error("matrix csv: not symmetric at (" + m.names[i] + ", " + m.names[j] + ")");
    }
  return m;
}

std::string matrix_to_json(const AssociationMatrix& m) {
  json values = json::array();
  for (std::size_t i = 0; i < m.size(); ++i) {
    json row = json::array();
    for (std::size_t j = 0; j < m.size(); ++j) {
      const double v = m.at(i, j);
      row.push_back(is_sentinel(v) ? json(nullptr) : json(v));
    }
    values.push_back(std::move(row));
  }
  json j = {
      {"names", m.names},
      {"measure", std::string(to_string(m.measure))},
      {"config",
       {{"k", m.config.k},
        {"metric", std::string(to_string(m.config.metric))},
        {"jitter_magnitude", m.config.jitter_magnitude},
        {"jitter_seed", m.config.jitter_seed}}},
      {"values", std::move(values)},
      {"warnings", m.warnings},
  };
  return j.dump(2) + "\n";
}

AssociationMatrix parse_matrix_json(std::string_view text) {
  try {
    const json j = json::parse(text);
    AssociationMatrix m;
    m.names = j.at("names").get<std::vector<std::string>>();
    m.measure = parse_measure(j.at("measure").get<std::string>());
    if (j.contains("config")) {
      const json& c = j.at("config");
      m.config.k = c.value("k", 3);
      m.config.metric = parse_metric(c.value("metric", std::string("chebyshev")));
      m.config.jitter_magnitude = c.value("jitter_magnitude", 1e-10);
      m.config.jitter_seed = c.value("jitter_seed", std::uint64_t{1});
    }
    if (j.contains("warnings")) m.warnings = j.at("warnings").get<std::vector<std::string>>();
    const std::size_t n = m.names.size();
    const json& rows = j.at("values");
    if (rows.size() != n) throw Error("matrix json: values has wrong number of rows");
    m.values.assign(n * n, kSentinel);
    for (std::size_t i = 0; i < n; ++i) {
      if (rows[i].size() != n) throw Error("matrix json: row " + std::to_string(i + 1) + " has wrong length");
      for (std::size_t k = 0; k < n; ++k)
        if (!rows[i][k].is_null()) m.values[i * n + k] = rows[i][k].get<double>();
    }
    return m;
  } catch (const json::exception& e) {
    throw Error(std::string("matrix json: ") + e.what());
  }
}

AssociationMatrix load_matrix(const std::filesystem::path& path, Measure csv_measure) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot read '" + path.string() + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  const auto first = text.find_first_not_of(" \t\r\n");
  if (first != std::string::npos && text[first] == '{') return parse_matrix_json(text);
  return parse_matrix_csv(text, csv_measure);
}

std::string group_report_to_json(const GroupReport& r) {
  json groups = json::array();
  for (const Group& g : r.groups) {
    std::vector<std::size_t> one_based;
    for (std::size_t i : g.members) one_based.push_back(i + 1);
    groups.push_back({
        {"indices", one_based},
        {"names", g.names},
        {"edges", g.edges},
        {"min_strength", g.min_strength},
        {"mean_strength", g.mean_strength},
    });
  }
  json j = {
      {"measure", std::string(to_string(r.measure))},
      {"threshold", r.threshold},
      {"groups", std::move(groups)},
  };
  return j.dump(2) + "\n";
}

}  // namespace copent
