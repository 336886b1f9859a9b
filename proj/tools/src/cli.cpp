#include "copent_cli/cli.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

#include "copent/assoc.hpp"
#include "copent/dataset.hpp"
#include "copent/error.hpp"
#include "copent/synth.hpp"
#include "copent/xpt.hpp"
#include "copent_cli/fetch.hpp"
#include "copent_cli/heatmap.hpp"

namespace copent::cli {

namespace {

namespace fs = std::filesystem;

struct AssocArgs {
  std::string input;
  std::string measure = "ce";
  int k = 3;
  std::string impute = "mean";
  std::string columns;
  std::uint64_t seed = 1;
  std::string output;
  bool json = false;
  std::string format = "csv";
  int jobs = -1;
  std::vector<std::string> na_tokens;
};

struct GroupsArgs {
  std::string matrix;
  std::optional<double> threshold;
  std::string measure = "ce";
  std::string output;
};

struct HeatmapArgs {
  std::string matrix;
  std::string out;
  bool mask_diagonal = true;
  bool clamp_nonneg = false;
  std::string measure = "ce";
};

struct ConvertArgs {
  std::string xpt;
  std::string out;
};

struct FetchArgs {
  std::string manifest;
  std::string dest;
  unsigned jobs = 4;
};

struct SynthArgs {
  std::string spec;
  std::string out;
};

// Writes to `path`, or to `out` when the path is empty or "-".
void emit(const std::string& path, const std::string& text, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error("cannot write '" + path + "'");
  f << text;
  if (!f) throw Error("failed writing '" + path + "'");
}

Measure measure_flag(const std::string& s) {
  try {
    return parse_measure(s);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
}

unsigned resolve_jobs(int flag) {
  if (flag >= 0) return static_cast<unsigned>(flag);
  if (const char* env = std::getenv("COPENT_JOBS")) {
    try {
      const int v = std::stoi(env);
      if (v >= 0) return static_cast<unsigned>(v);
    } catch (const std::exception&) {
    }
    throw UsageError(std::string("COPENT_JOBS must be a non-negative integer, got '") + env + "'");
  }
  return 0;
}

int run_assoc(const AssocArgs& a, bool k_given, std::ostream& out, std::ostream& err) {
  const Measure measure = measure_flag(a.measure);
  if (k_given && measure != Measure::ce) throw UsageError("--k only applies to --measure ce");
  if (a.k < 1) throw UsageError("k must be >= 1");
  if (a.format != "csv" && a.format != "json") throw UsageError("--format must be csv or json");
  ImputePolicy policy;
  try {
    policy = parse_impute_policy(a.impute);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  const unsigned jobs = resolve_jobs(a.jobs);

  CsvOptions opts;
  for (const auto& t : a.na_tokens) opts.na_tokens.insert(t);
  Dataset ds = load_csv(a.input, opts);
  if (!a.columns.empty()) ds = select_columns(ds, split_selection(a.columns));
  if (policy == ImputePolicy::none && ds.has_missing())
    throw Error("input has " + std::to_string(ds.missing_count()) +
                " missing entries; use --impute mean or --impute drop_rows");
  ds = impute(ds, policy);
  if (ds.n_cols() < 2) throw UsageError("need at least 2 columns");
  if (measure == Measure::ce && static_cast<std::size_t>(a.k) >= ds.n_rows())
    throw UsageError("k must be < number of rows");

  EstimatorConfig cfg;
  cfg.k = a.k;
  cfg.jitter_seed = a.seed;
  const AssociationMatrix m = association_matrix(ds, measure, cfg, jobs);
  for (const auto& w : m.warnings) err << "copent: warning: " << w << '\n';

  if (a.json || a.format == "json") {
    emit(a.output, matrix_to_json(m), out);
  } else {
    std::ostringstream csv;
    write_matrix_csv(m, csv);
    emit(a.output, csv.str(), out);
  }
  return kOk;
}

int run_groups(const GroupsArgs& a, std::ostream& out) {
  const Measure hint = measure_flag(a.measure);
  const AssociationMatrix m = load_matrix(a.matrix, hint);
  const double threshold = a.threshold.value_or(default_threshold(m.measure));
  if (!(threshold > 0.0)) throw UsageError("--threshold must be > 0");
  if (is_classical(m.measure) && threshold > 1.0)
    throw UsageError("--threshold must lie in (0, 1] for classical measures");
  emit(a.output, group_report_to_json(extract_groups(m, threshold)), out);
  return kOk;
}

int run_heatmap(const HeatmapArgs& a, std::ostream& out) {
  const AssociationMatrix m = load_matrix(a.matrix, measure_flag(a.measure));
  HeatmapOptions opts;
  opts.mask_diagonal = a.mask_diagonal;
  opts.clamp_nonneg = a.clamp_nonneg;
  emit(a.out, render_heatmap_svg(m, opts), out);
  return kOk;
}

int run_convert(const ConvertArgs& a, std::ostream& out, std::ostream& err) {
  const XptMember member = read_xpt(a.xpt);
  for (const auto& w : member.warnings) err << "copent: warning: " << w << '\n';
  emit(a.out, to_csv(member.data), out);
  return kOk;
}

int run_fetch(const FetchArgs& a, std::ostream& out, std::ostream& err) {
  const auto urls = read_manifest(a.manifest);
  int code = kOk;
  for (const FetchResult& r : fetch_files(urls, a.dest, a.jobs)) {
    switch (r.status) {
      case FetchResult::Status::downloaded: out << "downloaded " << r.path.string() << '\n'; break;
      case FetchResult::Status::skipped: out << "skipped " << r.path.string() << '\n'; break;
      case FetchResult::Status::failed:
        err << "copent: error: " << r.url << ": " << r.error << '\n';
        code = kData;
        break;
    }
  }
  return code;
}

int run_synth(const SynthArgs& a, std::ostream& out) {
  synth::SynthSpec spec;
  try {
    spec = synth::parse_spec(a.spec);
  } catch (const Error& e) {
    throw UsageError(e.what());
  }
  emit(a.out, to_csv(synth::generate(spec)), out);
  return kOk;
}

}  // namespace

int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Association discovery with copula entropy and classical correlation measures.", "copent"};
  app.require_subcommand(1, 1);

  AssocArgs assoc;
  auto* assoc_cmd = app.add_subcommand(
      "assoc",
      "Compute the pairwise association matrix of a CSV dataset.\n"
      "Column selection happens before imputation, so means are taken over the selected columns only.");
  assoc_cmd->add_option("--input", assoc.input, "Input CSV (header row required)")->required();
  assoc_cmd->add_option("--measure", assoc.measure, "ce, pearson, spearman or kendall")->capture_default_str();
  auto* k_opt = assoc_cmd->add_option("--k", assoc.k, "Neighbours for the kNN entropy estimator (ce only)")
                    ->capture_default_str();
  assoc_cmd->add_option("--impute", assoc.impute, "mean, drop_rows or none")->capture_default_str();
  assoc_cmd->add_option("--columns", assoc.columns, "Names, 1-based indices or ranges, e.g. 1-10,GLU");
  assoc_cmd->add_option("--seed", assoc.seed, "Jitter seed")->capture_default_str();
  assoc_cmd->add_option("--output", assoc.output, "Output file (default stdout)");
  assoc_cmd->add_flag("--json", assoc.json, "Write JSON instead of CSV");
  assoc_cmd->add_option("--format", assoc.format, "csv or json")->capture_default_str();
  assoc_cmd->add_option("--jobs", assoc.jobs, "Worker threads (0 = all cores; env COPENT_JOBS)");
  assoc_cmd->add_option("--na-token", assoc.na_tokens, "Extra cell text treated as missing (repeatable)");

  GroupsArgs groups;
  auto* groups_cmd = app.add_subcommand("groups", "Extract associated variable groups from a matrix.");
  groups_cmd->add_option("--matrix", groups.matrix, "Matrix file written by assoc (CSV or JSON)")->required();
  groups_cmd->add_option("--threshold", groups.threshold, "Edge threshold (default 0.1 for ce, 0.5 otherwise)");
  groups_cmd->add_option("--measure", groups.measure, "Measure of a CSV matrix")->capture_default_str();
  groups_cmd->add_option("--output", groups.output, "Output JSON (default stdout)");

  HeatmapArgs heat;
  auto* heat_cmd = app.add_subcommand("heatmap", "Render a matrix as an SVG heatmap.");
  heat_cmd->add_option("--matrix", heat.matrix, "Matrix file written by assoc (CSV or JSON)")->required();
  heat_cmd->add_option("--out", heat.out, "Output SVG (default stdout)");
  heat_cmd->add_flag("--mask-diagonal,!--no-mask-diagonal", heat.mask_diagonal, "Grey out the diagonal (default)");
  heat_cmd->add_flag("--clamp-nonneg", heat.clamp_nonneg, "Clamp negative strengths to zero before colouring");
  heat_cmd->add_option("--measure", heat.measure, "Measure of a CSV matrix")->capture_default_str();

  ConvertArgs convert;
  auto* convert_cmd = app.add_subcommand("convert", "Convert a SAS XPORT v5 file to CSV.");
  convert_cmd->add_option("--xpt", convert.xpt, "Input .xpt file")->required();
  convert_cmd->add_option("--out", convert.out, "Output CSV (default stdout)");

  FetchArgs fetch;
  auto* fetch_cmd = app.add_subcommand("fetch", "Download the files listed in a manifest (one URL per line).");
  fetch_cmd->add_option("--manifest", fetch.manifest, "Manifest file")->required();
  fetch_cmd->add_option("--dest", fetch.dest, "Destination directory")->required();
  fetch_cmd->add_option("--jobs", fetch.jobs, "Concurrent downloads")->capture_default_str();

  SynthArgs synth_args;
  auto* synth_cmd = app.add_subcommand("synth", "Generate a synthetic dataset from a JSON spec.");
  synth_cmd->add_option("--spec", synth_args.spec, "JSON spec, e.g. {\"kind\":\"gaussian_pair\",\"rho\":0.5}")
      ->required();
  synth_cmd->add_option("--out", synth_args.out, "Output CSV (default stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e, out, err);
    err << "copent: error: " << e.what() << '\n';
    return kUsage;
  }

  try {
    if (*assoc_cmd) return run_assoc(assoc, k_opt->count() > 0, out, err);
    if (*groups_cmd) return run_groups(groups, out);
    if (*heat_cmd) return run_heatmap(heat, out);
    if (*convert_cmd) return run_convert(convert, out, err);
    if (*fetch_cmd) return run_fetch(fetch, out, err);
    if (*synth_cmd) return run_synth(synth_args, out);
  } catch (const UsageError& e) {
    err << "copent: error: " << e.what() << '\n';
    return kUsage;
  } catch (const Error& e) {
    err << "copent: error: " << e.what() << '\n';
    return kData;
  } catch (const fs::filesystem_error& e) {
    err << "copent: error: " << e.what() << '\n';
    return kData;
  }
  return kUsage;
}

}  // namespace copent::cli
