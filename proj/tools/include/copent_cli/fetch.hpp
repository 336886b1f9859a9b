#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace copent::cli {

struct FetchResult {
  enum class Status { downloaded, skipped, failed };

  std::string url;
  std::filesystem::path path;
  Status status = Status::failed;
  std::string error;
};

// Downloads each URL into `dest_dir` under its last path segment. A file that
// already exists with the remote Content-Length is skipped. Failures are
// recorded per URL and do not stop the others. Results keep input order.
std::vector<FetchResult> fetch_files(const std::vector<std::string>& urls, const std::filesystem::path& dest_dir,
                                     unsigned parallelism = 4);

// Non-blank, non-'#' lines of a manifest file.
std::vector<std::string> read_manifest(const std::filesystem::path& path);

}  // namespace copent::cli
