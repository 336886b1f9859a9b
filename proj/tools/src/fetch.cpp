#include "copent_cli/fetch.hpp"

#include <curl/curl.h>

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <fstream>
#include <mutex>
#include <thread>

#include "copent/error.hpp"

namespace copent::cli {

namespace {

std::once_flag curl_init;

struct Easy {
  CURL* handle = curl_easy_init();
  ~Easy() { curl_easy_cleanup(handle); }
};

std::string file_name_of(const std::string& url) {
  std::string path = url.substr(0, url.find_first_of("?#"));
  const auto slash = path.find_last_of('/');
  std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
  return name.empty() ? "index" : name;
}

// Remote size from a HEAD request, or -1 when unknown.
curl_off_t remote_size(const std::string& url) {
  Easy e;
  curl_easy_setopt(e.handle, CURLOPT_URL, url.c_str());
  curl_easy_setopt(e.handle, CURLOPT_NOBODY, 1L);
  curl_easy_setopt(e.handle, CURLOPT_FOLLOWLOCATION, 1L);
  curl_easy_setopt(e.handle, CURLOPT_FAILONERROR, 1L);
  if (curl_easy_perform(e.handle) != CURLE_OK) return -1;
  curl_off_t size = -1;
  curl_easy_getinfo(e.handle, CURLINFO_CONTENT_LENGTH_DOWNLOAD_T, &size);
  return size;
}

std::size_t write_cb(char* data, std::size_t size, std::size_t count, void* stream) {
  auto* out = static_cast<std::ofstream*>(stream);
  out->write(data, static_cast<std::streamsize>(size * count));
  return out->good() ? size * count : 0;
}

void fetch_one(FetchResult& r) {
  std::error_code ec;
  if (std::filesystem::exists(r.path, ec)) {
    const curl_off_t size = remote_size(r.url);
    if (size >= 0 && static_cast<std::uintmax_t>(size) == std::filesystem::file_size(r.path, ec)) {
      r.status = FetchResult::Status::skipped;
      return;
    }
  }

  auto partial = r.path;
  partial += ".part";
  {
    std::ofstream out(partial, std::ios::binary | std::ios::trunc);
    if (!out) {
      r.error = "cannot write '" + partial.string() + "'";
      return;
    }
    Easy e;
    char message[CURL_ERROR_SIZE] = {};
    curl_easy_setopt(e.handle, CURLOPT_URL, r.url.c_str());
    curl_easy_setopt(e.handle, CURLOPT_FOLLOWLOCATION, 1L);
    curl_easy_setopt(e.handle, CURLOPT_FAILONERROR, 1L);
    curl_easy_setopt(e.handle, CURLOPT_WRITEFUNCTION, write_cb);
    curl_easy_setopt(e.handle, CURLOPT_WRITEDATA, &out);
    curl_easy_setopt(e.handle, CURLOPT_ERRORBUFFER, message);
    const CURLcode rc = curl_easy_perform(e.handle);
    if (rc != CURLE_OK) {
      r.error = message[0] ? message : curl_easy_strerror(rc);
    }
  }
  if (!r.error.empty()) {
    std::filesystem::remove(partial, ec);
    return;
  }
  std::filesystem::rename(partial, r.path, ec);
  if (ec) {
    r.error = ec.message();
    return;
  }
  r.status = FetchResult::Status::downloaded;
}

}  // namespace

std::vector<FetchResult> fetch_files(const std::vector<std::string>& urls, const std::filesystem::path& dest_dir,
                                     unsigned parallelism) {
  std::vector<FetchResult> results(urls.size());
  if (urls.empty()) return results;
  std::call_once(curl_init, [] { curl_global_init(CURL_GLOBAL_DEFAULT); });
  std::filesystem::create_directories(dest_dir);

  for (std::size_t i = 0; i < urls.size(); ++i) {
    results[i].url = urls[i];
    results[i].path = dest_dir / file_name_of(urls[i]);
  }

  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < results.size(); i = next++) fetch_one(results[i]);
  };
  const unsigned n = std::clamp<unsigned>(parallelism, 1u, static_cast<unsigned>(urls.size()));
  std::vector<std::jthread> threads;
  for (unsigned t = 0; t < n; ++t) threads.emplace_back(worker);
  return results;
}

std::vector<std::string> read_manifest(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot read manifest '" + path.string() + "'");
  std::vector<std::string> urls;
  std::string line;
  while (std::getline(in, line)) {
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto last = line.find_last_not_of(" \t\r");
    urls.push_back(line.substr(first, last - first + 1));
  }
  return urls;
}

}  // namespace copent::cli
