#pragma once

#include <chrono>
#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "newsframe/corpus.hpp"

namespace newsframe {

// ---- corpus files (JSON Lines) ----

nlohmann::json article_to_json(const Article& a);
Article article_from_json(const nlohmann::json& j);  // throws MissingField / BadDate

std::string corpus_to_jsonl(const Corpus& corpus);
Corpus corpus_from_jsonl(std::string_view text);  // throws ParseError with a 1-based line

Corpus load_corpus(const std::filesystem::path& path);
void save_corpus(const Corpus& corpus, const std::filesystem::path& path);

// Write-temp-then-rename.
void write_file_atomic(const std::filesystem::path& path, std::string_view content);
std::string read_file(const std::filesystem::path& path);

// ---- source adapters ----

enum class AdapterName { NYT, Guardian };

/// Table-driven description of one article-search API. Both supported sources
/// share a single fetch path; only these fields differ.
struct SourceAdapter {
  AdapterName name = AdapterName::NYT;
  std::string base_url;  // scheme://host[:port]
  std::string path;      // request path on base_url
  std::string api_key_env;
  std::string api_key_param;
  // generic query field ("keyword", "begin_date", "end_date", "page", "page_size") -> param name
  std::map<std::string, std::string> query_param_map;
  std::map<std::string, std::string> fixed_params;
  bool compact_dates = false;  // YYYYMMDD instead of YYYY-MM-DD
  int first_page = 0;
  int page_size = 10;
  // Article field -> dotted JSON path inside one result record. "body" may list
  // fallbacks separated by '|'.
  std::map<std::string, std::string> response_paths;
  std::string results_path;  // dotted path of the result array in a page
  std::string total_path;    // dotted path of the total-hit count

  static SourceAdapter nyt();
  static SourceAdapter guardian();
  static SourceAdapter by_name(std::string_view name);  // "nyt" | "guardian"

  std::string_view label() const;  // "nyt" | "guardian"
  void validate() const;
};

Article parse_article(const nlohmann::json& raw, const SourceAdapter& adapter);

// ---- HTTP ----

struct HttpResponse {
  int status = 0;
  std::string body;
  std::map<std::string, std::string> headers;
};

class HttpTransport {
 public:
  virtual ~HttpTransport() = default;
  virtual HttpResponse get(const std::string& base_url, const std::string& path,
                           const std::multimap<std::string, std::string>& params) = 0;
};

// cpp-httplib backed transport (https when built with OpenSSL support).
std::unique_ptr<HttpTransport> make_http_transport(std::chrono::seconds timeout = std::chrono::seconds(30));

/// Enforces at most `rate` requests per second by spacing consecutive acquisitions.
class RateLimiter {
 public:
  using Clock = std::function<std::chrono::steady_clock::time_point()>;
  using Sleeper = std::function<void(std::chrono::nanoseconds)>;

  explicit RateLimiter(double requests_per_second);
  RateLimiter(double requests_per_second, Clock clock, Sleeper sleeper);

  void acquire();
  double rate() const { return rate_; }

 private:
  double rate_;
  std::chrono::nanoseconds interval_;
  Clock clock_;
  Sleeper sleep_;
  std::optional<std::chrono::steady_clock::time_point> last_;
};

struct FetchJob {
  SourceAdapter adapter;
  std::string keyword;
  Period period;
  int max_pages = 1;
  std::filesystem::path cache_dir = "cache";
  double requests_per_second = 1.0;
};

struct FetchStats {
  std::size_t http_requests = 0;
  std::size_t cache_hits = 0;
  std::size_t pages = 0;
  std::size_t total_hits = 0;
};

// Directory holding the pages of one query: cache/<adapter>/<sha256(query)>/.
std::filesystem::path cache_dir_for(const FetchJob& job);

/// Fetches, parses, deduplicates (by id and url) and caches a topic search.
/// `api_key` overrides the adapter's environment variable when nonempty.
Corpus fetch_topic(const FetchJob& job, HttpTransport& http, RateLimiter& limiter,
                   FetchStats* stats = nullptr, const std::string& api_key = {});

// ---- digests ----

std::string sha256_hex(std::string_view data);

}  // namespace newsframe
