#include "newsframe/ingest.hpp"

#include <openssl/evp.h>

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>
#include <thread>
#include <unordered_set>

#include "newsframe/error.hpp"

#ifndef CPPHTTPLIB_OPENSSL_SUPPORT
#define CPPHTTPLIB_OPENSSL_SUPPORT
#endif
#include "httplib.h"

namespace newsframe {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// JSONL corpus files

json article_to_json(const Article& a) {
  json j;
  j["id"] = a.id;
  j["source"] = std::string(to_string(a.source));
  j["url"] = a.url ? json(*a.url) : json(nullptr);
  j["title"] = a.title;
  j["body"] = a.body;
  j["published_at"] = a.published_at.iso();
  j["topic"] = a.topic ? json(*a.topic) : json(nullptr);
  j["label"] = std::string(to_string(a.label));
  return j;
}

namespace {

std::optional<std::string> optional_string(const json& j, const char* key) {
  auto it = j.find(key);
  if (it == j.end() || it->is_null()) return std::nullopt;
  if (!it->is_string()) throw Error(Errc::InvalidArgument, std::string("field '") + key + "' must be a string");
  return it->get<std::string>();
}

}  // namespace

Article article_from_json(const json& j) {
  if (!j.is_object()) throw Error(Errc::InvalidArgument, "article record must be a JSON object");
  Article a;
  auto id = optional_string(j, "id");
  if (!id) throw Error(Errc::MissingField, "id");
  a.id = *id;
  auto date = optional_string(j, "published_at");
  if (!date) throw Error(Errc::MissingField, "published_at");
  auto parsed = Date::parse(*date);
  if (!parsed) throw Error(Errc::BadDate, "unparseable published_at '" + *date + "'");
  a.published_at = *parsed;
  a.title = optional_string(j, "title").value_or("");
  a.body = optional_string(j, "body").value_or("");
  a.url = optional_string(j, "url");
  a.topic = optional_string(j, "topic");
  if (auto s = optional_string(j, "source")) {
    auto src = parse_source(*s);
    if (!src) throw Error(Errc::InvalidArgument, "unknown source '" + *s + "'");
    a.source = *src;
  }
  if (auto l = optional_string(j, "label")) {
    auto lab = parse_label(*l);
    if (!lab) throw Error(Errc::InvalidArgument, "unknown label '" + *l + "'");
    a.label = *lab;
  }
  return a;
}

std::string corpus_to_jsonl(const Corpus& corpus) {
  std::string out;
  for (const auto& a : corpus.articles()) {
    out += article_to_json(a).dump();
    out.push_back('\n');
  }
  return out;
}

Corpus corpus_from_jsonl(std::string_view text) {
  std::vector<Article> articles;
  std::unordered_set<std::string> ids;
  std::size_t line_no = 0;
  std::size_t pos = 0;
  while (pos < text.size()) {
    std::size_t end = text.find('\n', pos);
    if (end == std::string_view::npos) end = text.size();
    std::string_view line = text.substr(pos, end - pos);
    pos = end + 1;
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line.find_first_not_of(" \t") == std::string_view::npos) continue;
    try {
      Article a = article_from_json(json::parse(line));
      if (a.title.empty() && a.body.empty()) throw Error(Errc::InvalidArgument, "article has neither title nor body");
      if (!ids.insert(a.id).second) throw Error(Errc::InvalidArgument, "duplicate id " + a.id);
      articles.push_back(std::move(a));
    } catch (const json::exception& e) {
      throw ParseError(line_no, e.what());
    } catch (const Error& e) {
      throw ParseError(line_no, e.what());
    }
  }
  return Corpus(std::move(articles));
}

std::string read_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::InvalidArgument, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file_atomic(const fs::path& path, std::string_view content) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  fs::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw Error(Errc::IoError, "cannot write " + tmp.string());
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw Error(Errc::IoError, "short write to " + tmp.string());
  }
  fs::rename(tmp, path);
}

Corpus load_corpus(const fs::path& path) { return corpus_from_jsonl(read_file(path)); }

void save_corpus(const Corpus& corpus, const fs::path& path) {
  write_file_atomic(path, corpus_to_jsonl(corpus));
}

// ---------------------------------------------------------------------------
// adapters

SourceAdapter SourceAdapter::nyt() {
  SourceAdapter a;
  a.name = AdapterName::NYT;
  a.base_url = "https://api.nytimes.com";
  a.path = "/svc/search/v2/articlesearch.json";
  a.api_key_env = "NYT_API_KEY";
  a.api_key_param = "api-key";
  a.query_param_map = {{"keyword", "q"}, {"begin_date", "begin_date"}, {"end_date", "end_date"}, {"page", "page"}};
  a.compact_dates = true;
  a.first_page = 0;
  a.page_size = 10;
  a.response_paths = {{"id", "_id|web_url"},
                      {"title", "headline.main"},
                      {"published_at", "pub_date"},
                      {"url", "web_url"},
                      {"body", "lead_paragraph|abstract|snippet"}};
  a.results_path = "response.docs";
  a.total_path = "response.meta.hits";
  return a;
}

SourceAdapter SourceAdapter::guardian() {
  SourceAdapter a;
  a.name = AdapterName::Guardian;
  a.base_url = "https://content.guardianapis.com";
  a.path = "/search";
  a.api_key_env = "GUARDIAN_API_KEY";
  a.api_key_param = "api-key";
  a.query_param_map = {{"keyword", "q"},
                       {"begin_date", "from-date"},
                       {"end_date", "to-date"},
                       {"page", "page"},
                       {"page_size", "page-size"}};
  a.fixed_params = {{"show-fields", "bodyText,trailText"}, {"order-by", "oldest"}};
  a.compact_dates = false;
  a.first_page = 1;
  a.page_size = 50;
  a.response_paths = {{"id", "id|webUrl"},
                      {"title", "webTitle"},
                      {"published_at", "webPublicationDate"},
                      {"url", "webUrl"},
                      {"body", "fields.bodyText|fields.trailText"}};
  a.results_path = "response.results";
  a.total_path = "response.total";
  return a;
}

SourceAdapter SourceAdapter::by_name(std::string_view name) {
  if (name == "nyt" || name == "NYT") return nyt();
  if (name == "guardian" || name == "Guardian") return guardian();
  throw Error(Errc::InvalidArgument, "unknown adapter '" + std::string(name) + "' (expected nyt or guardian)");
}

std::string_view SourceAdapter::label() const { return name == AdapterName::NYT ? "nyt" : "guardian"; }

void SourceAdapter::validate() const {
  for (const char* field : {"id", "title", "published_at", "body"}) {
    if (!response_paths.count(field))
      throw Error(Errc::InvalidArgument, std::string("adapter lacks a response path for ") + field);
  }
  for (const char* field : {"keyword", "begin_date", "end_date", "page"}) {
    if (!query_param_map.count(field))
      throw Error(Errc::InvalidArgument, std::string("adapter lacks a query parameter for ") + field);
  }
  if (page_size <= 0) throw Error(Errc::InvalidArgument, "adapter page size must be positive");
}

namespace {

const json* lookup(const json& root, std::string_view dotted) {
  const json* cur = &root;
  std::size_t pos = 0;
  while (pos <= dotted.size()) {
    std::size_t dot = dotted.find('.', pos);
    if (dot == std::string_view::npos) dot = dotted.size();
    std::string key(dotted.substr(pos, dot - pos));
    if (!cur->is_object()) return nullptr;
    auto it = cur->find(key);
    if (it == cur->end() || it->is_null()) return nullptr;
    cur = &*it;
    pos = dot + 1;
  }
  return cur;
}

// First non-empty string among '|'-separated alternatives.
std::optional<std::string> lookup_string(const json& root, std::string_view alternatives) {
  std::size_t pos = 0;
  while (pos <= alternatives.size()) {
    std::size_t bar = alternatives.find('|', pos);
    if (bar == std::string_view::npos) bar = alternatives.size();
    if (const json* v = lookup(root, alternatives.substr(pos, bar - pos))) {
      if (v->is_string() && !v->get_ref<const std::string&>().empty()) return v->get<std::string>();
      if (v->is_number()) return v->dump();
    }
    pos = bar + 1;
  }
  return std::nullopt;
}

}  // namespace

Article parse_article(const json& raw, const SourceAdapter& adapter) {
  auto path = [&](const char* field) -> std::string {
    auto it = adapter.response_paths.find(field);
    return it == adapter.response_paths.end() ? std::string() : it->second;
  };
  Article a;
  a.source = adapter.name == AdapterName::NYT ? Source::NYT : Source::Guardian;
  a.label = Label::Unlabeled;

  auto date = lookup_string(raw, path("published_at"));
  if (!date) throw Error(Errc::MissingField, "published_at");
  auto parsed = Date::parse(*date);
  if (!parsed) throw Error(Errc::BadDate, "unparseable date '" + *date + "'");
  a.published_at = *parsed;

  auto id = lookup_string(raw, path("id"));
  if (!id) throw Error(Errc::MissingField, "id");
  a.id = *id;
  a.title = lookup_string(raw, path("title")).value_or("");
  a.body = lookup_string(raw, path("body")).value_or("");
  if (a.title.empty() && a.body.empty()) throw Error(Errc::MissingField, "title");
  if (auto url = path("url"); !url.empty()) a.url = lookup_string(raw, url);
  return a;
}

// ---------------------------------------------------------------------------
// HTTP

namespace {

class HttplibTransport final : public HttpTransport {
 public:
  explicit HttplibTransport(std::chrono::seconds timeout) : timeout_(timeout) {}

  HttpResponse get(const std::string& base_url, const std::string& path,
                   const std::multimap<std::string, std::string>& params) override {
    httplib::Client client(base_url);
    client.set_connection_timeout(timeout_);
    client.set_read_timeout(timeout_);
    client.set_follow_location(true);
    httplib::Params p(params.begin(), params.end());
    auto res = client.Get(path, p, httplib::Headers{});
    if (!res) throw Error(Errc::NetworkError, "request to " + base_url + path + " failed: " + httplib::to_string(res.error()));
    HttpResponse out;
    out.status = res->status;
    out.body = res->body;
    for (const auto& [k, v] : res->headers) out.headers.emplace(k, v);
    return out;
  }

 private:
  std::chrono::seconds timeout_;
};

}  // namespace

std::unique_ptr<HttpTransport> make_http_transport(std::chrono::seconds timeout) {
  return std::make_unique<HttplibTransport>(timeout);
}

RateLimiter::RateLimiter(double requests_per_second)
    : RateLimiter(requests_per_second, [] { return std::chrono::steady_clock::now(); },
                  [](std::chrono::nanoseconds d) { std::this_thread::sleep_for(d); }) {}

RateLimiter::RateLimiter(double requests_per_second, Clock clock, Sleeper sleeper)
    : rate_(requests_per_second), clock_(std::move(clock)), sleep_(std::move(sleeper)) {
  if (!(rate_ > 0.0) || !std::isfinite(rate_))
    throw Error(Errc::InvalidArgument, "rate limit must be a positive number of requests per second");
  interval_ = std::chrono::nanoseconds(static_cast<std::int64_t>(std::ceil(1e9 / rate_)));
}

void RateLimiter::acquire() {
  auto now = clock_();
  if (last_) {
    const auto earliest = *last_ + interval_;
    if (now < earliest) {
      sleep_(earliest - now);
      now = std::max(clock_(), earliest);
    }
  }
  last_ = now;
}

// ---------------------------------------------------------------------------
// fetching

namespace {

std::string format_date(const Date& d, bool compact) { return compact ? d.compact() : d.iso(); }

std::string query_key(const FetchJob& job) {
  json q;
  q["adapter"] = std::string(job.adapter.label());
  q["keyword"] = job.keyword;
  q["begin"] = job.period.start.iso();
  q["end"] = job.period.end.iso();
  q["page_size"] = job.adapter.page_size;
  return q.dump();
}

std::string header_value(const HttpResponse& r, const std::string& name) {
  for (const auto& [k, v] : r.headers) {
    if (k.size() == name.size() &&
        std::equal(k.begin(), k.end(), name.begin(), [](char a, char b) { return std::tolower(a) == std::tolower(b); }))
      return v;
  }
  return {};
}

json request_page(const FetchJob& job, int page, const std::string& key, HttpTransport& http) {
  const auto& ad = job.adapter;
  std::multimap<std::string, std::string> params;
  params.emplace(ad.query_param_map.at("keyword"), job.keyword);
  params.emplace(ad.query_param_map.at("begin_date"), format_date(job.period.start, ad.compact_dates));
  params.emplace(ad.query_param_map.at("end_date"), format_date(job.period.end, ad.compact_dates));
  params.emplace(ad.query_param_map.at("page"), std::to_string(ad.first_page + page));
  if (auto it = ad.query_param_map.find("page_size"); it != ad.query_param_map.end())
    params.emplace(it->second, std::to_string(ad.page_size));
  for (const auto& [k, v] : ad.fixed_params) params.emplace(k, v);
  params.emplace(ad.api_key_param, key);

  HttpResponse res = http.get(ad.base_url, ad.path, params);
  if (res.status == 401 || res.status == 403)
    throw Error(Errc::AuthError, "the " + std::string(ad.label()) + " API rejected the key in " + ad.api_key_env);
  if (res.status == 429) {
    double retry = 0.0;
    if (auto h = header_value(res, "Retry-After"); !h.empty()) retry = std::atof(h.c_str());
    throw RateLimitedError("the " + std::string(ad.label()) + " API is rate limiting (retry after " +
                               std::to_string(static_cast<long>(retry)) + "s)",
                           retry);
  }
  if (res.status != 200)
    throw Error(Errc::NetworkError, "HTTP " + std::to_string(res.status) + " from " + ad.base_url + ad.path);
  try {
    return json::parse(res.body);
  } catch (const json::exception& e) {
    throw Error(Errc::NetworkError, std::string("malformed JSON response: ") + e.what());
  }
}

std::size_t total_hits(const json& page, const SourceAdapter& ad) {
  const json* t = lookup(page, ad.total_path);
  if (!t || !t->is_number_integer()) return 0;
  return static_cast<std::size_t>(std::max<std::int64_t>(0, t->get<std::int64_t>()));
}

}  // namespace

fs::path cache_dir_for(const FetchJob& job) {
  return job.cache_dir / std::string(job.adapter.label()) / sha256_hex(query_key(job));
}

Corpus fetch_topic(const FetchJob& job, HttpTransport& http, RateLimiter& limiter, FetchStats* stats,
                   const std::string& api_key) {
  job.adapter.validate();
  if (job.period.end < job.period.start) throw Error(Errc::InvalidArgument, "fetch period end precedes start");
  if (job.max_pages < 1) throw Error(Errc::InvalidArgument, "max_pages must be >= 1");

  FetchStats local;
  FetchStats& st = stats ? *stats : local;
  st = {};

  const fs::path dir = cache_dir_for(job);
  std::string key = api_key;
  auto ensure_key = [&] {
    if (!key.empty()) return;
    const char* env = std::getenv(job.adapter.api_key_env.c_str());
    if (!env || !*env) throw Error(Errc::AuthError, "environment variable " + job.adapter.api_key_env + " is not set");
    key = env;
  };

  std::vector<Article> articles;
  std::unordered_set<std::string> seen_ids, seen_urls;
  std::size_t pages_needed = static_cast<std::size_t>(job.max_pages);

  for (std::size_t page = 0; page < pages_needed; ++page) {
    const fs::path file = dir / ("page-" + std::to_string(page) + ".json");
    json doc;
    if (fs::exists(file)) {
      doc = json::parse(read_file(file));
      ++st.cache_hits;
    } else {
      ensure_key();
      limiter.acquire();
      ++st.http_requests;
      doc = request_page(job, static_cast<int>(page), key, http);
      write_file_atomic(file, doc.dump());
    }
    ++st.pages;
    if (page == 0) {
      st.total_hits = total_hits(doc, job.adapter);
      const std::size_t ps = static_cast<std::size_t>(job.adapter.page_size);
      pages_needed = std::min(pages_needed, (st.total_hits + ps - 1) / ps);
    }
    const json* results = lookup(doc, job.adapter.results_path);
    if (!results || !results->is_array() || results->empty()) break;
    for (const auto& raw : *results) {
      Article a = parse_article(raw, job.adapter);
      if (!job.period.contains(a.published_at)) continue;
      if (!seen_ids.insert(a.id).second) continue;
      if (a.url && !seen_urls.insert(*a.url).second) continue;
      articles.push_back(std::move(a));
    }
  }

  Corpus corpus(std::move(articles), job.period);
  write_file_atomic(dir / "corpus.jsonl", corpus_to_jsonl(corpus));
  return corpus;
}

// ---------------------------------------------------------------------------

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error(Errc::IoError, "sha256 failed");
  static constexpr char kHex[] = "0123456789abcdef";
  std::string out;
  out.reserve(len * 2);
  for (unsigned int i = 0; i < len; ++i) {
    out.push_back(kHex[digest[i] >> 4]);
    out.push_back(kHex[digest[i] & 0xF]);
  }
  return out;
}

}  // namespace newsframe
