#include "newsframe/config.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <set>

#include "newsframe/error.hpp"
#include "newsframe/format.hpp"
#include "newsframe/ingest.hpp"

namespace newsframe {

namespace {

[[noreturn]] void bad_value(std::string_view key, std::string_view value) {
  throw Error(Errc::InvalidArgument, "bad value '" + std::string(value) + "' for " + std::string(key));
}

template <typename T>
T parse_unsigned(std::string_view key, std::string_view v) {
  auto n = parse_int(v);
  if (!n || *n < 0) bad_value(key, v);
  return static_cast<T>(*n);
}

double parse_real(std::string_view key, std::string_view v) {
  auto d = parse_double(v);
  if (!d) bad_value(key, v);
  return *d;
}

bool parse_bool(std::string_view key, std::string_view v) {
  if (v == "true" || v == "1" || v == "yes" || v == "on") return true;
  if (v == "false" || v == "0" || v == "no" || v == "off") return false;
  bad_value(key, v);
}

std::string_view weighting_name(Weighting w) { return w == Weighting::Ppmi ? "ppmi" : "raw"; }
std::string_view pair_source_name(PairSource p) { return p == PairSource::Diffs ? "diffs" : "raw"; }
std::string bool_name(bool b) { return b ? "true" : "false"; }

struct Field {
  std::function<void(RunConfig&, std::string_view)> set;
  std::function<std::string(const RunConfig&)> get;
};

#define NF_SIZE(name)                                                                           \
  {                                                                                             \
#name, {[](RunConfig& c, std::string_view v) { c.name = parse_unsigned<std::size_t>(#name, v); }, \
            [](const RunConfig& c) { return std::to_string(c.name); } }                        \
  }
#define NF_REAL(name)                                                                 \
  {                                                                                   \
#name, {[](RunConfig& c, std::string_view v) { c.name = parse_real(#name, v); }, \
            [](const RunConfig& c) { return format_double(c.name); } }               \
  }
#define NF_BOOL(name)                                                                 \
  {                                                                                   \
#name, {[](RunConfig& c, std::string_view v) { c.name = parse_bool(#name, v); }, \
            [](const RunConfig& c) { return bool_name(c.name); } }                   \
  }
#define NF_STR(name)                                                          \
  {                                                                           \
#name, {[](RunConfig& c, std::string_view v) { c.name = std::string(v); }, \
            [](const RunConfig& c) { return c.name; } }                      \
  }

// Declaration order is the order of `keys()` and of the JSON echo.
const std::vector<std::pair<std::string, Field>>& fields() {
  static const std::vector<std::pair<std::string, Field>> table = {
      NF_SIZE(k),
      {"orders",
       {[](RunConfig& c, std::string_view v) {
          try {
            c.orders = NgramOrders::parse(v);
          } catch (const Error&) {
            bad_value("orders", v);
          }
        },
        [](const RunConfig& c) { return c.orders.to_string(); }}},
      NF_SIZE(min_df),
      NF_BOOL(full_ig),
      NF_SIZE(j),
      NF_SIZE(window),
      {"weighting",
       {[](RunConfig& c, std::string_view v) {
          if (v == "ppmi" || v == "Ppmi") {
            c.weighting = Weighting::Ppmi;
          } else if (v == "raw" || v == "Raw") {
            c.weighting = Weighting::Raw;
          } else {
            bad_value("weighting", v);
          }
        },
        [](const RunConfig& c) { return std::string(weighting_name(c.weighting)); }}},
      {"score_mode",
       {[](RunConfig& c, std::string_view v) {
          auto m = parse_score_mode(v);
          if (!m) bad_value("score_mode", v);
          c.score_mode = *m;
        },
        [](const RunConfig& c) { return std::string(to_string(c.score_mode)); }}},
      {"threshold_mode",
       {[](RunConfig& c, std::string_view v) {
          auto m = parse_threshold_mode(v);
          if (!m) bad_value("threshold_mode", v);
          c.threshold_mode = *m;
        },
        [](const RunConfig& c) { return std::string(to_string(c.threshold_mode)); }}},
      NF_REAL(threshold),
      NF_SIZE(bins),
      NF_REAL(alpha),
      {"predictor_mode",
       {[](RunConfig& c, std::string_view v) {
          auto m = parse_predictor_mode(v);
          if (!m) bad_value("predictor_mode", v);
          c.predictor_mode = *m;
        },
        [](const RunConfig& c) { return std::string(to_string(c.predictor_mode)); }}},
      NF_REAL(t),
      {"pair_source",
       {[](RunConfig& c, std::string_view v) {
          if (v == "diffs") {
            c.pair_source = PairSource::Diffs;
          } else if (v == "raw") {
            c.pair_source = PairSource::Raw;
          } else {
            bad_value("pair_source", v);
          }
        },
        [](const RunConfig& c) { return std::string(pair_source_name(c.pair_source)); }}},
      NF_SIZE(n_trees),
      NF_SIZE(max_depth),
      NF_SIZE(m_cap),
      NF_BOOL(include_seeds_in_stage2),
      NF_BOOL(global_vocab),
      NF_STR(adapter),
      NF_STR(query),
      NF_STR(from),
      NF_STR(to),
      {"max_pages",
       {[](RunConfig& c, std::string_view v) { c.max_pages = parse_unsigned<int>("max_pages", v); },
        [](const RunConfig& c) { return std::to_string(c.max_pages); }}},
      NF_REAL(rps),
      NF_STR(cache_dir),
      {"seed",
       {[](RunConfig& c, std::string_view v) { c.seed = parse_unsigned<std::uint64_t>("seed", v); },
        [](const RunConfig& c) { return std::to_string(c.seed); }}},
      NF_STR(topic),
      NF_STR(t1),
      NF_STR(t2),
      NF_STR(corpus),
      NF_STR(lexicons),
      NF_STR(laws),
      NF_STR(series_dir),
      NF_STR(model),
      NF_STR(seeds),
      NF_STR(universal),
      NF_STR(score_pool),
      NF_STR(out),
  };
  return table;
}

#undef NF_SIZE
#undef NF_REAL
#undef NF_BOOL
#undef NF_STR

const Field& field(std::string_view key) {
  for (const auto& [name, f] : fields())
    if (name == key) return f;
  throw Error(Errc::InvalidArgument, "unknown config key '" + std::string(key) + "'");
}

std::vector<double> load_score_pool(const std::string& path) {
  std::vector<double> pool;
  const std::string text = read_file(path);
  for (const auto& line : split_lines(text)) {
    const auto s = trim(line.text);
    if (s.empty() || s.front() == '#') continue;
    auto v = parse_double(s);
    if (!v) throw ParseError(line.number, "score pool entries must be numbers");
    pool.push_back(*v);
  }
  return pool;
}

}  // namespace

const std::vector<std::string>& RunConfig::keys() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> out;
    for (const auto& [name, f] : fields()) out.push_back(name);
    return out;
  }();
  return names;
}

void RunConfig::set(std::string_view key, std::string_view value) { field(key).set(*this, trim(value)); }

std::string RunConfig::get(std::string_view key) const { return field(key).get(*this); }

void RunConfig::validate() const {
  auto fail = [](const std::string& what) { throw Error(Errc::InvalidArgument, what); };
  if (k < 1) fail("k must be >= 1");
  if (min_df < 1) fail("min_df must be >= 1");
  if (j < 1) fail("j must be >= 1");
  if (window < 1) fail("window must be >= 1");
  if (!(threshold >= 0.0)) fail("threshold must be >= 0");
  if (score_mode == ScoreMode::MeanSimilarity && threshold > 1.0) fail("similarity threshold must lie in [0, 1]");
  if (bins < 1) fail("bins must be >= 1");
  if (!(alpha >= 0.0)) fail("alpha must be >= 0");
  if (!(t > 0.0 && t <= 1.0)) fail("t must lie in (0, 1]");
  if (n_trees < 1) fail("n_trees must be >= 1");
  if (max_depth < 1) fail("max_depth must be >= 1");
  if (m_cap < 1) fail("m_cap must be >= 1");
  if (max_pages < 1) fail("max_pages must be >= 1");
  if (!(rps > 0.0)) fail("rps must be > 0");
}

nlohmann::json RunConfig::to_json() const {
  nlohmann::json j = nlohmann::json::object();
  for (const auto& [name, f] : fields()) {
    if (name == "out") continue;
    j[name] = f.get(*this);
  }
  return j;
}

FramingConfig RunConfig::framing() const {
  FramingConfig c;
  c.topic = topic;
  c.keywords.k = k;
  c.keywords.orders = orders;
  c.keywords.min_df = min_df;
  c.keywords.full_ig = full_ig;
  c.embedding_dims = j;
  c.window = window;
  c.weighting = weighting;
  c.score_mode = score_mode;
  c.threshold_mode = threshold_mode;
  c.threshold = threshold;
  if (!score_pool.empty()) c.score_pool = load_score_pool(score_pool);
  return c;
}

ModelOptions RunConfig::model_options() const {
  ModelOptions o;
  o.bins = bins;
  o.alpha = alpha;
  o.mode = predictor_mode;
  o.t = t;
  return o;
}

BootstrapParams RunConfig::bootstrap() const {
  BootstrapParams p;
  p.forest.n_trees = n_trees;
  p.forest.max_depth = max_depth;
  p.forest.seed = seed;
  p.orders = orders;
  p.min_df = min_df;
  p.m_cap = m_cap;
  p.include_seeds_in_stage2 = include_seeds_in_stage2;
  return p;
}

CycleOptions RunConfig::cycle() const {
  CycleOptions o;
  o.orders = orders;
  o.global_vocab = global_vocab;
  return o;
}

RunConfig parse_config(std::string_view text, RunConfig base) {
  std::set<std::string> seen;
  for (const auto& line : split_lines(text)) {
    const auto s = trim(line.text);
    if (s.empty() || s.front() == '#') continue;
    const auto eq = s.find('=');
    if (eq == std::string_view::npos) throw ParseError(line.number, "expected key = value");
    const std::string key(trim(s.substr(0, eq)));
    if (!seen.insert(key).second) throw ParseError(line.number, "duplicate key '" + key + "'");
    try {
      base.set(key, s.substr(eq + 1));
    } catch (const Error& e) {
      throw ParseError(line.number, e.what());
    }
  }
  return base;
}

RunConfig load_config(const std::filesystem::path& path, RunConfig base) {
  return parse_config(read_file(path), std::move(base));
}

}  // namespace newsframe
