#include <doctest.h>

#include <cstdlib>
#include <fstream>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "newsframe/app.hpp"
#include "newsframe/config.hpp"
#include "newsframe/ingest.hpp"
#include "newsframe/report.hpp"
#include "support.hpp"
#include "synthetic.hpp"

namespace fs = std::filesystem;
using namespace newsframe;
using nlohmann::json;
using testing::corpus_of;
using testing::errc_of;

namespace {

struct Run {
  int code = 0;
  std::string out;
  std::string err;
};

Run run(const std::vector<std::string>& args, std::function<std::unique_ptr<HttpTransport>()> http = {}) {
  std::ostringstream out, err;
  Run r;
  r.code = run_cli(args, CliIo{out, err, std::move(http)});
  r.out = out.str();
  r.err = err.str();
  return r;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p, std::ios::binary) << text; }

std::optional<std::size_t> parse_error_line(std::string_view text) {
  try {
    parse_config(text);
  } catch (const ParseError& e) {
    return e.line();
  }
  return std::nullopt;
}

std::vector<std::string> bodies(std::mt19937_64& rng, std::size_t n, const std::string& extra = {}) {
  static const std::vector<std::string> pool = {"senate", "vote",   "budget", "hearing",  "committee", "report",
                                                "agency", "court",  "ruling", "policy",   "official",  "program"};
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::string s = extra;
    for (int w = 0; w < 7; ++w) s += " " + pool[rng() % pool.size()];
    out.push_back(s);
  }
  return out;
}

class FakeSearch : public HttpTransport {
 public:
  HttpResponse get(const std::string&, const std::string&, const std::multimap<std::string, std::string>&) override {
    ++*calls;
    json docs = json::array();
    for (int i = 0; i < 3; ++i)
      docs.push_back({{"_id", "nyt://" + std::to_string(i)},
                      {"web_url", "https://nyt.example/" + std::to_string(i)},
                      {"headline", {{"main", "Drone strike " + std::to_string(i)}}},
                      {"pub_date", "2014-02-0" + std::to_string(i + 1) + "T00:00:00Z"},
                      {"lead_paragraph", "A drone strike was reported."}});
    HttpResponse r;
    r.status = 200;
    r.body = json{{"response", {{"docs", docs}, {"meta", {{"hits", 3}}}}}}.dump();
    return r;
  }
  std::shared_ptr<int> calls = std::make_shared<int>(0);
};

}  // namespace

TEST_CASE("config grammar") {
  const RunConfig c = parse_config("# run settings\n  k = 4\n\nthreshold=0.2\norders = 1,2\ntopic = drones\n");
  CHECK(c.k == 4);
  CHECK(c.threshold == 0.2);
  CHECK(c.orders.to_string() == "1,2");
  CHECK(c.topic == "drones");
  CHECK(c.min_df == 2);  // untouched default

  CHECK(parse_error_line("k = 4\nk = 5\n") == 2u);
  CHECK(parse_error_line("k = 4\n\nbogus = 1\n") == 3u);
  CHECK(parse_error_line("k = four\n") == 1u);
  CHECK(parse_error_line("just words\n") == 1u);
  CHECK(parse_error_line("threshold = 0.2  # not a comment\n") == 1u);  // only whole-line comments

  // Every key survives a get/set round trip.
  RunConfig r;
  for (const auto& key : RunConfig::keys()) {
    const std::string v = r.get(key);
    RunConfig copy = r;
    copy.set(key, v);
    CHECK(copy.get(key) == v);
  }
  CHECK(errc_of([&] { r.set("nope", "1"); }) == Errc::InvalidArgument);
  CHECK(errc_of([&] { r.get("nope"); }) == Errc::InvalidArgument);

  RunConfig bad;
  bad.k = 0;
  CHECK(errc_of([&] { bad.validate(); }) == Errc::InvalidArgument);
  bad = RunConfig{};
  bad.t = 1.5;
  CHECK(errc_of([&] { bad.validate(); }) == Errc::InvalidArgument);
  CHECK_NOTHROW(RunConfig{}.validate());
  CHECK_FALSE(RunConfig{}.to_json().contains("out"));
}

TEST_CASE("laws CSV") {
  const auto laws = laws_from_csv("topic,year,count\ndrones,2011,2\ndrones,2012,0\nprivacy,2013,1\n");
  CHECK(laws.at("drones").at(2011) == true);
  CHECK(laws.at("drones").at(2012) == false);
  CHECK(laws.at("privacy").at(2013) == true);
  CHECK(laws_from_csv("a,2000,1\n").size() == 1);
  CHECK(errc_of([] { laws_from_csv("topic,year,count\na,x,1\n"); }) == Errc::ParseError);
}

TEST_CASE("cli basics") {
  CHECK(run({}).code == 2);
  CHECK(run({"--help"}).code == 0);
  CHECK(run({"frobnicate"}).code == 2);
  CHECK(run({"framing", "--no-such-flag", "1"}).code == 2);
  CHECK(run({"legislate"}).code == 2);
}

TEST_CASE("cli framing") {
  const fs::path dir = testing::temp_dir("cli-framing");
  std::mt19937_64 rng(1);
  spit(dir / "t1.jsonl", corpus_to_jsonl(corpus_of(bodies(rng, 10), Date(2010, 5, 1), "a")));
  spit(dir / "t2.jsonl", corpus_to_jsonl(corpus_of(bodies(rng, 10, "drone strike pakistan"), Date(2013, 5, 1), "b")));
  spit(dir / "empty.jsonl", "");
  spit(dir / "run.conf", "k = 4\ntopic = drones\n");

  const std::vector<std::string> base = {"framing", "--t1", (dir / "t1.jsonl").string(), "--t2",
                                         (dir / "t2.jsonl").string(), "--config", (dir / "run.conf").string()};
  auto with_out = [&](const std::string& out, std::vector<std::string> extra = {}) {
    auto a = base;
    a.push_back("--out");
    a.push_back((dir / out).string());
    a.insert(a.end(), extra.begin(), extra.end());
    return a;
  };

  const Run r1 = run(with_out("o1"));
  REQUIRE(r1.code == 0);
  CHECK(r1.out.rfind("topic=drones score=", 0) == 0);
  const json doc = json::parse(slurp(dir / "o1" / "report.json"));
  CHECK(doc["command"] == "framing");
  CHECK(doc["config"]["k"] == "4");
  CHECK(doc["report"]["keywords"].size() == 4);
  CHECK(slurp(dir / "o1" / "keywords.csv").rfind("ngram,ig_bits\n", 0) == 0);
  CHECK(slurp(dir / "o1" / "coordinates.csv").rfind("ngram,x,y\n", 0) == 0);

  // Byte-identical reruns into a different directory.
  REQUIRE(run(with_out("o2")).code == 0);
  CHECK(slurp(dir / "o1" / "report.json") == slurp(dir / "o2" / "report.json"));
  CHECK(slurp(dir / "o1" / "keywords.csv") == slurp(dir / "o2" / "keywords.csv"));
  CHECK(slurp(dir / "o1" / "coordinates.csv") == slurp(dir / "o2" / "coordinates.csv"));

  // Flags override the file.
  REQUIRE(run(with_out("o3", {"--k", "2"})).code == 0);
  CHECK(json::parse(slurp(dir / "o3" / "report.json"))["report"]["keywords"].size() == 2);

  // Input errors.
  const Run empty = run({"framing", "--t1", (dir / "empty.jsonl").string(), "--t2", (dir / "t2.jsonl").string(),
                         "--out", (dir / "o4").string()});
  CHECK(empty.code == 2);
  CHECK(empty.err.find("error:") != std::string::npos);
  CHECK(run(with_out("o5", {"--k", "0"})).code == 2);
  CHECK(run({"framing", "--t1", (dir / "missing.jsonl").string(), "--t2", (dir / "t2.jsonl").string(), "--out",
             (dir / "o6").string()})
            .code == 2);
  CHECK(run({"framing", "--t2", (dir / "t2.jsonl").string(), "--out", (dir / "o7").string()}).code == 2);
}

TEST_CASE("cli cycle") {
  const fs::path dir = testing::temp_dir("cli-cycle");
  std::vector<Article> arts;
  std::mt19937_64 rng(2);
  for (int y = 2010; y <= 2012; ++y) {
    const auto b = bodies(rng, 4, y == 2011 ? "good news" : "bad news");
    for (std::size_t i = 0; i < b.size(); ++i)
      arts.push_back(testing::article(std::to_string(y) + "-" + std::to_string(i), Date(y, 3, 1 + static_cast<unsigned>(i)), "", b[i]));
  }
  spit(dir / "drones.jsonl", corpus_to_jsonl(Corpus(arts)));
  spit(dir / "laws.csv", "topic,year,count\ndrones,2011,3\n");

  const Run r = run({"cycle", "--corpus", (dir / "drones.jsonl").string(), "--laws", (dir / "laws.csv").string(), "--out",
                     (dir / "out").string()});
  REQUIRE(r.code == 0);
  CHECK(r.out == "topic=drones years=3 articles=12\n");
  const auto s = series_from_csv(slurp(dir / "out" / "series.csv"), "drones");
  CHECK(s.years == std::vector<int>{2010, 2011, 2012});
  CHECK(s.volume == std::vector<std::uint64_t>{4, 4, 4});
  CHECK(s.legislative == std::vector<std::optional<bool>>{false, true, false});
  CHECK(*s.mean_sentiment[1] > *s.mean_sentiment[0]);

  REQUIRE(run({"cycle", "--corpus", (dir / "drones.jsonl").string(), "--laws", (dir / "laws.csv").string(), "--out",
               (dir / "again").string()})
              .code == 0);
  CHECK(slurp(dir / "out" / "series.csv") == slurp(dir / "again" / "series.csv"));
  CHECK(slurp(dir / "out" / "run.json") == slurp(dir / "again" / "run.json"));
}

TEST_CASE("cli legislate") {
  const fs::path dir = testing::temp_dir("cli-legislate");
  fs::create_directories(dir / "series");
  for (const char* t : {"alpha", "beta", "gamma"})
    spit(dir / "series" / (std::string(t) + ".csv"), series_to_csv(synthetic::stepped_topic(t, 2000, 14, {4, 9})));
  fs::create_directories(dir / "single");
  spit(dir / "single" / "alpha.csv", series_to_csv(synthetic::stepped_topic("alpha", 2000, 14, {4, 9})));
  const std::string series = (dir / "series").string();

  SUBCASE("loo") {
    const Run r = run({"legislate", "loo", "--series-dir", series, "--out", (dir / "loo").string()});
    REQUIRE(r.code == 0);
    CHECK(r.out == "topics=3 precision=1 recall=1 f1=1\n");
    const json doc = json::parse(slurp(dir / "loo" / "loo.json"));
    CHECK(doc["metrics"]["topics"].size() == 3);
    REQUIRE(run({"legislate", "loo", "--series-dir", series, "--out", (dir / "loo2").string()}).code == 0);
    CHECK(slurp(dir / "loo" / "loo.json") == slurp(dir / "loo2" / "loo.json"));

    CHECK(run({"legislate", "loo", "--series-dir", (dir / "single").string(), "--out", (dir / "x").string()}).code == 2);
  }

  SUBCASE("fit and predict") {
    const Run fit = run({"legislate", "fit", "--series-dir", series, "--out", (dir / "fit").string()});
    REQUIRE(fit.code == 0);
    CHECK(fit.out.find("training_pairs=30") != std::string::npos);
    const Run pred = run({"legislate", "predict", "--series-dir", series, "--model", (dir / "fit" / "model.json").string(),
                          "--out", (dir / "pred").string()});
    REQUIRE(pred.code == 0);
    CHECK(pred.out == "predictions=36 legislative=6\n");
    const std::string csv = slurp(dir / "pred" / "predictions.csv");
    CHECK(csv.rfind("topic,year,posterior,label\n", 0) == 0);
    CHECK(csv.find("alpha,2004,") != std::string::npos);

    // Fitting with alpha 0 leaves empty rows and warns.
    const Run warn = run({"legislate", "fit", "--series-dir", series, "--alpha", "0", "--out", (dir / "fit0").string()});
    CHECK(warn.code == 0);
    CHECK(warn.err.find("warning:") != std::string::npos);

    spit(dir / "broken.json", "{not json");
    CHECK(run({"legislate", "predict", "--series-dir", series, "--model", (dir / "broken.json").string(), "--out",
               (dir / "p2").string()})
              .code == 2);
  }

  SUBCASE("laws override labels") {
    spit(dir / "laws.csv", "topic,year,count\nalpha,2004,1\n");
    const Run fit = run({"legislate", "fit", "--series-dir", series, "--laws", (dir / "laws.csv").string(), "--out",
                         (dir / "fl").string()});
    REQUIRE(fit.code == 0);
    // alpha loses its 2009 law, so one more non-legislative pair trains the anomaly model.
    CHECK(fit.out.find("training_pairs=31") != std::string::npos);
  }
}

TEST_CASE("cli bootstrap") {
  const fs::path dir = testing::temp_dir("cli-bootstrap");
  const auto u = synthetic::marked_universe(200, 0.4, 20, 5);
  spit(dir / "universal.jsonl", corpus_to_jsonl(u.corpus));
  std::string seeds = "article_id,label\n", one_class = "article_id,label\n";
  for (const auto& s : u.seeds) {
    seeds += s.article_id + "," + std::string(to_string(s.label)) + "\n";
    if (s.label == Label::Positive) one_class += s.article_id + ",Positive\n";
  }
  spit(dir / "seeds.csv", seeds);
  spit(dir / "one.csv", one_class);

  auto args = [&](const std::string& seed_file, const std::string& out) {
    return std::vector<std::string>{"bootstrap", "--seeds", (dir / seed_file).string(), "--universal",
                                    (dir / "universal.jsonl").string(), "--n-trees", "30", "--seed", "11", "--out",
                                    (dir / out).string()};
  };
  const Run r = run(args("seeds.csv", "o1"));
  REQUIRE(r.code == 0);
  CHECK(r.out.find("positives=" + std::to_string(u.members.size()) + " ") == 0);
  const Corpus pos = load_corpus(dir / "o1" / "positives.jsonl");
  CHECK(pos.size() == u.members.size());
  const json prov = json::parse(slurp(dir / "o1" / "provenance.json"));
  CHECK(prov["provenance"]["seed_positives"] == 20);

  REQUIRE(run(args("seeds.csv", "o2")).code == 0);
  for (const char* f : {"positives.jsonl", "negatives.jsonl", "provenance.json"})
    CHECK(slurp(dir / "o1" / f) == slurp(dir / "o2" / f));

  CHECK(run(args("one.csv", "o3")).code == 2);
}

TEST_CASE("cli fetch") {
  const fs::path dir = testing::temp_dir("cli-fetch");
  const std::vector<std::string> args = {"fetch", "--query", "drone", "--from", "2014-01-01", "--to", "2014-12-31",
                                         "--rps", "1000", "--cache-dir", (dir / "cache").string(), "--out",
                                         (dir / "out").string()};
  FakeSearch fake;
  auto factory = [&] { return std::unique_ptr<HttpTransport>(new FakeSearch(fake)); };

  ::unsetenv("NYT_API_KEY");
  const Run missing = run(args, factory);
  CHECK(missing.code == 2);
  CHECK(missing.err.find("NYT_API_KEY") != std::string::npos);
  CHECK(*fake.calls == 0);

  ::setenv("NYT_API_KEY", "test-key", 1);
  const Run first = run(args, factory);
  REQUIRE(first.code == 0);
  CHECK(first.out == "adapter=nyt articles=3 pages=1 http_requests=1 cache_hits=0\n");
  CHECK(load_corpus(dir / "out" / "corpus.jsonl").size() == 3);

  const Run cached = run(args, factory);
  CHECK(cached.code == 0);
  CHECK(cached.out == "adapter=nyt articles=3 pages=1 http_requests=0 cache_hits=1\n");
  CHECK(*fake.calls == 1);
  ::unsetenv("NYT_API_KEY");

  auto bad = args;
  bad[4] = "2014-13-45";
  CHECK(run(bad, factory).code == 2);
}
