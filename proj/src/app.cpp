#include "newsframe/app.hpp"

#include <algorithm>
#include <filesystem>
#include <map>
#include <optional>
#include <ostream>

#include <CLI11.hpp>

#include "newsframe/config.hpp"
#include "newsframe/datasets.hpp"
#include "newsframe/error.hpp"
#include "newsframe/format.hpp"
#include "newsframe/framing.hpp"
#include "newsframe/legislation.hpp"
#include "newsframe/newscycle.hpp"
#include "newsframe/report.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace newsframe {

namespace {

std::string flag_name(const std::string& key) {
  std::string s = key;
  std::replace(s.begin(), s.end(), '_', '-');
  return "--" + s;
}

// Options shared by every subcommand: --config plus one flag per config key.
struct CommandOptions {
  std::string config_path;
  std::map<std::string, std::string> values;
  CLI::App* app = nullptr;

  void attach(CLI::App* sub) {
    app = sub;
    sub->add_option("--config", config_path, "key = value config file");
    for (const auto& key : RunConfig::keys()) sub->add_option(flag_name(key), values[key]);
  }

  RunConfig resolve() const {
    RunConfig cfg;
    if (!config_path.empty()) cfg = load_config(config_path);
    for (const auto& key : RunConfig::keys())
      if (app->count(flag_name(key)) > 0) cfg.set(key, values.at(key));
    cfg.validate();
    return cfg;
  }
};

const std::string& require(const std::string& value, const char* key) {
  if (value.empty()) throw Error(Errc::InvalidArgument, std::string("missing required setting ") + flag_name(key));
  return value;
}

fs::path out_dir(const RunConfig& cfg) {
  fs::path dir = require(cfg.out, "out");
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(Errc::IoError, "cannot create " + dir.string() + ": " + ec.message());
  return dir;
}

json envelope(const std::string& command, const RunConfig& cfg, const std::vector<InputFile>& inputs) {
  return {{"command", command}, {"config", cfg.to_json()}, {"input_digest", input_digest(inputs)}};
}

Corpus corpus_from(const std::string& path, std::vector<InputFile>& inputs, const char* name) {
  std::string text = read_file(path);
  Corpus c = corpus_from_jsonl(text);
  inputs.push_back({name, std::move(text)});
  return c;
}

Period parse_period(const RunConfig& cfg) {
  auto from = Date::parse(require(cfg.from, "from"));
  auto to = Date::parse(require(cfg.to, "to"));
  if (!from || !to) throw Error(Errc::BadDate, "--from/--to must be dates");
  if (*to < *from) throw Error(Errc::InvalidArgument, "--to precedes --from");
  return {*from, *to};
}

// ---- commands ----

int cmd_fetch(const RunConfig& cfg, CliIo& io) {
  FetchJob job;
  job.adapter = SourceAdapter::by_name(cfg.adapter);
  job.keyword = require(cfg.query, "query");
  job.period = parse_period(cfg);
  job.max_pages = cfg.max_pages;
  job.cache_dir = cfg.cache_dir;
  job.requests_per_second = cfg.rps;
  const fs::path dir = out_dir(cfg);

  auto http = io.http ? io.http() : make_http_transport();
  RateLimiter limiter(cfg.rps);
  FetchStats stats;
  const Corpus corpus = fetch_topic(job, *http, limiter, &stats);
  save_corpus(corpus, dir / "corpus.jsonl");
  if (corpus.empty()) io.err << "warning: the query returned no articles\n";
  io.out << "adapter=" << job.adapter.label() << " articles=" << corpus.size() << " pages=" << stats.pages
         << " http_requests=" << stats.http_requests << " cache_hits=" << stats.cache_hits << "\n";
  return 0;
}

int cmd_framing(const RunConfig& cfg, CliIo& io) {
  std::vector<InputFile> inputs;
  const Corpus t1 = corpus_from(require(cfg.t1, "t1"), inputs, "t1");
  const Corpus t2 = corpus_from(require(cfg.t2, "t2"), inputs, "t2");
  FramingConfig fc = cfg.framing();
  if (!cfg.score_pool.empty()) inputs.push_back({"score_pool", read_file(cfg.score_pool)});
  const fs::path dir = out_dir(cfg);

  const FramingReport r = detect_framing_change(t1, t2, fc);
  json doc = envelope("framing", cfg, inputs);
  doc["report"] = framing_report_to_json(r);
  write_file_atomic(dir / "report.json", dump_json(doc));
  write_file_atomic(dir / "keywords.csv", keywords_csv(r.keyword_set));
  write_file_atomic(dir / "coordinates.csv", coordinates_csv(r.coordinates));
  io.out << "topic=" << r.topic << " score=" << format_double(r.score) << " threshold=" << format_double(r.threshold)
         << " decision=" << to_string(r.decision) << "\n";
  return 0;
}

int cmd_cycle(const RunConfig& cfg, CliIo& io) {
  std::vector<InputFile> inputs;
  const std::string& path = require(cfg.corpus, "corpus");
  const Corpus corpus = corpus_from(path, inputs, "corpus");
  const std::string topic = cfg.topic.empty() ? fs::path(path).stem().string() : cfg.topic;

  std::optional<Lexicon> lex;
  if (cfg.lexicons.empty()) {
    lex = Lexicon::bundled();
  } else {
    inputs.push_back({"positive", read_file(fs::path(cfg.lexicons) / "positive.txt")});
    inputs.push_back({"negative", read_file(fs::path(cfg.lexicons) / "negative.txt")});
    lex = Lexicon::load(cfg.lexicons);
  }
  std::map<int, bool> labels;
  if (!cfg.laws.empty()) {
    std::string text = read_file(cfg.laws);
    const auto laws = laws_from_csv(text);
    inputs.push_back({"laws", std::move(text)});
    if (auto it = laws.find(topic); it != laws.end()) {
      for (int y = corpus.period().start.year(); y <= corpus.period().end.year(); ++y) labels[y] = false;
      for (const auto& [y, flag] : it->second) labels[y] = flag;
    }
  }
  if (corpus.empty()) throw Error(Errc::EmptyCorpus, "corpus " + path + " has no articles");
  const fs::path dir = out_dir(cfg);

  const AnnualFeatureSeries s = annual_features(corpus, *lex, labels, cfg.cycle(), topic);
  write_file_atomic(dir / "series.csv", series_to_csv(s));
  json doc = envelope("cycle", cfg, inputs);
  doc["topic"] = topic;
  doc["years"] = s.years;
  write_file_atomic(dir / "run.json", dump_json(doc));

  std::uint64_t total = 0;
  for (auto v : s.volume) total += v;
  io.out << "topic=" << topic << " years=" << s.size() << " articles=" << total << "\n";
  return 0;
}

std::vector<AnnualFeatureSeries> load_series_dir(const RunConfig& cfg, std::vector<InputFile>& inputs) {
  const fs::path dir = require(cfg.series_dir, "series_dir");
  if (!fs::is_directory(dir)) throw Error(Errc::InvalidArgument, dir.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".csv") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (files.empty()) throw Error(Errc::InvalidArgument, "no series CSV files in " + dir.string());

  std::map<std::string, std::map<int, bool>> laws;
  if (!cfg.laws.empty()) {
    std::string text = read_file(cfg.laws);
    laws = laws_from_csv(text);
    inputs.push_back({"laws", std::move(text)});
  }

  std::vector<AnnualFeatureSeries> out;
  for (const auto& f : files) {
    std::string text = read_file(f);
    const std::string topic = f.stem().string();
    AnnualFeatureSeries s = series_from_csv(text, topic);
    inputs.push_back({"series/" + f.filename().string(), std::move(text)});
    // A topic listed in the laws file takes its labels from there; unlisted years had no law.
    if (auto it = laws.find(topic); it != laws.end()) {
      for (std::size_t i = 0; i < s.size(); ++i) {
        auto y = it->second.find(s.years[i]);
        s.legislative[i] = y != it->second.end() && y->second;
      }
    }
    out.push_back(std::move(s));
  }
  return out;
}

std::vector<FeatureDiffSeries> changes(const std::vector<AnnualFeatureSeries>& series, PairSource src) {
  std::vector<FeatureDiffSeries> out;
  for (const auto& s : series) out.push_back(change_series(s, src));
  return out;
}

int cmd_legislate(const std::string& action, const RunConfig& cfg, CliIo& io) {
  std::vector<InputFile> inputs;
  const auto series = load_series_dir(cfg, inputs);
  const auto data = changes(series, cfg.pair_source);

  if (action == "fit") {
    const fs::path dir = out_dir(cfg);
    const LegislationModel m = fit_model(data, cfg.model_options());
    json doc = envelope("legislate fit", cfg, inputs);
    doc["model"] = model_to_json(m);
    write_file_atomic(dir / "model.json", dump_json(doc));
    for (const auto& w : m.warnings) io.err << "warning: " << w << "\n";
    io.out << "mode=" << to_string(m.mode) << " topics=" << data.size() << " training_pairs=" << m.training_pairs
           << " warnings=" << m.warnings.size() << "\n";
    return 0;
  }

  if (action == "predict") {
    std::string text = read_file(require(cfg.model, "model"));
    json j;
    try {
      j = json::parse(text);
    } catch (const json::parse_error& e) {
      throw Error(Errc::ParseError, std::string("model file: ") + e.what());
    }
    const LegislationModel m = model_from_json(j.contains("model") ? j.at("model") : j);
    inputs.push_back({"model", std::move(text)});
    const fs::path dir = out_dir(cfg);

    std::vector<YearPrediction> preds;
    for (const auto& s : data) {
      auto p = predict_series(m, s);
      preds.insert(preds.end(), p.begin(), p.end());
    }
    write_file_atomic(dir / "predictions.csv", predictions_csv(preds));
    write_file_atomic(dir / "run.json", dump_json(envelope("legislate predict", cfg, inputs)));
    const auto positives =
        std::count_if(preds.begin(), preds.end(), [](const YearPrediction& p) { return p.label == Prediction::Legislative; });
    io.out << "predictions=" << preds.size() << " legislative=" << positives << "\n";
    return 0;
  }

  // loo
  const LooReport r = loo_evaluate(data, cfg.model_options());
  const fs::path dir = out_dir(cfg);
  json doc = envelope("legislate loo", cfg, inputs);
  doc["metrics"] = loo_report_to_json(r);
  write_file_atomic(dir / "loo.json", dump_json(doc));
  io.out << "topics=" << r.topics.size() << " precision=" << format_double(r.overall_scores.precision)
         << " recall=" << format_double(r.overall_scores.recall) << " f1=" << format_double(r.overall_scores.f1)
         << "\n";
  return 0;
}

int cmd_bootstrap(const RunConfig& cfg, CliIo& io) {
  std::vector<InputFile> inputs;
  std::string seed_text = read_file(require(cfg.seeds, "seeds"));
  const auto seeds = seeds_from_csv(seed_text);
  inputs.push_back({"seeds", std::move(seed_text)});
  const Corpus universal = corpus_from(require(cfg.universal, "universal"), inputs, "universal");
  const fs::path dir = out_dir(cfg);

  const TopicDataset ds = bootstrap_dataset(seeds, universal, cfg.bootstrap());
  save_corpus(ds.positives, dir / "positives.jsonl");
  save_corpus(ds.negatives, dir / "negatives.jsonl");
  json doc = envelope("bootstrap", cfg, inputs);
  doc["provenance"] = provenance_to_json(ds.provenance);
  write_file_atomic(dir / "provenance.json", dump_json(doc));
  const auto& p = ds.provenance;
  io.out << "positives=" << p.final_positives << " negatives=" << p.final_negatives << " k_positive=" << p.k_positive
         << " m_positive=" << p.m_positive << " m_negative=" << p.m_negative << "\n";
  return 0;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, CliIo io) {
  CLI::App app{"News framing, news-cycle and legislation analysis", "newsframe"};
  app.require_subcommand(1);

  CommandOptions fetch, framing, cycle, bootstrap, fit, predict, loo;
  fetch.attach(app.add_subcommand("fetch", "Download and cache a topic search"));
  framing.attach(app.add_subcommand("framing", "Detect a framing change between two corpora"));
  cycle.attach(app.add_subcommand("cycle", "Annual news-cycle features of one topic"));
  bootstrap.attach(app.add_subcommand("bootstrap", "Build a topic dataset from seed labels"));
  auto* legislate = app.add_subcommand("legislate", "Legislation prediction");
  legislate->require_subcommand(1);
  fit.attach(legislate->add_subcommand("fit", "Fit the change model"));
  predict.attach(legislate->add_subcommand("predict", "Predict per-year labels with a fitted model"));
  loo.attach(legislate->add_subcommand("loo", "Leave-one-topic-out evaluation"));

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, io.out, io.err);
    return code == 0 ? 0 : 2;
  }

  try {
    if (app.got_subcommand("fetch")) return cmd_fetch(fetch.resolve(), io);
    if (app.got_subcommand("framing")) return cmd_framing(framing.resolve(), io);
    if (app.got_subcommand("cycle")) return cmd_cycle(cycle.resolve(), io);
    if (app.got_subcommand("bootstrap")) return cmd_bootstrap(bootstrap.resolve(), io);
    if (legislate->got_subcommand("fit")) return cmd_legislate("fit", fit.resolve(), io);
    if (legislate->got_subcommand("predict")) return cmd_legislate("predict", predict.resolve(), io);
    return cmd_legislate("loo", loo.resolve(), io);
  } catch (const Error& e) {
    io.err << "error: " << e.what() << "\n";
    return is_input_error(e.code()) ? 2 : 3;
  } catch (const fs::filesystem_error& e) {
    io.err << "error: " << e.what() << "\n";
    return 3;
  } catch (const std::exception& e) {
    io.err << "error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace newsframe
