// Thin pybind11 layer. Corpora cross the boundary as JSONL text and structured
// results as JSON text; the Python package converts both.

#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <map>
#include <sstream>
#include <string>
#include <vector>

#include "newsframe/app.hpp"
#include "newsframe/config.hpp"
#include "newsframe/datasets.hpp"
#include "newsframe/error.hpp"
#include "newsframe/framing.hpp"
#include "newsframe/ingest.hpp"
#include "newsframe/keywords.hpp"
#include "newsframe/legislation.hpp"
#include "newsframe/metrics.hpp"
#include "newsframe/newscycle.hpp"
#include "newsframe/report.hpp"

namespace py = pybind11;
using namespace newsframe;

namespace {

RunConfig config_from(const std::map<std::string, std::string>& options) {
  RunConfig cfg;
  for (const auto& [k, v] : options) cfg.set(k, v);
  cfg.validate();
  return cfg;
}

ScoreMode score_mode_of(const std::string& s) {
  auto m = parse_score_mode(s);
  if (!m) throw Error(Errc::InvalidArgument, "unknown score mode " + s);
  return *m;
}

py::dict series_to_dict(const AnnualFeatureSeries& s) {
  py::dict d;
  d["topic"] = s.topic;
  d["years"] = s.years;
  d["volume"] = s.volume;
  d["mean_sentiment"] = s.mean_sentiment;
  d["mnc"] = s.mnc;
  d["legislative"] = s.legislative;
  return d;
}

std::vector<std::string> ids_of(const Corpus& c) {
  std::vector<std::string> out;
  for (const auto& a : c.articles()) out.push_back(a.id);
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "newsframe native core";

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<ParseError>(m, "ParseError", base.ptr());

  m.def("config_keys", [] { return RunConfig::keys(); });

  m.def(
      "top_k_keywords",
      [](const std::string& t1, const std::string& t2, const std::map<std::string, std::string>& options) {
        const Corpus c1 = corpus_from_jsonl(t1), c2 = corpus_from_jsonl(t2);
        const KeywordSet ks = top_k_keywords(c1, c2, config_from(options).framing().keywords);
        std::vector<std::pair<std::string, double>> out;
        for (const auto& s : ks.keywords) out.emplace_back(s.ngram.text(), s.ig_bits);
        return out;
      },
      py::arg("t1_jsonl"), py::arg("t2_jsonl"), py::arg("options") = std::map<std::string, std::string>{});

  m.def(
      "detect_framing_change",
      [](const std::string& t1, const std::string& t2, const std::map<std::string, std::string>& options,
         const std::vector<double>& score_pool) {
        const Corpus c1 = corpus_from_jsonl(t1), c2 = corpus_from_jsonl(t2);
        FramingConfig fc = config_from(options).framing();
        fc.score_pool = score_pool;
        return framing_report_to_json(detect_framing_change(c1, c2, fc)).dump();
      },
      py::arg("t1_jsonl"), py::arg("t2_jsonl"), py::arg("options") = std::map<std::string, std::string>{},
      py::arg("score_pool") = std::vector<double>{});

  m.def("em_threshold", [](const std::vector<double>& scores) { return em_threshold(scores); }, py::arg("scores"));
  m.def(
      "classify_change",
      [](double score, double threshold, const std::string& mode) {
        return std::string(to_string(classify_change(score, threshold, score_mode_of(mode))));
      },
      py::arg("score"), py::arg("threshold"), py::arg("mode") = "mean_similarity");

  m.def(
      "annual_features",
      [](const std::string& corpus, const std::string& topic, const std::string& laws_csv,
         const std::map<std::string, std::string>& options) {
        const Corpus c = corpus_from_jsonl(corpus);
        std::map<int, bool> labels;
        if (!laws_csv.empty()) {
          const auto laws = laws_from_csv(laws_csv);
          // Years the laws file does not list count as non-legislative, as in the CLI.
          if (auto it = laws.find(topic); it != laws.end() && !c.empty()) {
            for (int y = c.period().start.year(); y <= c.period().end.year(); ++y) labels[y] = false;
            for (const auto& [y, flag] : it->second) labels[y] = flag;
          }
        }
        return series_to_dict(annual_features(c, Lexicon::bundled(), labels, config_from(options).cycle(), topic));
      },
      py::arg("corpus_jsonl"), py::arg("topic") = "", py::arg("laws_csv") = "",
      py::arg("options") = std::map<std::string, std::string>{});

  m.def(
      "mean_normalized_correlation",
      [](const std::vector<std::vector<std::uint32_t>>& rows) {
        if (rows.empty()) throw Error(Errc::TooFewArticles, "no rows");
        std::vector<NGram> vocab;
        for (std::size_t i = 0; i < rows.front().size(); ++i) vocab.push_back(NGram{"c" + std::to_string(i)});
        return mean_normalized_correlation(TfMatrix::from_dense(vocab, rows)).value;
      },
      py::arg("rows"));

  m.def(
      "loo_evaluate",
      [](const std::map<std::string, std::string>& series_csv, const std::map<std::string, std::string>& options) {
        const RunConfig cfg = config_from(options);
        std::vector<FeatureDiffSeries> data;
        for (const auto& [topic, csv] : series_csv)
          data.push_back(change_series(series_from_csv(csv, topic), cfg.pair_source));
        return loo_report_to_json(loo_evaluate(data, cfg.model_options())).dump();
      },
      py::arg("series_csv"), py::arg("options") = std::map<std::string, std::string>{});

  m.def(
      "cohens_kappa",
      [](const std::vector<std::string>& a, const std::vector<std::string>& b) { return cohens_kappa(a, b); },
      py::arg("codes_a"), py::arg("codes_b"));
  m.def(
      "prf1",
      [](std::uint64_t tp, std::uint64_t fp, std::uint64_t fn) {
        const Prf1 s = prf1(ConfusionCounts{tp, fp, fn, 0});
        return std::make_tuple(s.precision, s.recall, s.f1);
      },
      py::arg("tp"), py::arg("fp"), py::arg("fn"));

  m.def(
      "bootstrap_dataset",
      [](const std::string& seeds_csv, const std::string& universal, const std::map<std::string, std::string>& options) {
        const Corpus u = corpus_from_jsonl(universal);
        const TopicDataset ds = bootstrap_dataset(seeds_from_csv(seeds_csv), u, config_from(options).bootstrap());
        py::dict d;
        d["positives"] = ids_of(ds.positives);
        d["negatives"] = ids_of(ds.negatives);
        d["stage1_positive_ids"] = ds.stage1_positive_ids;
        d["provenance"] = provenance_to_json(ds.provenance).dump();
        return d;
      },
      py::arg("seeds_csv"), py::arg("universal_jsonl"), py::arg("options") = std::map<std::string, std::string>{});

  m.def(
      "run_cli",
      [](const std::vector<std::string>& args) {
        std::ostringstream out, err;
        const int code = run_cli(args, CliIo{out, err, {}});
        return std::make_tuple(code, out.str(), err.str());
      },
      py::arg("args"));
}
