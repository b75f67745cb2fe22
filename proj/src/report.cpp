#include "newsframe/report.hpp"

#include "newsframe/error.hpp"
#include "newsframe/format.hpp"
#include "newsframe/ingest.hpp"

namespace newsframe {

using nlohmann::json;

std::string dump_json(const json& j) { return j.dump(2) + "\n"; }

std::string input_digest(const std::vector<InputFile>& inputs) {
  std::string joined;
  for (const auto& in : inputs) {
    joined += in.name;
    joined += '\0';
    joined += sha256_hex(in.content);
    joined += '\n';
  }
  return sha256_hex(joined);
}

json period_to_json(const Period& p) { return {{"start", p.start.iso()}, {"end", p.end.iso()}}; }

namespace {

json counts_to_json(const ConfusionCounts& c) {
  return {{"tp", c.tp}, {"fp", c.fp}, {"fn", c.fn}, {"tn", c.tn}};
}

json scores_to_json(const Prf1& s) { return {{"precision", s.precision}, {"recall", s.recall}, {"f1", s.f1}}; }

json optional_number(const std::optional<double>& v) { return v ? json(*v) : json(nullptr); }

json table_to_json(const JointTable& t) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < t.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < t.cols(); ++c) row.push_back(t(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

JointTable table_from_json(const json& j) {
  const auto rows = static_cast<Eigen::Index>(j.size());
  const auto cols = rows > 0 ? static_cast<Eigen::Index>(j.at(0).size()) : 0;
  JointTable t(rows, cols);
  for (Eigen::Index r = 0; r < rows; ++r) {
    const auto& row = j.at(static_cast<std::size_t>(r));
    if (static_cast<Eigen::Index>(row.size()) != cols) throw Error(Errc::DimensionMismatch, "ragged joint table");
    for (Eigen::Index c = 0; c < cols; ++c) t(r, c) = row.at(static_cast<std::size_t>(c)).get<double>();
  }
  return t;
}

}  // namespace

json framing_report_to_json(const FramingReport& r) {
  json keywords = json::array();
  for (const auto& k : r.keyword_set.keywords) keywords.push_back({{"ngram", k.ngram.text()}, {"ig_bits", k.ig_bits}});
  json pairs = json::array();
  for (const auto& p : r.distances.pairs)
    pairs.push_back({{"a", p.a.text()}, {"b", p.b.text()}, {"wmd", p.wmd}, {"similarity", p.similarity}});
  json coords = json::array();
  for (const auto& p : r.coordinates) coords.push_back({{"ngram", p.ngram.text()}, {"x", p.x}, {"y", p.y}});
  json sv = json::array();
  for (Eigen::Index i = 0; i < r.singular_values.size(); ++i) sv.push_back(r.singular_values[i]);

  return {
      {"topic", r.topic},
      {"period1", period_to_json(r.period1)},
      {"period2", period_to_json(r.period2)},
      {"keywords", keywords},
      {"combined_vocab_size", r.keyword_set.combined_vocab_size},
      {"distances", {{"pairs", pairs}, {"mean_similarity", r.distances.mean_similarity},
                     {"median_wmd", r.distances.median_wmd}}},
      {"coordinates", coords},
      {"singular_values", sv},
      {"score", r.score},
      {"score_mode", std::string(to_string(r.score_mode))},
      {"threshold", r.threshold},
      {"threshold_mode", std::string(to_string(r.threshold_mode))},
      {"decision", std::string(to_string(r.decision))},
  };
}

std::string keywords_csv(const KeywordSet& ks) {
  std::string out = "ngram,ig_bits\n";
  for (const auto& k : ks.keywords) out += csv_escape(k.ngram.text()) + "," + format_double(k.ig_bits) + "\n";
  return out;
}

std::string coordinates_csv(const std::vector<Point2d>& pts) {
  std::string out = "ngram,x,y\n";
  for (const auto& p : pts) out += csv_escape(p.ngram.text()) + "," + format_double(p.x) + "," + format_double(p.y) + "\n";
  return out;
}

std::string distances_csv(const KeywordDistanceReport& d) {
  std::string out = "a,b,wmd,similarity\n";
  for (const auto& p : d.pairs)
    out += csv_escape(p.a.text()) + "," + csv_escape(p.b.text()) + "," + format_double(p.wmd) + "," +
           format_double(p.similarity) + "\n";
  return out;
}

json model_to_json(const LegislationModel& m) {
  json joint = json::array();
  for (const auto& t : m.joint) joint.push_back(table_to_json(t));
  json class_joint = json::array();
  for (const auto& cls : m.class_joint) {
    json tables = json::array();
    for (const auto& t : cls) tables.push_back(table_to_json(t));
    class_joint.push_back(std::move(tables));
  }
  return {
      {"features", m.features},
      {"bins", m.bins},
      {"bin_edges", m.bin_edges},
      {"alpha", m.alpha},
      {"mode", std::string(to_string(m.mode))},
      {"t", m.t},
      {"joint", joint},
      {"class_joint", class_joint},
      {"prior_legislative", m.prior_legislative},
      {"training_pairs", m.training_pairs},
      {"warnings", m.warnings},
  };
}

LegislationModel model_from_json(const json& j) {
  try {
    LegislationModel m;
    m.features = j.at("features").get<std::vector<std::string>>();
    m.bins = j.at("bins").get<std::size_t>();
    m.bin_edges = j.at("bin_edges").get<std::vector<std::vector<double>>>();
    m.alpha = j.at("alpha").get<double>();
    auto mode = parse_predictor_mode(j.at("mode").get<std::string>());
    if (!mode) throw Error(Errc::InvalidArgument, "unknown predictor mode");
    m.mode = *mode;
    m.t = j.at("t").get<double>();
    for (const auto& t : j.at("joint")) m.joint.push_back(table_from_json(t));
    for (const auto& cls : j.at("class_joint")) {
      std::vector<JointTable> tables;
      for (const auto& t : cls) tables.push_back(table_from_json(t));
      m.class_joint.push_back(std::move(tables));
    }
    m.prior_legislative = j.at("prior_legislative").get<double>();
    m.training_pairs = j.at("training_pairs").get<std::size_t>();
    m.warnings = j.at("warnings").get<std::vector<std::string>>();
    return m;
  } catch (const json::exception& e) {
    throw Error(Errc::MissingField, std::string("model JSON: ") + e.what());
  }
}

std::string predictions_csv(const std::vector<YearPrediction>& preds) {
  std::string out = "topic,year,posterior,label\n";
  for (const auto& p : preds)
    out += csv_escape(p.topic) + "," + std::to_string(p.year) + "," + format_double(p.posterior) + "," +
           std::string(to_string(p.label)) + "\n";
  return out;
}

json loo_report_to_json(const LooReport& r) {
  json topics = json::array();
  for (const auto& t : r.topics) {
    json preds = json::array();
    for (const auto& p : t.predictions) {
      preds.push_back({{"year", p.year},
                       {"posterior", p.posterior},
                       {"label", std::string(to_string(p.label))},
                       {"truth", p.truth ? json(*p.truth) : json(nullptr)}});
    }
    json entry = scores_to_json(t.scores);
    entry["topic"] = t.topic;
    entry["counts"] = counts_to_json(t.counts);
    entry["accuracy"] = optional_number(t.accuracy);
    entry["predictions"] = preds;
    topics.push_back(std::move(entry));
  }
  json overall = scores_to_json(r.overall_scores);
  overall["counts"] = counts_to_json(r.overall);
  overall["accuracy"] = optional_number(r.overall_accuracy);
  overall["averaging"] = "micro";
  return {{"topics", topics}, {"overall", overall}};
}

json provenance_to_json(const BootstrapProvenance& p) {
  return {
      {"universal_size", p.universal_size},
      {"vocab_size", p.vocab_size},
      {"seed_size", p.seed_size},
      {"seed_positives", p.seed_positives},
      {"seed_negatives", p.seed_negatives},
      {"k_positive", p.k_positive},
      {"k_negative", p.k_negative},
      {"m_positive", p.m_positive},
      {"m_negative", p.m_negative},
      {"stage2_training_size", p.stage2_training_size},
      {"stage1_positives", p.stage1_positives},
      {"final_positives", p.final_positives},
      {"final_negatives", p.final_negatives},
      {"include_seeds_in_stage2", p.include_seeds_in_stage2},
  };
}

std::map<std::string, std::map<int, bool>> laws_from_csv(std::string_view text) {
  std::map<std::string, std::map<int, bool>> out;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto cells = split_csv_line(lines[i].text);
    if (i == 0 && !cells.empty() && cells[0] == "topic") continue;
    if (cells.size() < 3) throw ParseError(lines[i].number, "expected topic,year,count");
    const auto year = parse_int(cells[1]);
    const auto count = parse_int(cells[2]);
    if (!year || !count || *count < 0) throw ParseError(lines[i].number, "bad year or count");
    bool& flag = out[std::string(trim(cells[0]))][static_cast<int>(*year)];
    flag = flag || *count >= 1;
  }
  return out;
}

}  // namespace newsframe
