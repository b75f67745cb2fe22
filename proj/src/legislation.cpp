#include "newsframe/legislation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "newsframe/error.hpp"

namespace newsframe {

std::string_view to_string(PredictorMode m) { return m == PredictorMode::Anomaly ? "Anomaly" : "ClassConditional"; }

std::optional<PredictorMode> parse_predictor_mode(std::string_view s) {
  if (s == "Anomaly" || s == "anomaly") return PredictorMode::Anomaly;
  if (s == "ClassConditional" || s == "class_conditional" || s == "classconditional")
    return PredictorMode::ClassConditional;
  return std::nullopt;
}

std::string_view to_string(Prediction p) { return p == Prediction::Legislative ? "Legislative" : "NotLegislative"; }

// ---------------------------------------------------------------------------
// change series

namespace {

struct RawFeatures {
  std::vector<std::vector<double>> values;  // [feature][year]
  std::vector<std::vector<bool>> missing;
};

RawFeatures raw_features(const AnnualFeatureSeries& s) {
  s.validate();
  RawFeatures r;
  r.values.assign(kFeatureNames.size(), std::vector<double>(s.size(), 0.0));
  r.missing.assign(kFeatureNames.size(), std::vector<bool>(s.size(), false));
  for (std::size_t y = 0; y < s.size(); ++y) {
    r.values[0][y] = static_cast<double>(s.volume[y]);
    r.values[1][y] = s.mean_sentiment[y].value_or(0.0);
    r.missing[1][y] = !s.mean_sentiment[y];
    r.values[2][y] = s.mnc[y].value_or(0.0);
    r.missing[2][y] = !s.mnc[y];
  }
  return r;
}

}  // namespace

FeatureDiffSeries normalized_annual_diffs(const AnnualFeatureSeries& series) {
  if (series.size() < 2) throw Error(Errc::TooFewYears, "annual differences need at least two years");
  const RawFeatures raw = raw_features(series);
  FeatureDiffSeries out;
  out.topic = series.topic;
  out.features = kFeatureNames;
  out.years.assign(series.years.begin() + 1, series.years.end());
  out.legislative.assign(series.legislative.begin() + 1, series.legislative.end());
  for (std::size_t f = 0; f < kFeatureNames.size(); ++f) {
    std::vector<double> d(series.size() - 1);
    std::vector<bool> imp(series.size() - 1);
    for (std::size_t t = 1; t < series.size(); ++t) {
      d[t - 1] = std::abs(raw.values[f][t] - raw.values[f][t - 1]);
      imp[t - 1] = raw.missing[f][t] || raw.missing[f][t - 1];
    }
    const double mx = *std::max_element(d.begin(), d.end());
    if (mx > 0.0)
      for (double& v : d) v /= mx;
    out.values.push_back(std::move(d));
    out.imputed.push_back(std::move(imp));
  }
  return out;
}

FeatureDiffSeries normalized_raw_values(const AnnualFeatureSeries& series) {
  if (series.size() < 2) throw Error(Errc::TooFewYears, "change pairs need at least two years");
  const RawFeatures raw = raw_features(series);
  FeatureDiffSeries out;
  out.topic = series.topic;
  out.features = kFeatureNames;
  out.years = series.years;
  out.legislative = series.legislative;
  for (std::size_t f = 0; f < kFeatureNames.size(); ++f) {
    std::vector<double> v = raw.values[f];
    const auto [lo, hi] = std::minmax_element(v.begin(), v.end());
    const double a = *lo, span = *hi - *lo;
    for (double& x : v) x = span > 0.0 ? (x - a) / span : 0.0;
    out.values.push_back(std::move(v));
    out.imputed.push_back(raw.missing[f]);
  }
  return out;
}

FeatureDiffSeries change_series(const AnnualFeatureSeries& series, PairSource source) {
  return source == PairSource::Diffs ? normalized_annual_diffs(series) : normalized_raw_values(series);
}

// ---------------------------------------------------------------------------
// conditionals

namespace {
void check_cell(const JointTable& joint, std::size_t x1, std::size_t x2) {
  if (x1 >= static_cast<std::size_t>(joint.rows()) || x2 >= static_cast<std::size_t>(joint.cols()))
    throw Error(Errc::IndexOutOfRange, "bin index outside the joint table");
}
}  // namespace

double conditional_direct(const JointTable& joint, std::size_t x1, std::size_t x2) {
  check_cell(joint, x1, x2);
  const auto r = static_cast<Eigen::Index>(x1);
  const double row = joint.row(r).sum();
  if (!(row > 0.0)) throw Error(Errc::EmptyRow, "joint row " + std::to_string(x1) + " has no mass");
  return joint(r, static_cast<Eigen::Index>(x2)) / row;
}

double conditional_bayes(const JointTable& joint, std::size_t x1, std::size_t x2) {
  check_cell(joint, x1, x2);
  const auto r = static_cast<Eigen::Index>(x1);
  if (!(joint.row(r).sum() > 0.0)) throw Error(Errc::EmptyRow, "joint row " + std::to_string(x1) + " has no mass");
  const double total = joint.sum();
  double numerator = 0.0, evidence = 0.0;
  for (Eigen::Index c = 0; c < joint.cols(); ++c) {
    const double col = joint.col(c).sum();
    if (!(col > 0.0)) continue;  // P(x2) = 0 contributes nothing
    const double likelihood = joint(r, c) / col;  // P(x1 | x2)
    const double prior = col / total;             // P(x2)
    evidence += likelihood * prior;
    if (c == static_cast<Eigen::Index>(x2)) numerator = likelihood * prior;
  }
  return numerator / evidence;
}

// ---------------------------------------------------------------------------
// fitting

std::size_t bin_of(double value, std::size_t bins) {
  if (!(value >= 0.0 && value <= 1.0)) throw Error(Errc::InvalidArgument, "change values must lie in [0, 1]");
  return std::min(bins - 1, static_cast<std::size_t>(std::floor(value * static_cast<double>(bins))));
}

namespace {

void check_options(const ModelOptions& o) {
  if (o.bins < 2) throw Error(Errc::InvalidArgument, "bins must be >= 2");
  if (!(o.alpha >= 0.0)) throw Error(Errc::InvalidArgument, "alpha must be >= 0");
  if (o.mode == PredictorMode::Anomaly && !(o.t > 0.0 && o.t < 1.0))
    throw Error(Errc::InvalidArgument, "anomaly threshold t must lie in (0, 1)");
}

void warn_empty_rows(LegislationModel& m, const std::vector<JointTable>& tables, const std::string& what) {
  for (std::size_t f = 0; f < tables.size(); ++f) {
    for (Eigen::Index r = 0; r < tables[f].rows(); ++r) {
      if (!(tables[f].row(r).sum() > 0.0))
        m.warnings.push_back(what + " table for " + m.features[f] + " has an empty row " + std::to_string(r) +
                             "; predictions landing there will fail");
    }
  }
}

}  // namespace

LegislationModel fit_model(const std::vector<FeatureDiffSeries>& data, const ModelOptions& opts) {
  check_options(opts);
  if (data.empty()) throw Error(Errc::NoTrainingPairs, "no training series");
  LegislationModel m;
  m.features = data.front().features;
  m.bins = opts.bins;
  m.alpha = opts.alpha;
  m.mode = opts.mode;
  m.t = opts.t;
  const std::size_t nf = m.features.size();
  std::vector<double> edges(opts.bins + 1);
  for (std::size_t i = 0; i <= opts.bins; ++i) edges[i] = static_cast<double>(i) / static_cast<double>(opts.bins);
  m.bin_edges.assign(nf, edges);

  const auto b = static_cast<Eigen::Index>(opts.bins);
  m.joint.assign(nf, JointTable::Zero(b, b));
  m.class_joint.assign(2, std::vector<JointTable>(nf, JointTable::Zero(b, b)));
  std::size_t class_pairs[2] = {0, 0};

  for (const auto& s : data) {
    if (s.features != m.features) throw Error(Errc::InvalidArgument, "series " + s.topic + " has different features");
    for (std::size_t t = 1; t < s.size(); ++t) {
      if (!s.legislative[t]) continue;
      const int cls = *s.legislative[t] ? 1 : 0;
      if (opts.mode == PredictorMode::Anomaly && cls == 1) continue;
      for (std::size_t f = 0; f < nf; ++f) {
        const auto x1 = static_cast<Eigen::Index>(bin_of(s.values[f][t - 1], opts.bins));
        const auto x2 = static_cast<Eigen::Index>(bin_of(s.values[f][t], opts.bins));
        m.joint[f](x1, x2) += 1.0;
        m.class_joint[static_cast<std::size_t>(cls)][f](x1, x2) += 1.0;
      }
      ++class_pairs[cls];
    }
  }
  m.training_pairs = class_pairs[0] + class_pairs[1];
  if (m.training_pairs == 0) throw Error(Errc::NoTrainingPairs, "no labelled consecutive-year pairs to train on");

  for (auto& j : m.joint) j.array() += opts.alpha;
  for (auto& cls : m.class_joint)
    for (auto& j : cls) j.array() += opts.alpha;

  if (opts.mode == PredictorMode::Anomaly) {
    m.class_joint.clear();
    warn_empty_rows(m, m.joint, "joint");
  } else {
    m.prior_legislative = static_cast<double>(class_pairs[1]) / static_cast<double>(m.training_pairs);
    warn_empty_rows(m, m.class_joint[0], "non-legislative");
    warn_empty_rows(m, m.class_joint[1], "legislative");
  }
  return m;
}

double conditional(const LegislationModel& model, std::size_t feature, std::size_t x1_bin, std::size_t x2_bin) {
  if (feature >= model.joint.size()) throw Error(Errc::IndexOutOfRange, "feature index out of range");
  return conditional_bayes(model.joint[feature], x1_bin, x2_bin);
}

// ---------------------------------------------------------------------------
// prediction

std::vector<YearObservation> observations(const FeatureDiffSeries& s) {
  std::vector<YearObservation> out;
  for (std::size_t t = 1; t < s.size(); ++t) {
    YearObservation o;
    o.topic = s.topic;
    o.year = s.years[t];
    o.legislative = s.legislative[t];
    for (std::size_t f = 0; f < s.features.size(); ++f) {
      o.x1.push_back(s.values[f][t - 1]);
      o.x2.push_back(s.values[f][t]);
    }
    out.push_back(std::move(o));
  }
  return out;
}

namespace {

double log_product(const LegislationModel& model, const std::vector<JointTable>& tables, const YearObservation& obs) {
  if (obs.x1.size() != tables.size() || obs.x2.size() != tables.size())
    throw Error(Errc::DimensionMismatch, "observation feature count differs from the model");
  double lp = 0.0;
  for (std::size_t f = 0; f < tables.size(); ++f) {
    const double p = conditional_bayes(tables[f], bin_of(obs.x1[f], model.bins), bin_of(obs.x2[f], model.bins));
    lp += std::log(p);
  }
  return lp;
}

}  // namespace

double posterior(const LegislationModel& model, const YearObservation& obs) {
  if (model.mode == PredictorMode::Anomaly) return std::exp(log_product(model, model.joint, obs));

  const double neg_inf = -std::numeric_limits<double>::infinity();
  const double ll = model.prior_legislative > 0.0
                        ? std::log(model.prior_legislative) + log_product(model, model.class_joint[1], obs)
                        : neg_inf;
  const double ln = model.prior_legislative < 1.0
                        ? std::log(1.0 - model.prior_legislative) + log_product(model, model.class_joint[0], obs)
                        : neg_inf;
  const double mx = std::max(ll, ln);
  if (mx == neg_inf) return 0.0;
  return std::exp(ll - mx) / (std::exp(ll - mx) + std::exp(ln - mx));
}

Prediction predict(const LegislationModel& model, const YearObservation& obs) {
  const double p = posterior(model, obs);
  const bool legislative = model.mode == PredictorMode::Anomaly ? p < model.t : p > 0.5;
  return legislative ? Prediction::Legislative : Prediction::NotLegislative;
}

std::vector<YearPrediction> predict_series(const LegislationModel& model, const FeatureDiffSeries& s) {
  std::vector<YearPrediction> out;
  for (const auto& obs : observations(s)) {
    YearPrediction p;
    p.topic = s.topic;
    p.year = obs.year;
    p.posterior = posterior(model, obs);
    p.label = (model.mode == PredictorMode::Anomaly ? p.posterior < model.t : p.posterior > 0.5)
                  ? Prediction::Legislative
                  : Prediction::NotLegislative;
    p.truth = obs.legislative;
    out.push_back(p);
  }
  return out;
}

LooReport loo_evaluate(const std::vector<FeatureDiffSeries>& data, const ModelOptions& opts) {
  if (data.size() < 2) throw Error(Errc::InvalidArgument, "leave-one-out needs at least two topics");
  LooReport report;
  for (std::size_t held = 0; held < data.size(); ++held) {
    std::vector<FeatureDiffSeries> train;
    for (std::size_t i = 0; i < data.size(); ++i)
      if (i != held) train.push_back(data[i]);
    const LegislationModel model = fit_model(train, opts);

    TopicEvaluation ev;
    ev.topic = data[held].topic;
    ev.predictions = predict_series(model, data[held]);
    for (const auto& p : ev.predictions) {
      if (p.truth) ev.counts.add(p.label == Prediction::Legislative, *p.truth);
    }
    ev.scores = prf1(ev.counts);
    if (ev.counts.total() > 0) ev.accuracy = accuracy(ev.counts);
    report.overall += ev.counts;
    report.topics.push_back(std::move(ev));
  }
  report.overall_scores = prf1(report.overall);
  if (report.overall.total() > 0) report.overall_accuracy = accuracy(report.overall);
  return report;
}

}  // namespace newsframe
