#pragma once

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "newsframe/metrics.hpp"
#include "newsframe/newscycle.hpp"

namespace newsframe {

// Features in series order.
inline const std::vector<std::string> kFeatureNames = {"volume", "mean_sentiment", "mnc"};

enum class PairSource {
  Diffs,  // consecutive absolute normalized annual differences (default)
  Raw,    // consecutive min-max normalized raw values
};

/// Per-feature change values in [0, 1], one column per year. For Diffs,
/// column t holds |f(year_t) - f(year_t - 1)| / max over the series.
struct FeatureDiffSeries {
  std::string topic;
  std::vector<std::string> features;
  std::vector<int> years;
  std::vector<std::vector<double>> values;  // [feature][t]
  std::vector<std::vector<bool>> imputed;   // a missing raw value was read as 0
  std::vector<std::optional<bool>> legislative;

  std::size_t size() const { return years.size(); }
};

FeatureDiffSeries normalized_annual_diffs(const AnnualFeatureSeries& series);
FeatureDiffSeries normalized_raw_values(const AnnualFeatureSeries& series);
FeatureDiffSeries change_series(const AnnualFeatureSeries& series, PairSource source);

enum class PredictorMode { Anomaly, ClassConditional };
enum class Prediction { Legislative, NotLegislative };

std::string_view to_string(PredictorMode m);
std::optional<PredictorMode> parse_predictor_mode(std::string_view s);
std::string_view to_string(Prediction p);

struct ModelOptions {
  std::size_t bins = 5;
  double alpha = 1.0;
  PredictorMode mode = PredictorMode::Anomaly;
  double t = 0.05;
};

// Joint table convention: rows index the earlier observation x1, columns x2.
using JointTable = Eigen::MatrixXd;

/// P(x2 | x1) by Bayes' rule on the joint: P(x1 | x2) P(x2) / sum_x2' P(x1 | x2') P(x2').
/// Throws EmptyRow when row x1 carries no mass.
double conditional_bayes(const JointTable& joint, std::size_t x1, std::size_t x2);
// joint(x1, x2) / sum_x2' joint(x1, x2').
double conditional_direct(const JointTable& joint, std::size_t x1, std::size_t x2);

struct LegislationModel {
  std::vector<std::string> features;
  std::size_t bins = 5;
  std::vector<std::vector<double>> bin_edges;  // [feature] -> bins + 1 edges over [0, 1]
  double alpha = 1.0;
  PredictorMode mode = PredictorMode::Anomaly;
  double t = 0.05;
  // Anomaly: [feature] tables over non-legislative years.
  std::vector<JointTable> joint;
  // ClassConditional: [class][feature], class 0 = not legislative, 1 = legislative.
  std::vector<std::vector<JointTable>> class_joint;
  double prior_legislative = 0.0;
  std::size_t training_pairs = 0;
  std::vector<std::string> warnings;
};

std::size_t bin_of(double value, std::size_t bins);

LegislationModel fit_model(const std::vector<FeatureDiffSeries>& data, const ModelOptions& opts);

double conditional(const LegislationModel& model, std::size_t feature, std::size_t x1_bin, std::size_t x2_bin);

/// One predictable year: per-feature change values for the previous and current year.
struct YearObservation {
  std::string topic;
  int year = 0;
  std::vector<double> x1;
  std::vector<double> x2;
  std::optional<bool> legislative;
};

std::vector<YearObservation> observations(const FeatureDiffSeries& s);

// Anomaly: prod_f P_f(x2 | x1) under the non-legislative model.
// ClassConditional: P(legislative | observation).
double posterior(const LegislationModel& model, const YearObservation& obs);

Prediction predict(const LegislationModel& model, const YearObservation& obs);

struct YearPrediction {
  std::string topic;
  int year = 0;
  double posterior = 0.0;
  Prediction label = Prediction::NotLegislative;
  std::optional<bool> truth;
};

struct TopicEvaluation {
  std::string topic;
  ConfusionCounts counts;
  Prf1 scores;
  std::optional<double> accuracy;
  std::vector<YearPrediction> predictions;
};

struct LooReport {
  std::vector<TopicEvaluation> topics;
  ConfusionCounts overall;
  Prf1 overall_scores;  // micro-averaged
  std::optional<double> overall_accuracy;
};

std::vector<YearPrediction> predict_series(const LegislationModel& model, const FeatureDiffSeries& s);

// Hold out each topic in turn, train on the rest.
LooReport loo_evaluate(const std::vector<FeatureDiffSeries>& data, const ModelOptions& opts);

}  // namespace newsframe
