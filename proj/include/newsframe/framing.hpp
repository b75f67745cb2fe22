#pragma once

#include <optional>
#include <string>
#include <vector>

#include "newsframe/corpus.hpp"
#include "newsframe/keywords.hpp"
#include "newsframe/semantics.hpp"

namespace newsframe {

enum class ScoreMode { MeanSimilarity, MedianDistance };
enum class ThresholdMode { Fixed, Median, EM };
enum class Decision { Significant, NotSignificant };

std::string_view to_string(ScoreMode m);
std::string_view to_string(ThresholdMode m);
std::string_view to_string(Decision d);
std::optional<ScoreMode> parse_score_mode(std::string_view s);
std::optional<ThresholdMode> parse_threshold_mode(std::string_view s);

double framing_score(const KeywordDistanceReport& report, ScoreMode mode);

struct GaussianComponent {
  double weight = 0.0;
  double mean = 0.0;
  double variance = 0.0;
};

struct EmFit {
  GaussianComponent low;   // component with the smaller mean
  GaussianComponent high;
  double threshold = 0.0;  // equal-responsibility point between the means
  double log_likelihood = 0.0;
  int iterations = 0;
};

struct EmOptions {
  int max_iterations = 200;
  double tolerance = 1e-10;     // on the change in log-likelihood
  double variance_floor = 1e-6;
};

/// Two-component 1-D Gaussian mixture fitted by EM, initialised from a
/// k-means split seeded at the minimum and maximum score. Needs at least
/// four scores with nonzero spread.
EmFit fit_two_gaussians(const std::vector<double>& scores, const EmOptions& opts = {});

// The decision boundary of fit_two_gaussians.
double em_threshold(const std::vector<double>& scores, const EmOptions& opts = {});

// MeanSimilarity: Significant iff score >= threshold. MedianDistance: iff score <= threshold.
Decision classify_change(double score, double threshold, ScoreMode mode);

struct FramingConfig {
  std::string topic;
  KeywordOptions keywords;  // k = 6 by default
  std::size_t embedding_dims = 3;
  std::size_t window = 5;
  Weighting weighting = Weighting::Ppmi;
  ScoreMode score_mode = ScoreMode::MeanSimilarity;
  ThresholdMode threshold_mode = ThresholdMode::Fixed;
  double threshold = 0.15;
  // Cross-topic calibration pool; required by the Median and EM threshold modes.
  std::vector<double> score_pool;
};

struct FramingReport {
  std::string topic;
  Period period1;
  Period period2;
  KeywordSet keyword_set;
  KeywordDistanceReport distances;
  std::vector<Point2d> coordinates;
  Eigen::VectorXd singular_values;
  double score = 0.0;
  ScoreMode score_mode = ScoreMode::MeanSimilarity;
  double threshold = 0.0;
  ThresholdMode threshold_mode = ThresholdMode::Fixed;
  Decision decision = Decision::NotSignificant;
};

double resolve_threshold(const FramingConfig& config);

/// Keywords -> co-occurrence space over t1 ∪ t2 -> embedding -> pairwise WMD ->
/// score -> decision.
FramingReport detect_framing_change(const Corpus& t1, const Corpus& t2, const FramingConfig& config);

}  // namespace newsframe
