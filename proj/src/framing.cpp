#include "newsframe/framing.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "newsframe/error.hpp"

namespace newsframe {

std::string_view to_string(ScoreMode m) {
  return m == ScoreMode::MeanSimilarity ? "MeanSimilarity" : "MedianDistance";
}

std::string_view to_string(ThresholdMode m) {
  switch (m) {
    case ThresholdMode::Fixed: return "Fixed";
    case ThresholdMode::Median: return "Median";
    case ThresholdMode::EM: return "EM";
  }
  return "Fixed";
}

std::string_view to_string(Decision d) { return d == Decision::Significant ? "Significant" : "NotSignificant"; }

std::optional<ScoreMode> parse_score_mode(std::string_view s) {
  if (s == "MeanSimilarity" || s == "mean_similarity" || s == "mean") return ScoreMode::MeanSimilarity;
  if (s == "MedianDistance" || s == "median_distance" || s == "median") return ScoreMode::MedianDistance;
  return std::nullopt;
}

std::optional<ThresholdMode> parse_threshold_mode(std::string_view s) {
  if (s == "Fixed" || s == "fixed") return ThresholdMode::Fixed;
  if (s == "Median" || s == "median") return ThresholdMode::Median;
  if (s == "EM" || s == "em") return ThresholdMode::EM;
  return std::nullopt;
}

double framing_score(const KeywordDistanceReport& report, ScoreMode mode) {
  if (report.pairs.empty()) throw Error(Errc::EmptyReport, "keyword distance report has no pairs");
  if (mode == ScoreMode::MeanSimilarity) {
    double sum = 0.0;
    for (const auto& p : report.pairs) sum += p.similarity;
    return sum / static_cast<double>(report.pairs.size());
  }
  std::vector<double> d;
  d.reserve(report.pairs.size());
  for (const auto& p : report.pairs) d.push_back(p.wmd);
  return median(std::move(d));
}

// ---------------------------------------------------------------------------
// two-component Gaussian mixture

namespace {

double log_weighted_density(const GaussianComponent& c, double x) {
  const double z = x - c.mean;
  return std::log(c.weight) - 0.5 * std::log(2.0 * std::numbers::pi * c.variance) - 0.5 * z * z / c.variance;
}

GaussianComponent moments(const std::vector<double>& xs, const std::vector<double>& resp, double floor) {
  double w = 0.0, m = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    w += resp[i];
    m += resp[i] * xs[i];
  }
  GaussianComponent c;
  c.weight = w / static_cast<double>(xs.size());
  c.mean = w > 0.0 ? m / w : 0.0;
  double v = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) v += resp[i] * (xs[i] - c.mean) * (xs[i] - c.mean);
  c.variance = std::max(w > 0.0 ? v / w : 0.0, floor);
  return c;
}

}  // namespace

EmFit fit_two_gaussians(const std::vector<double>& scores, const EmOptions& opts) {
  if (scores.size() < 4) throw Error(Errc::InvalidArgument, "EM threshold needs at least 4 scores");
  for (double s : scores)
    if (!std::isfinite(s)) throw Error(Errc::InvalidArgument, "scores must be finite");
  const auto [lo_it, hi_it] = std::minmax_element(scores.begin(), scores.end());
  if (*lo_it == *hi_it) throw Error(Errc::DegenerateScores, "all scores are equal");

  // k-means initialisation from the extremes.
  double c_lo = *lo_it, c_hi = *hi_it;
  std::vector<double> r_lo(scores.size()), r_hi(scores.size());
  for (int it = 0; it < 100; ++it) {
    bool changed = false;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const double to_lo = std::abs(scores[i] - c_lo) <= std::abs(scores[i] - c_hi) ? 1.0 : 0.0;
      changed |= (to_lo != r_lo[i]) || it == 0;
      r_lo[i] = to_lo;
      r_hi[i] = 1.0 - to_lo;
    }
    double s_lo = 0, n_lo = 0, s_hi = 0, n_hi = 0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      s_lo += r_lo[i] * scores[i];
      n_lo += r_lo[i];
      s_hi += r_hi[i] * scores[i];
      n_hi += r_hi[i];
    }
    c_lo = s_lo / n_lo;
    c_hi = s_hi / n_hi;
    if (!changed) break;
  }

  EmFit fit;
  fit.low = moments(scores, r_lo, opts.variance_floor);
  fit.high = moments(scores, r_hi, opts.variance_floor);

  double prev_ll = -std::numeric_limits<double>::infinity();
  for (int iter = 1; iter <= opts.max_iterations; ++iter) {
    double ll = 0.0;
    for (std::size_t i = 0; i < scores.size(); ++i) {
      const double a = log_weighted_density(fit.low, scores[i]);
      const double b = log_weighted_density(fit.high, scores[i]);
      const double m = std::max(a, b);
      const double lse = m + std::log(std::exp(a - m) + std::exp(b - m));
      r_lo[i] = std::exp(a - lse);
      r_hi[i] = 1.0 - r_lo[i];
      ll += lse;
    }
    fit.log_likelihood = ll;
    fit.iterations = iter;
    if (std::abs(ll - prev_ll) < opts.tolerance) break;
    prev_ll = ll;
    const GaussianComponent lo = moments(scores, r_lo, opts.variance_floor);
    const GaussianComponent hi = moments(scores, r_hi, opts.variance_floor);
    if (lo.weight <= 0.0 || hi.weight <= 0.0)
      throw Error(Errc::NoConvergence, "a mixture component lost all of its mass");
    fit.low = lo;
    fit.high = hi;
  }
  if (fit.high.mean < fit.low.mean) std::swap(fit.low, fit.high);
  if (!(fit.low.mean < fit.high.mean)) throw Error(Errc::DegenerateScores, "mixture components share one mean");

  auto f = [&](double x) { return log_weighted_density(fit.low, x) - log_weighted_density(fit.high, x); };
  double a = fit.low.mean, b = fit.high.mean;
  double fa = f(a), fb = f(b);
  if (!(fa > 0.0 && fb < 0.0))
    throw Error(Errc::NoConvergence, "no equal-responsibility point between the component means");
  for (int i = 0; i < 200 && b - a > 0.0; ++i) {
    const double mid = 0.5 * (a + b);
    if (mid <= a || mid >= b) break;
    const double fm = f(mid);
    if (fm > 0.0) {
      a = mid;
    } else {
      b = mid;
    }
  }
  fit.threshold = 0.5 * (a + b);
  return fit;
}

double em_threshold(const std::vector<double>& scores, const EmOptions& opts) {
  return fit_two_gaussians(scores, opts).threshold;
}

Decision classify_change(double score, double threshold, ScoreMode mode) {
  const bool significant = mode == ScoreMode::MeanSimilarity ? score >= threshold : score <= threshold;
  return significant ? Decision::Significant : Decision::NotSignificant;
}

double resolve_threshold(const FramingConfig& config) {
  switch (config.threshold_mode) {
    case ThresholdMode::Fixed:
      return config.threshold;
    case ThresholdMode::Median:
      if (config.score_pool.empty())
        throw Error(Errc::InvalidArgument, "Median threshold mode needs a calibration score pool");
      return median(config.score_pool);
    case ThresholdMode::EM:
      return em_threshold(config.score_pool);
  }
  return config.threshold;
}

FramingReport detect_framing_change(const Corpus& t1, const Corpus& t2, const FramingConfig& config) {
  if (t1.empty() || t2.empty()) throw Error(Errc::EmptyCorpus, "both period corpora must be nonempty");
  const bool disjoint = t1.period().end < t2.period().start || t2.period().end < t1.period().start;
  if (!disjoint) throw Error(Errc::InvalidArgument, "period corpora must not overlap in time");

  FramingReport r;
  r.topic = config.topic;
  r.period1 = t1.period();
  r.period2 = t2.period();
  r.score_mode = config.score_mode;
  r.threshold_mode = config.threshold_mode;
  r.threshold = resolve_threshold(config);

  r.keyword_set = top_k_keywords(t1, t2, config.keywords);
  const CooccurrenceMatrix cooc = build_cooccurrence(period_union(t1, t2), config.window);
  const std::size_t dims = std::min(config.embedding_dims, cooc.size());
  const EmbeddingSpace space = embed(cooc, dims, config.weighting);
  r.singular_values = space.singular_values();
  r.distances = pairwise_report(r.keyword_set, space);

  std::vector<NGram> grams;
  for (const auto& k : r.keyword_set.keywords) grams.push_back(k.ngram);
  r.coordinates = project_2d(space, grams);

  r.score = framing_score(r.distances, config.score_mode);
  r.decision = classify_change(r.score, r.threshold, config.score_mode);
  return r;
}

}  // namespace newsframe
