#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "newsframe/framing.hpp"
#include "oracles.hpp"
#include "support.hpp"

using namespace newsframe;
using testing::article;
using testing::corpus_of;
using testing::errc_of;

namespace {

KeywordDistanceReport report_with(const std::vector<double>& wmds) {
  KeywordDistanceReport r;
  for (std::size_t i = 0; i < wmds.size(); ++i)
    r.pairs.push_back({NGram{"k" + std::to_string(i)}, NGram{"k" + std::to_string(i + 1)}, wmds[i], 1.0 / (1.0 + wmds[i])});
  return r;
}

// Best hard two-way split on a fine grid over [lo, hi]: each side gets its own
// maximum-likelihood Gaussian, weighted by its share of the points.
double grid_ml_boundary(const std::vector<double>& xs, double lo, double hi, double floor = 1e-6) {
  double best_ll = -std::numeric_limits<double>::infinity(), best_b = lo;
  for (double b = lo; b <= hi; b += 1e-4) {
    std::vector<double> left, right;
    for (double x : xs) (x <= b ? left : right).push_back(x);
    if (left.empty() || right.empty()) continue;
    double ll = 0.0;
    for (const auto* side : {&left, &right}) {
      const double n = static_cast<double>(side->size());
      double m = 0.0, v = 0.0;
      for (double x : *side) m += x / n;
      for (double x : *side) v += (x - m) * (x - m) / n;
      v = std::max(v, floor);
      const double w = n / static_cast<double>(xs.size());
      for (double x : *side)
        ll += std::log(w) - 0.5 * std::log(2 * std::numbers::pi * v) - 0.5 * (x - m) * (x - m) / v;
    }
    if (ll > best_ll) {
      best_ll = ll;
      best_b = b;
    }
  }
  return best_b;
}

}  // namespace

TEST_CASE("framing_score") {
  KeywordDistanceReport r;
  r.pairs.push_back({NGram{"a"}, NGram{"b"}, 9.0, 0.1});
  r.pairs.push_back({NGram{"a"}, NGram{"c"}, 7.0 / 3.0, 0.3});
  CHECK(framing_score(r, ScoreMode::MeanSimilarity) == doctest::Approx(0.2));
  CHECK(framing_score(report_with({1, 2, 9}), ScoreMode::MedianDistance) == 2.0);
  CHECK(framing_score(report_with({0}), ScoreMode::MeanSimilarity) == 1.0);
  CHECK(errc_of([] { framing_score(KeywordDistanceReport{}, ScoreMode::MeanSimilarity); }) == Errc::EmptyReport);
}

TEST_CASE("classify_change") {
  CHECK(classify_change(0.20, 0.15, ScoreMode::MeanSimilarity) == Decision::Significant);
  CHECK(classify_change(0.16, 0.15, ScoreMode::MeanSimilarity) == Decision::Significant);
  CHECK(classify_change(0.09, 0.15, ScoreMode::MeanSimilarity) == Decision::NotSignificant);
  CHECK(classify_change(0.15, 0.15, ScoreMode::MeanSimilarity) == Decision::Significant);
  CHECK(classify_change(0.15, 0.15, ScoreMode::MedianDistance) == Decision::Significant);
  CHECK(classify_change(1.0, 2.0, ScoreMode::MedianDistance) == Decision::Significant);
  CHECK(classify_change(3.0, 2.0, ScoreMode::MedianDistance) == Decision::NotSignificant);

  // Monotone in the score.
  bool seen_significant = false;
  for (double s = 0.0; s <= 1.0; s += 0.001) {
    const bool sig = classify_change(s, 0.37, ScoreMode::MeanSimilarity) == Decision::Significant;
    CHECK(sig >= seen_significant);
    seen_significant = sig;
  }
}

TEST_CASE("mode names") {
  CHECK(parse_score_mode("MeanSimilarity") == ScoreMode::MeanSimilarity);
  CHECK(parse_score_mode("median_distance") == ScoreMode::MedianDistance);
  CHECK_FALSE(parse_score_mode("mode"));
  CHECK(parse_threshold_mode("em") == ThresholdMode::EM);
  CHECK(to_string(ThresholdMode::Median) == "Median");
  CHECK(to_string(Decision::NotSignificant) == "NotSignificant");
}

TEST_CASE("em_threshold") {
  const std::vector<double> scores{0.05, 0.06, 0.07, 0.09, 0.16, 0.18, 0.20, 0.22};
  const EmFit fit = fit_two_gaussians(scores);
  CHECK(fit.threshold > 0.09);
  CHECK(fit.threshold < 0.16);
  CHECK(fit.low.mean < fit.threshold);
  CHECK(fit.threshold < fit.high.mean);
  CHECK(em_threshold(scores) == fit.threshold);

  // The grid-search boundary puts the same points on each side.
  const double b = grid_ml_boundary(scores, 0.0, 0.3);
  for (double s : scores) CHECK((s <= b) == (s <= fit.threshold));

  // Equal responsibilities at the threshold.
  auto logw = [](const GaussianComponent& c, double x) {
    return std::log(c.weight) - 0.5 * std::log(2 * std::numbers::pi * c.variance) -
           0.5 * (x - c.mean) * (x - c.mean) / c.variance;
  };
  CHECK(logw(fit.low, fit.threshold) == doctest::Approx(logw(fit.high, fit.threshold)).epsilon(1e-9));

  CHECK(errc_of([] { em_threshold({0.1, 0.1, 0.1, 0.1, 0.1}); }) == Errc::DegenerateScores);
  CHECK(errc_of([] { em_threshold({0.1, 0.2}); }) == Errc::InvalidArgument);
}

TEST_CASE("em_threshold lies between the component means") {
  std::mt19937_64 rng(123);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int fitted = 0;
  for (int trial = 0; trial < 200; ++trial) {
    std::vector<double> xs(4 + rng() % 30);
    for (auto& x : xs) x = u(rng) < 0.5 ? 0.1 + 0.03 * u(rng) : 0.4 + 0.1 * u(rng);
    try {
      const EmFit fit = fit_two_gaussians(xs);
      CHECK(fit.low.mean < fit.threshold);
      CHECK(fit.threshold < fit.high.mean);
      ++fitted;
    } catch (const Error& e) {
      // Single-cluster draws are legitimately degenerate.
      CHECK((e.code() == Errc::DegenerateScores || e.code() == Errc::NoConvergence));
    }
  }
  CHECK(fitted > 150);
}

TEST_CASE("resolve_threshold") {
  FramingConfig c;
  CHECK(resolve_threshold(c) == 0.15);
  c.threshold_mode = ThresholdMode::Median;
  CHECK(errc_of([&] { resolve_threshold(c); }) == Errc::InvalidArgument);
  c.score_pool = {0.1, 0.3, 0.2};
  CHECK(resolve_threshold(c) == 0.2);
  c.threshold_mode = ThresholdMode::EM;
  c.score_pool = {0.05, 0.06, 0.07, 0.09, 0.16, 0.18, 0.20, 0.22};
  CHECK(resolve_threshold(c) == em_threshold(c.score_pool));
}

namespace {

std::vector<std::string> filler(std::mt19937_64& rng, std::size_t n, const std::vector<std::string>& pool) {
  std::vector<std::string> out;
  for (std::size_t i = 0; i < n; ++i) {
    std::string s;
    for (int w = 0; w < 6; ++w) s += pool[rng() % pool.size()] + " ";
    out.push_back(s);
  }
  return out;
}

}  // namespace

TEST_CASE("detect_framing_change") {
  std::mt19937_64 rng(42);
  const std::vector<std::string> pool = {"senate", "vote",  "budget", "hearing", "committee", "report",
                                         "agency", "court", "ruling", "policy",  "official",  "program"};

  SUBCASE("injected co-occurring cluster in period 2") {
    auto b1 = filler(rng, 12, pool);
    auto b2 = filler(rng, 12, pool);
    for (auto& s : b2) s = "drone strike pakistan. " + s + ". drone strike pakistan";
    const Corpus t1 = corpus_of(b1, Date(2010, 3, 1), "p1-");
    const Corpus t2 = corpus_of(b2, Date(2013, 3, 1), "p2-");

    FramingConfig cfg;
    cfg.topic = "drones";
    cfg.keywords.orders = NgramOrders{1};
    cfg.keywords.k = 3;
    const FramingReport r = detect_framing_change(t1, t2, cfg);
    REQUIRE(r.keyword_set.keywords.size() == 3);
    std::vector<std::string> kws;
    for (const auto& k : r.keyword_set.keywords) kws.push_back(k.ngram.text());
    CHECK(kws == std::vector<std::string>{"drone", "pakistan", "strike"});

    // Recompute every pair distance in the same embedding space with the
    // permutation oracle, then the mean similarity by hand.
    const EmbeddingSpace space = embed(build_cooccurrence(period_union(t1, t2), 5), 3, Weighting::Ppmi);
    REQUIRE(r.distances.pairs.size() == 3);
    double sim = 0.0;
    for (const auto& p : r.distances.pairs) {
      const double d = oracle::exhaustive_transport(space.vector(p.a.text()).transpose(),
                                                    space.vector(p.b.text()).transpose());
      CHECK(p.wmd == doctest::Approx(d).epsilon(1e-9));
      sim += 1.0 / (1.0 + d);
    }
    CHECK(r.score == doctest::Approx(sim / 3.0).epsilon(1e-9));
    CHECK(r.score > r.threshold);
    CHECK(r.decision == Decision::Significant);
    CHECK(r.topic == "drones");
    CHECK(r.threshold == 0.15);
    CHECK(r.singular_values.size() == 3);
    CHECK(r.coordinates.size() == 3);
  }

  SUBCASE("period 2 repeats period 1 with shifted dates") {
    const auto bodies = filler(rng, 8, pool);
    const Corpus t1 = corpus_of(bodies, Date(2010, 1, 1));
    const Corpus t2 = corpus_of(bodies, Date(2012, 1, 1));  // same ids, same text
    const FramingReport r = detect_framing_change(t1, t2, FramingConfig{});
    CHECK(r.keyword_set.keywords.size() == 6);
    CHECK(r.distances.pairs.size() == 15);
    CHECK(r.score >= 0.0);
    CHECK(r.score <= 1.0);
  }

  SUBCASE("defaults and determinism") {
    const Corpus t1 = corpus_of(filler(rng, 10, pool), Date(2010, 1, 1), "x");
    const Corpus t2 = corpus_of(filler(rng, 10, pool), Date(2011, 1, 1), "y");
    FramingConfig cfg;
    CHECK(cfg.keywords.k == 6);
    CHECK(cfg.embedding_dims == 3);
    CHECK(cfg.threshold == 0.15);
    const FramingReport a = detect_framing_change(t1, t2, cfg);
    const FramingReport b = detect_framing_change(t1, t2, cfg);
    CHECK(a.score == b.score);
    CHECK(a.singular_values.isApprox(b.singular_values, 0.0));
    CHECK(a.decision == classify_change(a.score, a.threshold, a.score_mode));
  }

  SUBCASE("errors") {
    const Corpus t1 = corpus_of(filler(rng, 4, pool), Date(2010, 1, 1), "x");
    CHECK(errc_of([&] { detect_framing_change(Corpus{}, t1, FramingConfig{}); }) == Errc::EmptyCorpus);
    CHECK(errc_of([&] { detect_framing_change(t1, t1, FramingConfig{}); }) == Errc::InvalidArgument);
  }
}
