#pragma once

#include <filesystem>
#include <map>
#include <optional>
#include <span>
#include <string>
#include <unordered_set>
#include <vector>

#include "newsframe/corpus.hpp"

namespace newsframe {

class Lexicon {
 public:
  Lexicon(std::unordered_set<std::string> positive, std::unordered_set<std::string> negative);

  // positive.txt / negative.txt, one lowercase word per line; '#' starts a comment.
  static Lexicon load(const std::filesystem::path& dir);
  static Lexicon bundled();

  bool is_positive(const std::string& w) const { return positive_.count(w) > 0; }
  bool is_negative(const std::string& w) const { return negative_.count(w) > 0; }
  std::size_t positive_size() const { return positive_.size(); }
  std::size_t negative_size() const { return negative_.size(); }

 private:
  std::unordered_set<std::string> positive_;
  std::unordered_set<std::string> negative_;
};

// (pos - neg) / (pos + neg) over the article's tokens, 0 when no lexicon word occurs.
double article_polarity(const Article& a, const Lexicon& lex);
double token_polarity(std::span<const std::string> tokens, const Lexicon& lex);

double pearson(std::span<const double> u, std::span<const double> v);

struct MncResult {
  double value = 0.0;
  std::size_t rows_used = 0;
  std::size_t rows_excluded = 0;  // zero-variance TF rows
};

/// Mean pairwise Pearson correlation between all TF rows with nonzero variance.
/// Throws TooFewArticles when fewer than two such rows exist.
MncResult mean_normalized_correlation(const TfMatrix& tf);

struct AnnualFeatureSeries {
  std::string topic;
  std::vector<int> years;  // contiguous, increasing
  std::vector<std::uint64_t> volume;
  std::vector<std::optional<double>> mean_sentiment;  // absent when volume == 0
  std::vector<std::optional<double>> mnc;             // absent when fewer than two usable articles
  std::vector<std::optional<bool>> legislative;       // ground truth, when known

  std::size_t size() const { return years.size(); }
  std::optional<std::size_t> index_of(int year) const;
  void validate() const;
};

struct CycleOptions {
  NgramOrders orders;
  // Build MNC rows over the whole corpus vocabulary instead of each year's own.
  bool global_vocab = false;
};

AnnualFeatureSeries annual_features(const Corpus& corpus, const Lexicon& lex,
                                    const std::map<int, bool>& legislative_labels = {},
                                    const CycleOptions& opts = {}, const std::string& topic = {});

enum class CycleState { Quiescent, Active };
std::string_view to_string(CycleState s);

// Active iff the year's volume and MNC both exceed the series medians.
CycleState classify_cycle_state(const AnnualFeatureSeries& series, int year);

std::string series_to_csv(const AnnualFeatureSeries& series);
AnnualFeatureSeries series_from_csv(std::string_view text, const std::string& topic);

}  // namespace newsframe
