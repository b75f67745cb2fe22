#pragma once

#include <span>
#include <vector>

#include "newsframe/corpus.hpp"

namespace newsframe {

enum class PeriodLabel { Period1, Period2 };

struct ScoredNGram {
  NGram ngram;
  double ig_bits = 0.0;
  friend bool operator==(const ScoredNGram&, const ScoredNGram&) = default;
};

struct KeywordSet {
  std::vector<ScoredNGram> keywords;  // sorted by IG descending, then n-gram text
  Period period1;
  Period period2;
  std::size_t combined_vocab_size = 0;
};

struct KeywordOptions {
  std::size_t k = 6;
  NgramOrders orders;
  std::size_t min_df = 2;
  // Adds the complement-subset term of textbook information gain. Off by
  // default: the score is H(T) - |S|/|T| * H(S) only.
  bool full_ig = false;
};

// Shannon entropy in bits of the period-label distribution. 0 log 0 == 0.
double class_entropy(std::span<const PeriodLabel> labels);

// IG of column `ngram_index`, where S is the set of rows with a nonzero count.
double information_gain(const TfMatrix& tf, std::span<const PeriodLabel> labels,
                        std::size_t ngram_index, bool full_ig = false);

// Scores every column; same order as the vocabulary.
std::vector<double> information_gains(const TfMatrix& tf, std::span<const PeriodLabel> labels,
                                      bool full_ig = false);

KeywordSet top_k_keywords(const Corpus& t1, const Corpus& t2, const KeywordOptions& opts);

}  // namespace newsframe
