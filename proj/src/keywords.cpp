#include "newsframe/keywords.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "newsframe/error.hpp"

namespace newsframe {

namespace {

double entropy2(std::size_t n1, std::size_t n2) {
  const std::size_t n = n1 + n2;
  if (n == 0) return 0.0;
  double h = 0.0;
  for (std::size_t c : {n1, n2}) {
    if (c == 0) continue;
    const double p = static_cast<double>(c) / static_cast<double>(n);
    h -= p * std::log2(p);
  }
  return h;
}

// Per-column (period-1, period-2) document counts in one pass over the rows.
struct ColumnCounts {
  std::vector<std::size_t> p1, p2;
};

ColumnCounts presence_counts(const TfMatrix& tf, std::span<const PeriodLabel> labels) {
  ColumnCounts cc{std::vector<std::size_t>(tf.num_cols(), 0), std::vector<std::size_t>(tf.num_cols(), 0)};
  for (std::size_t r = 0; r < tf.num_rows(); ++r) {
    auto& target = labels[r] == PeriodLabel::Period1 ? cc.p1 : cc.p2;
    for (const auto& e : tf.row(r)) {
      if (e.count > 0) ++target[e.column];
    }
  }
  return cc;
}

double gain(std::size_t s1, std::size_t s2, std::size_t n1, std::size_t n2, bool full_ig) {
  const double total = static_cast<double>(n1 + n2);
  const std::size_t s = s1 + s2;
  double ig = entropy2(n1, n2) - (static_cast<double>(s) / total) * entropy2(s1, s2);
  if (full_ig) {
    const std::size_t c1 = n1 - s1, c2 = n2 - s2;
    ig -= (static_cast<double>(c1 + c2) / total) * entropy2(c1, c2);
  }
  return ig;
}

void check_labels(const TfMatrix& tf, std::span<const PeriodLabel> labels) {
  if (labels.size() != tf.num_rows())
    throw Error(Errc::DimensionMismatch, "label count differs from TF row count");
  if (labels.empty()) throw Error(Errc::EmptyCorpus, "no documents to score");
}

}  // namespace

double class_entropy(std::span<const PeriodLabel> labels) {
  if (labels.empty()) throw Error(Errc::InvalidArgument, "class entropy of an empty label list");
  const auto n1 = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), PeriodLabel::Period1));
  return entropy2(n1, labels.size() - n1);
}

double information_gain(const TfMatrix& tf, std::span<const PeriodLabel> labels, std::size_t ngram_index,
                        bool full_ig) {
  check_labels(tf, labels);
  if (ngram_index >= tf.num_cols())
    throw Error(Errc::IndexOutOfRange, "n-gram index " + std::to_string(ngram_index) + " >= vocabulary size");
  std::size_t n1 = 0, n2 = 0, s1 = 0, s2 = 0;
  for (std::size_t r = 0; r < tf.num_rows(); ++r) {
    const bool present = tf.count(r, ngram_index) > 0;
    if (labels[r] == PeriodLabel::Period1) {
      ++n1;
      s1 += present;
    } else {
      ++n2;
      s2 += present;
    }
  }
  return gain(s1, s2, n1, n2, full_ig);
}

std::vector<double> information_gains(const TfMatrix& tf, std::span<const PeriodLabel> labels, bool full_ig) {
  check_labels(tf, labels);
  const auto n1 = static_cast<std::size_t>(std::count(labels.begin(), labels.end(), PeriodLabel::Period1));
  const std::size_t n2 = labels.size() - n1;
  const ColumnCounts cc = presence_counts(tf, labels);
  std::vector<double> out(tf.num_cols());
  for (std::size_t c = 0; c < tf.num_cols(); ++c) out[c] = gain(cc.p1[c], cc.p2[c], n1, n2, full_ig);
  return out;
}

KeywordSet top_k_keywords(const Corpus& t1, const Corpus& t2, const KeywordOptions& opts) {
  if (t1.empty() || t2.empty()) throw Error(Errc::EmptyCorpus, "both period corpora must be nonempty");
  if (opts.k < 1) throw Error(Errc::InvalidArgument, "k must be >= 1");

  const Corpus combined = period_union(t1, t2);
  std::vector<PeriodLabel> labels(combined.size(), PeriodLabel::Period2);
  std::fill_n(labels.begin(), t1.size(), PeriodLabel::Period1);

  const TfMatrix tf = build_tf_matrix(combined, opts.orders, opts.min_df);
  const std::vector<double> scores = information_gains(tf, labels, opts.full_ig);

  std::vector<std::size_t> order(tf.num_cols());
  std::iota(order.begin(), order.end(), std::size_t{0});
  // The vocabulary is already lexicographic, so index order is the tie-break.
  std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] > scores[b]; });

  KeywordSet out;
  out.period1 = t1.period();
  out.period2 = t2.period();
  out.combined_vocab_size = tf.num_cols();
  const std::size_t k = std::min(opts.k, order.size());
  for (std::size_t i = 0; i < k; ++i) out.keywords.push_back({tf.vocab()[order[i]], scores[order[i]]});
  return out;
}

}  // namespace newsframe
