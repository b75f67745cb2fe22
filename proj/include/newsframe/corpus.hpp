#pragma once

#include <cstdint>
#include <initializer_list>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "newsframe/date.hpp"

namespace newsframe {

enum class Source { NYT, Guardian, Other };
enum class Label { Positive, Negative, Unlabeled };

std::string_view to_string(Source s);
std::string_view to_string(Label l);
std::optional<Source> parse_source(std::string_view s);
std::optional<Label> parse_label(std::string_view s);

struct Article {
  std::string id;
  Source source = Source::Other;
  std::optional<std::string> url;
  std::string title;
  std::string body;
  Date published_at;
  std::optional<std::string> topic;
  Label label = Label::Unlabeled;

  friend bool operator==(const Article&, const Article&) = default;
};

struct Period {
  Date start;
  Date end;  // inclusive

  bool contains(const Date& d) const { return start <= d && d <= end; }
  friend bool operator==(const Period&, const Period&) = default;
};

// Ordered, id-unique collection of articles with a covering period.
class Corpus {
 public:
  Corpus() = default;
  // Validates ids, dates, and that every article falls inside `period`.
  Corpus(std::vector<Article> articles, Period period);
  // Period is the tightest range covering the articles.
  explicit Corpus(std::vector<Article> articles);

  const std::vector<Article>& articles() const { return articles_; }
  const Period& period() const { return period_; }
  std::size_t size() const { return articles_.size(); }
  bool empty() const { return articles_.empty(); }
  const Article& operator[](std::size_t i) const { return articles_[i]; }

  const Article* find(std::string_view id) const;

  friend bool operator==(const Corpus&, const Corpus&) = default;

 private:
  std::vector<Article> articles_;
  Period period_{};
};

// Concatenation; throws InvalidArgument on id collisions.
Corpus merge(const Corpus& a, const Corpus& b);

// Concatenation of two period corpora with ids prefixed "1:" and "2:", so the
// same article id may occur in both periods.
Corpus period_union(const Corpus& t1, const Corpus& t2);

struct NGram {
  std::vector<std::string> tokens;

  NGram() = default;
  explicit NGram(std::vector<std::string> toks) : tokens(std::move(toks)) {}
  NGram(std::initializer_list<std::string> toks) : tokens(toks) {}

  std::size_t order() const { return tokens.size(); }
  std::string text() const;  // tokens joined by a single space
  static NGram from_text(std::string_view text);

  friend bool operator==(const NGram&, const NGram&) = default;
  friend auto operator<=>(const NGram& a, const NGram& b) { return a.text() <=> b.text(); }
};

// Subset of {1, 2}.
class NgramOrders {
 public:
  NgramOrders() = default;  // {1, 2}
  NgramOrders(std::initializer_list<int> orders);
  static NgramOrders parse(std::string_view csv);  // "1,2"

  bool unigrams() const { return uni_; }
  bool bigrams() const { return bi_; }
  std::string to_string() const;

  friend bool operator==(const NgramOrders&, const NgramOrders&) = default;

 private:
  bool uni_ = true;
  bool bi_ = true;
};

using Sentence = std::vector<std::string>;

// Lowercased alphanumeric tokens with stopwords and possessive 's removed.
std::vector<std::string> tokenize(std::string_view text);
// Same tokens, grouped by sentence (split on '.', '!', '?' followed by space/end).
std::vector<Sentence> tokenize_sentences(std::string_view text);
// Title and body as one token stream; the title is its own sentence.
std::vector<Sentence> article_sentences(const Article& a);

bool is_stopword(std::string_view token);

std::vector<NGram> extract_ngrams(std::span<const std::string> tokens, const NgramOrders& orders);
std::vector<NGram> extract_ngrams(std::span<const Sentence> sentences, const NgramOrders& orders);

struct TfEntry {
  std::uint32_t column;
  std::uint32_t count;
  friend bool operator==(const TfEntry&, const TfEntry&) = default;
};

// |T| x m term-frequency table. Rows are stored sparsely, sorted by column.
class TfMatrix {
 public:
  TfMatrix() = default;
  TfMatrix(std::vector<NGram> vocab, std::vector<std::vector<TfEntry>> rows,
           std::vector<std::string> article_ids);

  // Convenience for tests and small hand-built tables.
  static TfMatrix from_dense(std::vector<NGram> vocab,
                             const std::vector<std::vector<std::uint32_t>>& dense,
                             std::vector<std::string> article_ids = {});

  std::size_t num_rows() const { return rows_.size(); }
  std::size_t num_cols() const { return vocab_.size(); }
  const std::vector<NGram>& vocab() const { return vocab_; }
  const std::vector<std::string>& article_ids() const { return article_ids_; }
  std::span<const TfEntry> row(std::size_t r) const { return rows_[r]; }

  std::uint32_t count(std::size_t r, std::size_t c) const;
  std::vector<std::uint32_t> dense_row(std::size_t r) const;
  std::vector<std::uint64_t> column_sums() const;
  std::optional<std::size_t> column_of(const NGram& g) const;

  friend bool operator==(const TfMatrix&, const TfMatrix&) = default;

 private:
  std::vector<NGram> vocab_;
  std::vector<std::vector<TfEntry>> rows_;
  std::vector<std::string> article_ids_;
};

// Vocabulary = n-grams with document frequency >= min_df, lexicographically sorted.
TfMatrix build_tf_matrix(const Corpus& corpus, const NgramOrders& orders, std::size_t min_df);

// Rows for `corpus` over a fixed vocabulary (out-of-vocabulary n-grams dropped).
TfMatrix build_tf_matrix(const Corpus& corpus, const NgramOrders& orders,
                         const std::vector<NGram>& vocab);

}  // namespace newsframe
