#include "newsframe/corpus.hpp"

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>

#include "newsframe/error.hpp"

namespace newsframe {

std::string_view to_string(Source s) {
  switch (s) {
    case Source::NYT: return "NYT";
    case Source::Guardian: return "Guardian";
    case Source::Other: return "Other";
  }
  return "Other";
}

std::string_view to_string(Label l) {
  switch (l) {
    case Label::Positive: return "Positive";
    case Label::Negative: return "Negative";
    case Label::Unlabeled: return "Unlabeled";
  }
  return "Unlabeled";
}

namespace {

std::string lower_ascii(std::string_view s) {
  std::string out(s);
  for (char& c : out) {
    if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
  }
  return out;
}

void validate_article(const Article& a) {
  if (a.id.empty()) throw Error(Errc::InvalidArgument, "article id is empty");
  if (!a.published_at.ok()) throw Error(Errc::BadDate, "article " + a.id + " has an invalid date");
  if (a.body.empty() && a.title.empty())
    throw Error(Errc::InvalidArgument, "article " + a.id + " has neither title nor body");
}

}  // namespace

std::optional<Source> parse_source(std::string_view s) {
  const std::string l = lower_ascii(s);
  if (l == "nyt") return Source::NYT;
  if (l == "guardian") return Source::Guardian;
  if (l == "other") return Source::Other;
  return std::nullopt;
}

std::optional<Label> parse_label(std::string_view s) {
  const std::string l = lower_ascii(s);
  if (l == "positive" || l == "1" || l == "relevant") return Label::Positive;
  if (l == "negative" || l == "0" || l == "irrelevant") return Label::Negative;
  if (l == "unlabeled" || l.empty()) return Label::Unlabeled;
  return std::nullopt;
}

Corpus::Corpus(std::vector<Article> articles, Period period)
    : articles_(std::move(articles)), period_(period) {
  if (period_.end < period_.start) throw Error(Errc::InvalidArgument, "period end precedes start");
  std::unordered_set<std::string_view> ids;
  for (const auto& a : articles_) {
    validate_article(a);
    if (!ids.insert(a.id).second) throw Error(Errc::InvalidArgument, "duplicate article id " + a.id);
    if (!period_.contains(a.published_at))
      throw Error(Errc::InvalidArgument,
                  "article " + a.id + " dated " + a.published_at.iso() + " lies outside the period");
  }
}

namespace {
Period covering(const std::vector<Article>& articles) {
  if (articles.empty()) return {};
  Period p{articles.front().published_at, articles.front().published_at};
  for (const auto& a : articles) {
    p.start = std::min(p.start, a.published_at);
    p.end = std::max(p.end, a.published_at);
  }
  return p;
}
}  // namespace

Corpus::Corpus(std::vector<Article> articles) : Corpus(articles, covering(articles)) {}

const Article* Corpus::find(std::string_view id) const {
  for (const auto& a : articles_) {
    if (a.id == id) return &a;
  }
  return nullptr;
}

Corpus merge(const Corpus& a, const Corpus& b) {
  std::vector<Article> all = a.articles();
  all.insert(all.end(), b.articles().begin(), b.articles().end());
  return Corpus(std::move(all));
}

Corpus period_union(const Corpus& t1, const Corpus& t2) {
  std::vector<Article> all;
  all.reserve(t1.size() + t2.size());
  for (const auto& a : t1.articles()) {
    all.push_back(a);
    all.back().id = "1:" + a.id;
  }
  for (const auto& a : t2.articles()) {
    all.push_back(a);
    all.back().id = "2:" + a.id;
  }
  return Corpus(std::move(all));
}

std::string NGram::text() const {
  std::string out;
  for (std::size_t i = 0; i < tokens.size(); ++i) {
    if (i) out.push_back(' ');
    out += tokens[i];
  }
  return out;
}

NGram NGram::from_text(std::string_view text) {
  NGram g;
  std::size_t i = 0;
  while (i < text.size()) {
    while (i < text.size() && text[i] == ' ') ++i;
    std::size_t j = i;
    while (j < text.size() && text[j] != ' ') ++j;
    if (j > i) g.tokens.emplace_back(text.substr(i, j - i));
    i = j;
  }
  return g;
}

NgramOrders::NgramOrders(std::initializer_list<int> orders) : uni_(false), bi_(false) {
  for (int o : orders) {
    if (o == 1) {
      uni_ = true;
    } else if (o == 2) {
      bi_ = true;
    } else {
      throw Error(Errc::InvalidArgument, "n-gram order must be 1 or 2");
    }
  }
  if (!uni_ && !bi_) throw Error(Errc::InvalidArgument, "n-gram orders must be nonempty");
}

NgramOrders NgramOrders::parse(std::string_view csv) {
  NgramOrders o;
  o.uni_ = o.bi_ = false;
  for (char c : csv) {
    if (c == '1') {
      o.uni_ = true;
    } else if (c == '2') {
      o.bi_ = true;
    } else if (c != ',' && c != ' ' && c != '{' && c != '}') {
      throw Error(Errc::InvalidArgument, "bad n-gram orders '" + std::string(csv) + "'");
    }
  }
  if (!o.uni_ && !o.bi_) throw Error(Errc::InvalidArgument, "n-gram orders must be nonempty");
  return o;
}

std::string NgramOrders::to_string() const {
  if (uni_ && bi_) return "1,2";
  return uni_ ? "1" : "2";
}

TfMatrix::TfMatrix(std::vector<NGram> vocab, std::vector<std::vector<TfEntry>> rows,
                   std::vector<std::string> article_ids)
    : vocab_(std::move(vocab)), rows_(std::move(rows)), article_ids_(std::move(article_ids)) {
  if (article_ids_.size() != rows_.size())
    throw Error(Errc::DimensionMismatch, "article id count differs from row count");
  for (const auto& r : rows_) {
    for (std::size_t i = 0; i < r.size(); ++i) {
      if (r[i].column >= vocab_.size()) throw Error(Errc::IndexOutOfRange, "TF column out of range");
      if (i && r[i - 1].column >= r[i].column)
        throw Error(Errc::InvalidArgument, "TF row entries must be sorted by column");
    }
  }
}

TfMatrix TfMatrix::from_dense(std::vector<NGram> vocab,
                              const std::vector<std::vector<std::uint32_t>>& dense,
                              std::vector<std::string> article_ids) {
  if (article_ids.empty()) {
    for (std::size_t r = 0; r < dense.size(); ++r) article_ids.push_back("r" + std::to_string(r));
  }
  std::vector<std::vector<TfEntry>> rows;
  rows.reserve(dense.size());
  for (const auto& d : dense) {
    if (d.size() != vocab.size()) throw Error(Errc::DimensionMismatch, "dense row length != vocab size");
    auto& row = rows.emplace_back();
    for (std::size_t c = 0; c < d.size(); ++c) {
      if (d[c]) row.push_back({static_cast<std::uint32_t>(c), d[c]});
    }
  }
  return TfMatrix(std::move(vocab), std::move(rows), std::move(article_ids));
}

std::uint32_t TfMatrix::count(std::size_t r, std::size_t c) const {
  const auto& row = rows_.at(r);
  auto it = std::lower_bound(row.begin(), row.end(), c,
                             [](const TfEntry& e, std::size_t col) { return e.column < col; });
  return (it != row.end() && it->column == c) ? it->count : 0;
}

std::vector<std::uint32_t> TfMatrix::dense_row(std::size_t r) const {
  std::vector<std::uint32_t> out(vocab_.size(), 0);
  for (const auto& e : rows_.at(r)) out[e.column] = e.count;
  return out;
}

std::vector<std::uint64_t> TfMatrix::column_sums() const {
  std::vector<std::uint64_t> sums(vocab_.size(), 0);
  for (const auto& r : rows_)
    for (const auto& e : r) sums[e.column] += e.count;
  return sums;
}

std::optional<std::size_t> TfMatrix::column_of(const NGram& g) const {
  auto it = std::lower_bound(vocab_.begin(), vocab_.end(), g);
  if (it != vocab_.end() && *it == g) return static_cast<std::size_t>(it - vocab_.begin());
  return std::nullopt;
}

namespace {

using Counts = std::map<std::string, std::uint32_t>;

std::vector<Counts> count_articles(const Corpus& corpus, const NgramOrders& orders) {
  std::vector<Counts> per_article;
  per_article.reserve(corpus.size());
  for (const auto& a : corpus.articles()) {
    auto& counts = per_article.emplace_back();
    const auto sentences = article_sentences(a);
    for (const auto& g : extract_ngrams(std::span<const Sentence>(sentences), orders)) ++counts[g.text()];
  }
  return per_article;
}

TfMatrix assemble(const Corpus& corpus, const std::vector<Counts>& per_article,
                  std::vector<std::string> vocab_text) {
  std::unordered_map<std::string, std::uint32_t> index;
  std::vector<NGram> vocab;
  vocab.reserve(vocab_text.size());
  for (std::size_t i = 0; i < vocab_text.size(); ++i) {
    index.emplace(vocab_text[i], static_cast<std::uint32_t>(i));
    vocab.push_back(NGram::from_text(vocab_text[i]));
  }
  std::vector<std::vector<TfEntry>> rows;
  std::vector<std::string> ids;
  rows.reserve(per_article.size());
  for (std::size_t r = 0; r < per_article.size(); ++r) {
    auto& row = rows.emplace_back();
    for (const auto& [text, n] : per_article[r]) {
      auto it = index.find(text);
      if (it != index.end()) row.push_back({it->second, n});
    }
    std::sort(row.begin(), row.end(), [](const TfEntry& x, const TfEntry& y) { return x.column < y.column; });
    ids.push_back(corpus[r].id);
  }
  return TfMatrix(std::move(vocab), std::move(rows), std::move(ids));
}

}  // namespace

TfMatrix build_tf_matrix(const Corpus& corpus, const NgramOrders& orders, std::size_t min_df) {
  if (corpus.empty()) throw Error(Errc::EmptyCorpus, "cannot build a TF matrix from an empty corpus");
  if (min_df < 1) throw Error(Errc::InvalidArgument, "min_df must be >= 1");

  const auto per_article = count_articles(corpus, orders);
  std::map<std::string, std::size_t> df;  // ordered: gives the lexicographic vocabulary
  for (const auto& counts : per_article)
    for (const auto& [text, n] : counts) ++df[text];

  std::vector<std::string> vocab;
  for (const auto& [text, d] : df) {
    if (d >= min_df) vocab.push_back(text);
  }
  if (vocab.empty())
    throw Error(Errc::EmptyVocabulary, "no n-gram reaches min_df=" + std::to_string(min_df));
  return assemble(corpus, per_article, std::move(vocab));
}

TfMatrix build_tf_matrix(const Corpus& corpus, const NgramOrders& orders,
                         const std::vector<NGram>& vocab) {
  std::vector<std::string> text;
  text.reserve(vocab.size());
  for (const auto& g : vocab) text.push_back(g.text());
  if (!std::is_sorted(text.begin(), text.end()))
    throw Error(Errc::InvalidArgument, "vocabulary must be lexicographically sorted");
  return assemble(corpus, count_articles(corpus, orders), std::move(text));
}

}  // namespace newsframe
