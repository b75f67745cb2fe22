#include "newsframe/newscycle.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "newsframe/error.hpp"
#include "newsframe/format.hpp"
#include "newsframe/ingest.hpp"
#include "newsframe/semantics.hpp"

namespace newsframe {

namespace detail {
extern const std::string_view kBundledPositive;
extern const std::string_view kBundledNegative;
}  // namespace detail

namespace {

std::unordered_set<std::string> parse_word_list(std::string_view text) {
  std::unordered_set<std::string> words;
  for (const auto& line : split_lines(text)) {
    const auto w = trim(line.text);
    if (w.empty() || w.front() == '#') continue;
    std::string word(w);
    for (char& c : word) {
      if (c >= 'A' && c <= 'Z') c = static_cast<char>(c + 32);
    }
    words.insert(std::move(word));
  }
  return words;
}

}  // namespace

Lexicon::Lexicon(std::unordered_set<std::string> positive, std::unordered_set<std::string> negative)
    : positive_(std::move(positive)), negative_(std::move(negative)) {
  if (positive_.empty() || negative_.empty()) throw Error(Errc::InvalidArgument, "lexicon word lists must be nonempty");
  for (const auto& w : positive_) {
    if (negative_.count(w)) throw Error(Errc::InvalidArgument, "word '" + w + "' is both positive and negative");
  }
}

Lexicon Lexicon::load(const std::filesystem::path& dir) {
  return Lexicon(parse_word_list(read_file(dir / "positive.txt")), parse_word_list(read_file(dir / "negative.txt")));
}

Lexicon Lexicon::bundled() {
  return Lexicon(parse_word_list(detail::kBundledPositive), parse_word_list(detail::kBundledNegative));
}

double token_polarity(std::span<const std::string> tokens, const Lexicon& lex) {
  std::size_t pos = 0, neg = 0;
  for (const auto& t : tokens) {
    pos += lex.is_positive(t);
    neg += lex.is_negative(t);
  }
  if (pos + neg == 0) return 0.0;
  return (static_cast<double>(pos) - static_cast<double>(neg)) / static_cast<double>(pos + neg);
}

double article_polarity(const Article& a, const Lexicon& lex) {
  std::vector<std::string> tokens;
  for (auto& s : article_sentences(a))
    for (auto& t : s) tokens.push_back(std::move(t));
  return token_polarity(tokens, lex);
}

double pearson(std::span<const double> u, std::span<const double> v) {
  if (u.size() != v.size()) throw Error(Errc::LengthMismatch, "pearson inputs differ in length");
  if (u.size() < 2) throw Error(Errc::InvalidArgument, "pearson needs at least two observations");
  const double n = static_cast<double>(u.size());
  double mu = 0.0, mv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    mu += u[i];
    mv += v[i];
  }
  mu /= n;
  mv /= n;
  double suv = 0.0, suu = 0.0, svv = 0.0;
  for (std::size_t i = 0; i < u.size(); ++i) {
    const double du = u[i] - mu, dv = v[i] - mv;
    suv += du * dv;
    suu += du * du;
    svv += dv * dv;
  }
  if (suu == 0.0 || svv == 0.0) throw Error(Errc::ZeroVariance, "pearson input has zero variance");
  return std::clamp(suv / std::sqrt(suu * svv), -1.0, 1.0);
}

MncResult mean_normalized_correlation(const TfMatrix& tf) {
  const std::size_t m = tf.num_cols();
  MncResult out;
  if (tf.num_rows() < 2 || m < 2) {
    out.rows_excluded = tf.num_rows();
    throw Error(Errc::TooFewArticles, "MNC needs at least two articles");
  }

  // With integer counts, m * (x_i . x_j) - S_i * S_j is exact, so identical rows
  // give r = 1 exactly. Pairs are summed in (i, j) order with Kahan compensation.
  const double md = static_cast<double>(m);
  std::vector<std::size_t> usable;
  std::vector<double> sums, scatter;
  auto dot = [&](std::size_t a, std::size_t b) {
    const auto ra = tf.row(a), rb = tf.row(b);
    double d = 0.0;
    auto ia = ra.begin(), ib = rb.begin();
    while (ia != ra.end() && ib != rb.end()) {
      if (ia->column < ib->column) {
        ++ia;
      } else if (ib->column < ia->column) {
        ++ib;
      } else {
        d += static_cast<double>(ia->count) * static_cast<double>(ib->count);
        ++ia;
        ++ib;
      }
    }
    return d;
  };
  for (std::size_t r = 0; r < tf.num_rows(); ++r) {
    double sum = 0.0;
    for (const auto& e : tf.row(r)) sum += e.count;
    const double ss = md * dot(r, r) - sum * sum;
    if (!(ss > 0.0)) {
      ++out.rows_excluded;
      continue;
    }
    usable.push_back(r);
    sums.push_back(sum);
    scatter.push_back(ss);
  }
  out.rows_used = usable.size();
  if (out.rows_used < 2) throw Error(Errc::TooFewArticles, "fewer than two TF rows with nonzero variance");

  double total = 0.0, comp = 0.0;
  for (std::size_t i = 0; i < usable.size(); ++i) {
    for (std::size_t j = i + 1; j < usable.size(); ++j) {
      const double cov = md * dot(usable[i], usable[j]) - sums[i] * sums[j];
      const double r = std::clamp(cov / std::sqrt(scatter[i] * scatter[j]), -1.0, 1.0);
      const double y = r - comp;
      const double t = total + y;
      comp = (t - total) - y;
      total = t;
    }
  }
  const double n = static_cast<double>(out.rows_used);
  out.value = std::clamp(total / (n * (n - 1.0) / 2.0), -1.0, 1.0);
  return out;
}

std::optional<std::size_t> AnnualFeatureSeries::index_of(int year) const {
  auto it = std::find(years.begin(), years.end(), year);
  if (it == years.end()) return std::nullopt;
  return static_cast<std::size_t>(it - years.begin());
}

void AnnualFeatureSeries::validate() const {
  const std::size_t n = years.size();
  if (volume.size() != n || mean_sentiment.size() != n || mnc.size() != n || legislative.size() != n)
    throw Error(Errc::DimensionMismatch, "annual feature arrays differ in length");
  for (std::size_t i = 1; i < n; ++i) {
    if (years[i] != years[i - 1] + 1) throw Error(Errc::InvalidArgument, "years must be contiguous and increasing");
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (mnc[i] && volume[i] < 2) throw Error(Errc::InvalidArgument, "MNC present for a year with fewer than 2 articles");
    if (mean_sentiment[i] && volume[i] == 0) throw Error(Errc::InvalidArgument, "sentiment present for an empty year");
  }
}

AnnualFeatureSeries annual_features(const Corpus& corpus, const Lexicon& lex, const std::map<int, bool>& legislative_labels,
                                    const CycleOptions& opts, const std::string& topic) {
  if (corpus.empty()) throw Error(Errc::EmptyCorpus, "cannot compute annual features of an empty corpus");
  AnnualFeatureSeries s;
  s.topic = topic;
  const int first = corpus.period().start.year();
  const int last = corpus.period().end.year();

  std::optional<TfMatrix> global;
  if (opts.global_vocab) global = build_tf_matrix(corpus, opts.orders, 1);

  for (int y = first; y <= last; ++y) {
    std::vector<Article> in_year;
    std::vector<std::size_t> rows;
    for (std::size_t i = 0; i < corpus.size(); ++i) {
      if (corpus[i].published_at.year() == y) {
        in_year.push_back(corpus[i]);
        rows.push_back(i);
      }
    }
    s.years.push_back(y);
    s.volume.push_back(in_year.size());
    if (in_year.empty()) {
      s.mean_sentiment.emplace_back();
    } else {
      double sum = 0.0;
      for (const auto& a : in_year) sum += article_polarity(a, lex);
      s.mean_sentiment.emplace_back(sum / static_cast<double>(in_year.size()));
    }

    std::optional<double> mnc;
    if (in_year.size() >= 2) {
      try {
        if (global) {
          std::vector<std::vector<TfEntry>> sub;
          std::vector<std::string> ids;
          for (std::size_t r : rows) {
            sub.emplace_back(global->row(r).begin(), global->row(r).end());
            ids.push_back(global->article_ids()[r]);
          }
          mnc = mean_normalized_correlation(TfMatrix(global->vocab(), std::move(sub), std::move(ids))).value;
        } else {
          mnc = mean_normalized_correlation(build_tf_matrix(Corpus(std::move(in_year)), opts.orders, 1)).value;
        }
      } catch (const Error& e) {
        if (e.code() != Errc::TooFewArticles && e.code() != Errc::EmptyVocabulary) throw;
      }
    }
    s.mnc.push_back(mnc);

    auto it = legislative_labels.find(y);
    s.legislative.push_back(it == legislative_labels.end() ? std::nullopt : std::optional<bool>(it->second));
  }
  return s;
}

std::string_view to_string(CycleState s) { return s == CycleState::Active ? "Active" : "Quiescent"; }

CycleState classify_cycle_state(const AnnualFeatureSeries& series, int year) {
  const auto idx = series.index_of(year);
  if (!idx) throw Error(Errc::YearNotInSeries, std::to_string(year));
  std::vector<double> vols, mncs;
  for (std::size_t i = 0; i < series.size(); ++i) {
    vols.push_back(static_cast<double>(series.volume[i]));
    if (series.mnc[i]) mncs.push_back(*series.mnc[i]);
  }
  const double vol = static_cast<double>(series.volume[*idx]);
  if (!series.mnc[*idx] || mncs.empty()) return CycleState::Quiescent;
  const bool active = vol > median(vols) && *series.mnc[*idx] > median(mncs);
  return active ? CycleState::Active : CycleState::Quiescent;
}

std::string series_to_csv(const AnnualFeatureSeries& s) {
  std::string out = "year,volume,mean_sentiment,mnc,legislative\n";
  for (std::size_t i = 0; i < s.size(); ++i) {
    out += std::to_string(s.years[i]);
    out += ',';
    out += std::to_string(s.volume[i]);
    out += ',';
    if (s.mean_sentiment[i]) out += format_double(*s.mean_sentiment[i]);
    out += ',';
    if (s.mnc[i]) out += format_double(*s.mnc[i]);
    out += ',';
    if (s.legislative[i]) out += *s.legislative[i] ? "1" : "0";
    out += '\n';
  }
  return out;
}

AnnualFeatureSeries series_from_csv(std::string_view text, const std::string& topic) {
  AnnualFeatureSeries s;
  s.topic = topic;
  const auto lines = split_lines(text);
  if (lines.empty()) throw ParseError(1, "empty series file");
  const auto header = split_csv_line(lines.front().text);
  if (header.size() < 4 || header[0] != "year" || header[1] != "volume")
    throw ParseError(lines.front().number, "expected header year,volume,mean_sentiment,mnc,legislative");
  for (std::size_t k = 1; k < lines.size(); ++k) {
    const auto& line = lines[k];
    auto cells = split_csv_line(line.text);
    cells.resize(5);
    const auto year = parse_int(cells[0]);
    const auto vol = parse_int(cells[1]);
    if (!year || !vol || *vol < 0) throw ParseError(line.number, "bad year or volume");
    auto opt_double = [&](const std::string& c) -> std::optional<double> {
      if (trim(c).empty()) return std::nullopt;
      auto v = parse_double(c);
      if (!v) throw ParseError(line.number, "bad number '" + c + "'");
      return v;
    };
    s.years.push_back(static_cast<int>(*year));
    s.volume.push_back(static_cast<std::uint64_t>(*vol));
    s.mean_sentiment.push_back(opt_double(cells[2]));
    s.mnc.push_back(opt_double(cells[3]));
    const auto leg = trim(cells[4]);
    if (leg.empty()) {
      s.legislative.emplace_back();
    } else if (leg == "1" || leg == "true") {
      s.legislative.emplace_back(true);
    } else if (leg == "0" || leg == "false") {
      s.legislative.emplace_back(false);
    } else {
      throw ParseError(line.number, "bad legislative flag '" + std::string(leg) + "'");
    }
  }
  s.validate();
  return s;
}

}  // namespace newsframe
