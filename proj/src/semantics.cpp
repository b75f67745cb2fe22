#include "newsframe/semantics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <numeric>
#include <set>

#include <Eigen/QR>
#include <Eigen/SVD>

#include "newsframe/error.hpp"
#include "newsframe/rng.hpp"

namespace newsframe {

// ---------------------------------------------------------------------------
// co-occurrence

CooccurrenceMatrix::CooccurrenceMatrix(std::vector<std::string> vocab, SparseMatrix counts, std::size_t window)
    : vocab_(std::move(vocab)), counts_(std::move(counts)), window_(window) {
  if (window_ < 1) throw Error(Errc::InvalidArgument, "co-occurrence window must be >= 1");
  const auto n = static_cast<Eigen::Index>(vocab_.size());
  if (counts_.rows() != n || counts_.cols() != n)
    throw Error(Errc::DimensionMismatch, "co-occurrence matrix must be V x V");
  for (std::size_t i = 0; i < vocab_.size(); ++i) index_.emplace(vocab_[i], i);
}

std::optional<std::size_t> CooccurrenceMatrix::index_of(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

double CooccurrenceMatrix::count(const std::string& a, const std::string& b) const {
  auto i = index_of(a), j = index_of(b);
  if (!i || !j) return 0.0;
  return counts_.coeff(static_cast<Eigen::Index>(*i), static_cast<Eigen::Index>(*j));
}

CooccurrenceMatrix build_cooccurrence(const Corpus& corpus, std::size_t window) {
  if (corpus.empty()) throw Error(Errc::EmptyCorpus, "cannot build co-occurrences from an empty corpus");
  if (window < 1) throw Error(Errc::InvalidArgument, "co-occurrence window must be >= 1");

  std::vector<std::vector<Sentence>> docs;
  docs.reserve(corpus.size());
  std::set<std::string> vocab_set;
  for (const auto& a : corpus.articles()) {
    docs.push_back(article_sentences(a));
    for (const auto& s : docs.back()) vocab_set.insert(s.begin(), s.end());
  }
  if (vocab_set.empty()) throw Error(Errc::EmptyVocabulary, "corpus has no tokens");

  std::vector<std::string> vocab(vocab_set.begin(), vocab_set.end());
  std::map<std::string, int> index;
  for (std::size_t i = 0; i < vocab.size(); ++i) index.emplace(vocab[i], static_cast<int>(i));

  std::vector<Eigen::Triplet<double>> triplets;
  for (const auto& doc : docs) {
    for (const auto& s : doc) {
      std::vector<int> ids;
      ids.reserve(s.size());
      for (const auto& t : s) ids.push_back(index.at(t));
      for (std::size_t i = 0; i < ids.size(); ++i) {
        for (std::size_t j = i + 1; j < ids.size() && j - i <= window; ++j) {
          if (ids[i] == ids[j]) continue;
          triplets.emplace_back(ids[i], ids[j], 1.0);
          triplets.emplace_back(ids[j], ids[i], 1.0);
        }
      }
    }
  }
  const auto n = static_cast<Eigen::Index>(vocab.size());
  SparseMatrix counts(n, n);
  counts.setFromTriplets(triplets.begin(), triplets.end());
  counts.makeCompressed();
  return CooccurrenceMatrix(std::move(vocab), std::move(counts), window);
}

SparseMatrix ppmi(const SparseMatrix& counts) {
  const Eigen::VectorXd row_sums = counts * Eigen::VectorXd::Ones(counts.cols());
  const Eigen::VectorXd col_sums = counts.transpose() * Eigen::VectorXd::Ones(counts.rows());
  const double total = row_sums.sum();
  std::vector<Eigen::Triplet<double>> triplets;
  if (total > 0.0) {
    for (Eigen::Index k = 0; k < counts.outerSize(); ++k) {
      for (SparseMatrix::InnerIterator it(counts, k); it; ++it) {
        if (it.value() <= 0.0) continue;
        const double pmi = std::log(it.value() * total / (row_sums[it.row()] * col_sums[it.col()]));
        if (pmi > 0.0) triplets.emplace_back(static_cast<int>(it.row()), static_cast<int>(it.col()), pmi);
      }
    }
  }
  SparseMatrix out(counts.rows(), counts.cols());
  out.setFromTriplets(triplets.begin(), triplets.end());
  out.makeCompressed();
  return out;
}

// ---------------------------------------------------------------------------
// truncated SVD

namespace {

Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd& y) {
  Eigen::HouseholderQR<Eigen::MatrixXd> qr(y);
  return qr.householderQ() * Eigen::MatrixXd::Identity(y.rows(), y.cols());
}

double frobenius(const SparseMatrix& a) { return a.norm(); }
double frobenius(const Eigen::MatrixXd& a) { return a.norm(); }

template <typename Matrix>
TruncatedSvd subspace_svd(const Matrix& a, std::size_t j, const SvdOptions& opts) {
  const Eigen::Index rows = a.rows(), cols = a.cols();
  const auto min_dim = static_cast<std::size_t>(std::min(rows, cols));
  if (j < 1 || j > min_dim)
    throw Error(Errc::InvalidArgument, "SVD rank j=" + std::to_string(j) + " outside [1, " +
                                           std::to_string(min_dim) + "]");
  const auto jj = static_cast<Eigen::Index>(j);
  const Eigen::Index p = std::min<Eigen::Index>(static_cast<Eigen::Index>(min_dim), jj + std::max(opts.oversample, 0));

  TruncatedSvd out;
  if (frobenius(a) == 0.0) {
    out.u = Eigen::MatrixXd::Identity(rows, jj);
    out.v = Eigen::MatrixXd::Identity(cols, jj);
    out.s = Eigen::VectorXd::Zero(jj);
    return out;
  }

  Rng rng = make_rng(0x5eed, "svd");
  std::normal_distribution<double> gauss;
  Eigen::MatrixXd start(cols, p);
  for (Eigen::Index c = 0; c < p; ++c)
    for (Eigen::Index r = 0; r < cols; ++r) start(r, c) = gauss(rng);

  Eigen::MatrixXd qv = orthonormal_basis(start);
  Eigen::MatrixXd qu = orthonormal_basis(a * qv);

  for (int iter = 1; iter <= opts.max_iterations; ++iter) {
    qv = orthonormal_basis(a.transpose() * qu);
    const Eigen::MatrixXd av = a * qv;
    qu = orthonormal_basis(av);

    const Eigen::MatrixXd small = qu.transpose() * av;  // p x p Rayleigh quotient
    Eigen::JacobiSVD<Eigen::MatrixXd> svd(small, Eigen::ComputeFullU | Eigen::ComputeFullV);
    const Eigen::MatrixXd u = qu * svd.matrixU().leftCols(jj);
    const Eigen::MatrixXd v = qv * svd.matrixV().leftCols(jj);
    const Eigen::VectorXd s = svd.singularValues().head(jj);

    const double scale = std::max(svd.singularValues()(0), std::numeric_limits<double>::min());
    double worst = 0.0;
    for (Eigen::Index i = 0; i < jj; ++i) {
      const double r1 = (a * v.col(i) - s(i) * u.col(i)).norm();
      const double r2 = (a.transpose() * u.col(i) - s(i) * v.col(i)).norm();
      worst = std::max({worst, r1, r2});
    }
    if (worst <= opts.tolerance * scale) {
      out.u = u;
      out.v = v;
      out.s = s;
      out.iterations = iter;
      for (Eigen::Index i = 0; i < jj; ++i) {
        Eigen::Index arg = 0;
        out.u.col(i).cwiseAbs().maxCoeff(&arg);
        if (out.u(arg, i) < 0.0) {
          out.u.col(i) *= -1.0;
          out.v.col(i) *= -1.0;
        }
      }
      return out;
    }
  }
  throw Error(Errc::ConvergenceFailure, "truncated SVD did not reach tolerance " + std::to_string(opts.tolerance) +
                                            " within " + std::to_string(opts.max_iterations) + " iterations");
}

}  // namespace

TruncatedSvd truncated_svd(const SparseMatrix& a, std::size_t j, const SvdOptions& opts) {
  return subspace_svd(a, j, opts);
}

TruncatedSvd truncated_svd(const Eigen::MatrixXd& a, std::size_t j, const SvdOptions& opts) {
  return subspace_svd(a, j, opts);
}

// ---------------------------------------------------------------------------
// embedding space

EmbeddingSpace::EmbeddingSpace(std::vector<std::string> vocab, Eigen::MatrixXd vectors,
                               Eigen::VectorXd singular_values)
    : vocab_(std::move(vocab)), vectors_(std::move(vectors)), singular_values_(std::move(singular_values)) {
  if (static_cast<Eigen::Index>(vocab_.size()) != vectors_.rows())
    throw Error(Errc::DimensionMismatch, "embedding rows differ from vocabulary size");
  if (vectors_.cols() < 1) throw Error(Errc::InvalidArgument, "embedding dimension must be >= 1");
  if (singular_values_.size() != vectors_.cols())
    throw Error(Errc::DimensionMismatch, "one singular value per embedding dimension");
  if (!vectors_.allFinite()) throw Error(Errc::InvalidArgument, "embedding vectors must be finite");
  for (std::size_t i = 0; i < vocab_.size(); ++i) index_.emplace(vocab_[i], i);
}

Eigen::VectorXd EmbeddingSpace::vector(const std::string& token) const {
  auto it = index_.find(token);
  if (it == index_.end()) throw Error(Errc::OutOfVocabulary, "'" + token + "'");
  return vectors_.row(static_cast<Eigen::Index>(it->second)).transpose();
}

EmbeddingSpace embed(const CooccurrenceMatrix& cooc, std::size_t j, Weighting weighting, const SvdOptions& opts) {
  if (j < 1 || j > cooc.size())
    throw Error(Errc::InvalidArgument, "embedding dimension j must lie in [1, V]");
  const SparseMatrix m = weighting == Weighting::Ppmi ? ppmi(cooc.counts()) : cooc.counts();
  TruncatedSvd svd = truncated_svd(m, j, opts);
  Eigen::MatrixXd vectors = svd.u * svd.s.asDiagonal();
  return EmbeddingSpace(cooc.vocab(), std::move(vectors), std::move(svd.s));
}

// ---------------------------------------------------------------------------
// word mover's distance

std::vector<std::size_t> min_cost_assignment(const Eigen::MatrixXd& cost) {
  const auto n = static_cast<std::size_t>(cost.rows());
  if (cost.cols() != cost.rows()) throw Error(Errc::DimensionMismatch, "assignment cost matrix must be square");
  if (n == 0) return {};
  const double inf = std::numeric_limits<double>::infinity();
  // Potentials u (rows), v (cols); p[col] = row matched to col; 1-based with a sentinel 0.
  std::vector<double> u(n + 1, 0.0), v(n + 1, 0.0), minv(n + 1);
  std::vector<std::size_t> p(n + 1, 0), way(n + 1, 0);
  std::vector<char> used(n + 1);
  for (std::size_t i = 1; i <= n; ++i) {
    p[0] = i;
    std::size_t j0 = 0;
    std::fill(minv.begin(), minv.end(), inf);
    std::fill(used.begin(), used.end(), 0);
    do {
      used[j0] = 1;
      const std::size_t i0 = p[j0];
      double delta = inf;
      std::size_t j1 = 0;
      for (std::size_t j = 1; j <= n; ++j) {
        if (used[j]) continue;
        const double cur = cost(static_cast<Eigen::Index>(i0 - 1), static_cast<Eigen::Index>(j - 1)) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (std::size_t j = 0; j <= n; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const std::size_t j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<std::size_t> assignment(n);
  for (std::size_t j = 1; j <= n; ++j) assignment[p[j] - 1] = j - 1;
  return assignment;
}

double transport_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b) {
  const auto n = static_cast<std::size_t>(a.rows()), m = static_cast<std::size_t>(b.rows());
  if (n == 0 || m == 0) throw Error(Errc::InvalidArgument, "transport between empty point sets");
  if (a.cols() != b.cols()) throw Error(Errc::DimensionMismatch, "point sets live in different dimensions");
  // Uniform masses 1/n and 1/m: replicate each point so both sides carry
  // lcm(n, m) unit masses; the optimal plan is then a permutation.
  const std::size_t l = std::lcm(n, m);
  const std::size_t ra = l / n, rb = l / m;
  Eigen::MatrixXd cost(static_cast<Eigen::Index>(l), static_cast<Eigen::Index>(l));
  for (std::size_t i = 0; i < l; ++i) {
    for (std::size_t j = 0; j < l; ++j) {
      cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) =
          (a.row(static_cast<Eigen::Index>(i / ra)) - b.row(static_cast<Eigen::Index>(j / rb))).norm();
    }
  }
  const auto assignment = min_cost_assignment(cost);
  double total = 0.0;
  for (std::size_t i = 0; i < l; ++i)
    total += cost(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(assignment[i]));
  return total / static_cast<double>(l);
}

namespace {
Eigen::MatrixXd token_points(const NGram& g, const EmbeddingSpace& space) {
  if (g.tokens.empty()) throw Error(Errc::InvalidArgument, "n-gram has no tokens");
  Eigen::MatrixXd pts(static_cast<Eigen::Index>(g.tokens.size()), static_cast<Eigen::Index>(space.dims()));
  for (std::size_t i = 0; i < g.tokens.size(); ++i) pts.row(static_cast<Eigen::Index>(i)) = space.vector(g.tokens[i]);
  return pts;
}
}  // namespace

double wmd(const NGram& a, const NGram& b, const EmbeddingSpace& space) {
  return transport_distance(token_points(a, space), token_points(b, space));
}

double similarity(double distance) {
  if (!(distance >= 0.0)) throw Error(Errc::NegativeDistance, "distance must be >= 0");
  return 1.0 / (1.0 + distance);
}

double median(std::vector<double> values) {
  if (values.empty()) throw Error(Errc::InvalidArgument, "median of an empty list");
  std::sort(values.begin(), values.end());
  const std::size_t n = values.size();
  return n % 2 ? values[n / 2] : 0.5 * (values[n / 2 - 1] + values[n / 2]);
}

KeywordDistanceReport pairwise_report(const std::vector<NGram>& keywords, const EmbeddingSpace& space) {
  KeywordDistanceReport report;
  for (const auto& k : keywords)
    for (const auto& t : k.tokens)
      if (!space.contains(t)) throw Error(Errc::OutOfVocabulary, "'" + t + "' in keyword '" + k.text() + "'");

  std::vector<double> distances;
  double sim_sum = 0.0;
  for (std::size_t i = 0; i < keywords.size(); ++i) {
    for (std::size_t j = i + 1; j < keywords.size(); ++j) {
      const double d = wmd(keywords[i], keywords[j], space);
      const double s = similarity(d);
      report.pairs.push_back({keywords[i], keywords[j], d, s});
      distances.push_back(d);
      sim_sum += s;
    }
  }
  if (!report.pairs.empty()) {
    report.mean_similarity = sim_sum / static_cast<double>(report.pairs.size());
    report.median_wmd = median(distances);
  }
  return report;
}

KeywordDistanceReport pairwise_report(const KeywordSet& ks, const EmbeddingSpace& space) {
  std::vector<NGram> grams;
  grams.reserve(ks.keywords.size());
  for (const auto& k : ks.keywords) grams.push_back(k.ngram);
  return pairwise_report(grams, space);
}

std::vector<Point2d> project_2d(const EmbeddingSpace& space, const std::vector<NGram>& keywords) {
  std::vector<Point2d> out;
  out.reserve(keywords.size());
  for (const auto& k : keywords) {
    const Eigen::MatrixXd pts = token_points(k, space);
    const Eigen::VectorXd mean = pts.colwise().mean().transpose();
    out.push_back({k, mean(0), mean.size() > 1 ? mean(1) : 0.0});
  }
  return out;
}

}  // namespace newsframe
