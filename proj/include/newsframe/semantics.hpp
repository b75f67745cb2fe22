#pragma once

#include <optional>
#include <string>
#include <unordered_map>
#include <vector>

#include <Eigen/Dense>
#include <Eigen/SparseCore>

#include "newsframe/corpus.hpp"
#include "newsframe/keywords.hpp"

namespace newsframe {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Symmetric windowed unigram co-occurrence counts. The diagonal is always zero:
/// a token never co-occurs with itself.
class CooccurrenceMatrix {
 public:
  CooccurrenceMatrix(std::vector<std::string> vocab, SparseMatrix counts, std::size_t window);

  const std::vector<std::string>& vocab() const { return vocab_; }
  const SparseMatrix& counts() const { return counts_; }
  std::size_t window() const { return window_; }
  std::size_t size() const { return vocab_.size(); }

  std::optional<std::size_t> index_of(const std::string& token) const;
  double count(const std::string& a, const std::string& b) const;  // 0 if either is unknown

 private:
  std::vector<std::string> vocab_;
  SparseMatrix counts_;
  std::size_t window_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Counts each unordered token pair at most `window` positions apart within a sentence.
CooccurrenceMatrix build_cooccurrence(const Corpus& corpus, std::size_t window);

enum class Weighting { Raw, Ppmi };

// Positive pointwise mutual information (natural log) of a count matrix.
SparseMatrix ppmi(const SparseMatrix& counts);

struct TruncatedSvd {
  Eigen::MatrixXd u;  // rows x j, orthonormal columns
  Eigen::VectorXd s;  // j singular values, non-increasing
  Eigen::MatrixXd v;  // cols x j, orthonormal columns
  int iterations = 0;
};

struct SvdOptions {
  double tolerance = 1e-10;  // residual bound relative to the largest singular value
  int max_iterations = 2000;
  int oversample = 10;
};

/// Top-`j` singular triplets by block subspace iteration with Rayleigh-Ritz
/// extraction. Each singular pair is sign-normalized so the largest-magnitude
/// entry of the left vector is positive. Throws ConvergenceFailure when the
/// residuals do not drop below the tolerance within the iteration budget.
TruncatedSvd truncated_svd(const SparseMatrix& a, std::size_t j, const SvdOptions& opts = {});
TruncatedSvd truncated_svd(const Eigen::MatrixXd& a, std::size_t j, const SvdOptions& opts = {});

class EmbeddingSpace {
 public:
  EmbeddingSpace(std::vector<std::string> vocab, Eigen::MatrixXd vectors, Eigen::VectorXd singular_values);

  const std::vector<std::string>& vocab() const { return vocab_; }
  const Eigen::MatrixXd& vectors() const { return vectors_; }
  const Eigen::VectorXd& singular_values() const { return singular_values_; }
  std::size_t dims() const { return static_cast<std::size_t>(vectors_.cols()); }

  bool contains(const std::string& token) const { return index_.count(token) > 0; }
  // Throws OutOfVocabulary.
  Eigen::VectorXd vector(const std::string& token) const;

 private:
  std::vector<std::string> vocab_;
  Eigen::MatrixXd vectors_;
  Eigen::VectorXd singular_values_;
  std::unordered_map<std::string, std::size_t> index_;
};

// Rows of U_j * Sigma_j after the optional PPMI transform.
EmbeddingSpace embed(const CooccurrenceMatrix& cooc, std::size_t j, Weighting weighting,
                     const SvdOptions& opts = {});

/// Minimum-cost assignment on a square cost matrix (Hungarian method).
/// Returns the column assigned to each row.
std::vector<std::size_t> min_cost_assignment(const Eigen::MatrixXd& cost);

/// Exact word mover's distance between the token multisets of two n-grams,
/// each token carrying uniform mass, with Euclidean ground cost.
double wmd(const NGram& a, const NGram& b, const EmbeddingSpace& space);

// Same, on explicit point sets (rows are points).
double transport_distance(const Eigen::MatrixXd& a, const Eigen::MatrixXd& b);

// 1 / (1 + d). Throws NegativeDistance for d < 0 or NaN.
double similarity(double distance);

struct KeywordPair {
  NGram a;
  NGram b;
  double wmd = 0.0;
  double similarity = 0.0;
};

struct KeywordDistanceReport {
  std::vector<KeywordPair> pairs;  // all i < j pairs, in keyword order
  double mean_similarity = 0.0;
  double median_wmd = 0.0;
};

KeywordDistanceReport pairwise_report(const std::vector<NGram>& keywords, const EmbeddingSpace& space);
KeywordDistanceReport pairwise_report(const KeywordSet& ks, const EmbeddingSpace& space);

struct Point2d {
  NGram ngram;
  double x = 0.0;
  double y = 0.0;
};

// First two embedding coordinates of each keyword's mean token vector.
std::vector<Point2d> project_2d(const EmbeddingSpace& space, const std::vector<NGram>& keywords);

// Median of a list (mean of the middle two for even sizes). Throws on empty input.
double median(std::vector<double> values);

}  // namespace newsframe
