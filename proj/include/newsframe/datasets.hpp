#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "newsframe/corpus.hpp"
#include "newsframe/newscycle.hpp"

namespace newsframe {

// ---- random forest over TF counts ----

struct TreeNode {
  std::int32_t feature = -1;  // -1 marks a leaf
  double threshold = 0.0;     // go left iff count <= threshold
  std::int32_t left = -1;
  std::int32_t right = -1;
  double positive = 0.0;  // bootstrap-weighted class counts reaching this node
  double negative = 0.0;

  bool is_leaf() const { return feature < 0; }
};

struct DecisionTree {
  std::vector<TreeNode> nodes;  // nodes[0] is the root

  std::size_t depth() const;
};

struct ForestParams {
  std::size_t n_trees = 100;
  std::size_t max_depth = 12;
  // Fraction of the vocabulary considered per split; unset means sqrt(m) features.
  std::optional<double> feature_subsample;
  std::size_t min_samples_split = 2;
  std::uint64_t seed = 0;
};

struct ForestModel {
  std::vector<DecisionTree> trees;
  std::size_t vocab_size = 0;
  ForestParams params;
};

/// Bagged CART trees with Gini splits. Each tree draws a bootstrap sample and,
/// at every node, a random subset of the non-constant features, all from a
/// per-tree RNG stream derived from `params.seed`.
ForestModel train_forest(const TfMatrix& tf, std::span<const std::size_t> rows, std::span<const Label> labels,
                         const ForestParams& params);
ForestModel train_forest(const TfMatrix& tf, std::span<const Label> labels, const ForestParams& params);

// Mean over trees of the leaf's positive fraction.
double score_article(const ForestModel& model, std::span<const std::uint32_t> dense_row);
double score_row(const ForestModel& model, const TfMatrix& tf, std::size_t row);

struct ScoredArticle {
  std::string id;
  double score = 0.0;
};

/// The `m` predicted negatives (score <= 0.5) scoring highest, ties by id.
/// `tf` must contain a row for every article of `unlabeled` (matched by id).
Corpus mine_hard_negatives(const ForestModel& model, const Corpus& unlabeled, const TfMatrix& tf, std::size_t m);

// ---- topic dataset bootstrap ----

struct SeedLabel {
  std::string article_id;
  Label label = Label::Unlabeled;
};

std::vector<SeedLabel> seeds_from_csv(std::string_view text);  // article_id,label

struct BootstrapParams {
  ForestParams forest;
  NgramOrders orders;
  std::size_t min_df = 2;
  std::size_t m_cap = 1000;
  // Train stage 2 on seeds plus mined articles instead of mined articles only.
  bool include_seeds_in_stage2 = false;
};

struct BootstrapProvenance {
  std::size_t universal_size = 0;
  std::size_t vocab_size = 0;
  std::size_t seed_size = 0;
  std::size_t seed_positives = 0;
  std::size_t seed_negatives = 0;
  std::size_t k_positive = 0;  // stage-1 predicted positives among unlabeled articles
  std::size_t k_negative = 0;
  std::size_t m_positive = 0;  // min(m_cap, k_positive)
  std::size_t m_negative = 0;
  std::size_t stage2_training_size = 0;
  std::size_t stage1_positives = 0;  // over the whole universal set
  std::size_t final_positives = 0;
  std::size_t final_negatives = 0;
  bool include_seeds_in_stage2 = false;
};

struct TopicDataset {
  Corpus positives;
  Corpus negatives;
  BootstrapProvenance provenance;
  std::vector<std::string> stage1_positive_ids;  // for precision comparisons
};

TopicDataset bootstrap_dataset(const std::vector<SeedLabel>& seeds, const Corpus& universal,
                               const BootstrapParams& params);

/// Samples up to `n` articles from quiescent years: volume at or below the
/// series median and below the series maximum.
Corpus quiescent_negatives(const AnnualFeatureSeries& series, const Corpus& universal, std::size_t n,
                           std::uint64_t seed);

}  // namespace newsframe
