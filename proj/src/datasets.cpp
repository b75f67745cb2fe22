#include "newsframe/datasets.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <set>
#include <unordered_map>
#include <unordered_set>

#include "newsframe/error.hpp"
#include "newsframe/format.hpp"
#include "newsframe/rng.hpp"
#include "newsframe/semantics.hpp"

namespace newsframe {

std::size_t DecisionTree::depth() const {
  if (nodes.empty()) return 0;
  std::vector<std::pair<std::int32_t, std::size_t>> stack{{0, 0}};
  std::size_t best = 0;
  while (!stack.empty()) {
    auto [i, d] = stack.back();
    stack.pop_back();
    best = std::max(best, d);
    const auto& n = nodes[static_cast<std::size_t>(i)];
    if (!n.is_leaf()) {
      stack.emplace_back(n.left, d + 1);
      stack.emplace_back(n.right, d + 1);
    }
  }
  return best;
}

namespace {

template <typename CountOf>
const TreeNode& find_leaf(const DecisionTree& tree, CountOf&& count_of) {
  const TreeNode* n = &tree.nodes.front();
  while (!n->is_leaf()) {
    const double v = count_of(static_cast<std::size_t>(n->feature));
    n = &tree.nodes[static_cast<std::size_t>(v <= n->threshold ? n->left : n->right)];
  }
  return *n;
}

double leaf_fraction(const TreeNode& leaf) {
  const double total = leaf.positive + leaf.negative;
  return total > 0.0 ? leaf.positive / total : 0.5;
}

double gini(double pos, double neg) {
  const double n = pos + neg;
  if (n <= 0.0) return 0.0;
  const double p = pos / n;
  return 2.0 * p * (1.0 - p);
}

class TreeBuilder {
 public:
  TreeBuilder(const TfMatrix& tf, const std::vector<bool>& positive, const ForestParams& params, std::size_t mtry,
              Rng rng)
      : tf_(tf), positive_(positive), params_(params), mtry_(mtry), rng_(std::move(rng)) {}

  DecisionTree build(std::vector<std::size_t> sample) {
    DecisionTree tree;
    grow(tree, std::move(sample), 0);
    return tree;
  }

 private:
  struct Split {
    std::int32_t feature = -1;
    double threshold = 0.0;
    double gain = -1.0;
  };

  std::int32_t grow(DecisionTree& tree, std::vector<std::size_t> sample, std::size_t depth) {
    TreeNode node;
    for (std::size_t r : sample) (positive_[r] ? node.positive : node.negative) += 1.0;
    const auto index = static_cast<std::int32_t>(tree.nodes.size());
    tree.nodes.push_back(node);

    const bool pure = node.positive == 0.0 || node.negative == 0.0;
    if (pure || depth >= params_.max_depth || sample.size() < params_.min_samples_split) return index;

    const Split split = best_split(sample, node);
    if (split.feature < 0) return index;

    std::vector<std::size_t> left, right;
    for (std::size_t r : sample) {
      (tf_.count(r, static_cast<std::size_t>(split.feature)) <= split.threshold ? left : right).push_back(r);
    }
    sample.clear();
    sample.shrink_to_fit();
    const std::int32_t l = grow(tree, std::move(left), depth + 1);
    const std::int32_t r = grow(tree, std::move(right), depth + 1);
    auto& n = tree.nodes[static_cast<std::size_t>(index)];
    n.feature = split.feature;
    n.threshold = split.threshold;
    n.left = l;
    n.right = r;
    return index;
  }

  Split best_split(const std::vector<std::size_t>& sample, const TreeNode& node) {
    // Only columns present in some sampled row can vary inside this node.
    std::set<std::uint32_t> present;
    for (std::size_t r : sample)
      for (const auto& e : tf_.row(r)) present.insert(e.column);
    std::vector<std::uint32_t> candidates(present.begin(), present.end());

    const double parent = gini(node.positive, node.negative);
    const double n = node.positive + node.negative;
    Split best;
    std::size_t evaluated = 0;
    std::vector<std::pair<std::uint32_t, bool>> values;
    values.reserve(sample.size());

    // Lazy Fisher-Yates: draw candidates until mtry non-constant ones were scored.
    for (std::size_t i = 0; i < candidates.size() && evaluated < mtry_; ++i) {
      const std::size_t j = i + static_cast<std::size_t>(uniform_index(rng_, candidates.size() - i));
      std::swap(candidates[i], candidates[j]);
      const std::uint32_t f = candidates[i];

      values.clear();
      for (std::size_t r : sample) values.emplace_back(tf_.count(r, f), positive_[r]);
      std::sort(values.begin(), values.end());
      if (values.front().first == values.back().first) continue;  // constant here
      ++evaluated;

      double lp = 0.0, ln = 0.0;
      for (std::size_t k = 0; k + 1 < values.size(); ++k) {
        (values[k].second ? lp : ln) += 1.0;
        if (values[k].first == values[k + 1].first) continue;
        const double rp = node.positive - lp, rn = node.negative - ln;
        const double child = ((lp + ln) * gini(lp, ln) + (rp + rn) * gini(rp, rn)) / n;
        const double gain = parent - child;
        if (gain > best.gain) {
          best.gain = gain;
          best.feature = static_cast<std::int32_t>(f);
          best.threshold = 0.5 * (static_cast<double>(values[k].first) + static_cast<double>(values[k + 1].first));
        }
      }
    }
    return best;
  }

  const TfMatrix& tf_;
  const std::vector<bool>& positive_;
  const ForestParams& params_;
  std::size_t mtry_;
  Rng rng_;
};

}  // namespace

ForestModel train_forest(const TfMatrix& tf, std::span<const std::size_t> rows, std::span<const Label> labels,
                         const ForestParams& params) {
  if (rows.size() != labels.size()) throw Error(Errc::LengthMismatch, "one label per training row");
  if (rows.empty()) throw Error(Errc::InvalidArgument, "no training rows");
  if (params.n_trees < 1) throw Error(Errc::InvalidArgument, "n_trees must be >= 1");
  if (params.max_depth < 1) throw Error(Errc::InvalidArgument, "max_depth must be >= 1");
  if (params.feature_subsample && !(*params.feature_subsample > 0.0 && *params.feature_subsample <= 1.0))
    throw Error(Errc::InvalidArgument, "feature_subsample must lie in (0, 1]");
  if (tf.num_cols() == 0) throw Error(Errc::EmptyVocabulary, "TF matrix has no columns");

  std::vector<bool> positive(tf.num_rows(), false);
  std::size_t n_pos = 0, n_neg = 0;
  for (std::size_t i = 0; i < rows.size(); ++i) {
    if (rows[i] >= tf.num_rows()) throw Error(Errc::IndexOutOfRange, "training row out of range");
    if (labels[i] == Label::Positive) {
      positive[rows[i]] = true;
      ++n_pos;
    } else if (labels[i] == Label::Negative) {
      ++n_neg;
    } else {
      throw Error(Errc::InvalidArgument, "training labels must be Positive or Negative");
    }
  }
  if (n_pos == 0 || n_neg == 0) throw Error(Errc::SingleClass, "training labels contain a single class");

  const double m = static_cast<double>(tf.num_cols());
  const std::size_t mtry = std::max<std::size_t>(
      1, static_cast<std::size_t>(std::lround(params.feature_subsample ? *params.feature_subsample * m : std::sqrt(m))));

  ForestModel model;
  model.vocab_size = tf.num_cols();
  model.params = params;
  model.trees.reserve(params.n_trees);
  for (std::size_t t = 0; t < params.n_trees; ++t) {
    Rng rng = make_rng(params.seed, "forest", t);
    std::vector<std::size_t> sample(rows.size());
    for (auto& s : sample) s = rows[uniform_index(rng, rows.size())];
    TreeBuilder builder(tf, positive, params, mtry, std::move(rng));
    model.trees.push_back(builder.build(std::move(sample)));
  }
  return model;
}

ForestModel train_forest(const TfMatrix& tf, std::span<const Label> labels, const ForestParams& params) {
  std::vector<std::size_t> rows(tf.num_rows());
  std::iota(rows.begin(), rows.end(), std::size_t{0});
  return train_forest(tf, rows, labels, params);
}

double score_article(const ForestModel& model, std::span<const std::uint32_t> dense_row) {
  if (dense_row.size() != model.vocab_size)
    throw Error(Errc::DimensionMismatch, "row has " + std::to_string(dense_row.size()) + " columns, model expects " +
                                             std::to_string(model.vocab_size));
  double sum = 0.0;
  for (const auto& tree : model.trees)
    sum += leaf_fraction(find_leaf(tree, [&](std::size_t f) { return static_cast<double>(dense_row[f]); }));
  return sum / static_cast<double>(model.trees.size());
}

double score_row(const ForestModel& model, const TfMatrix& tf, std::size_t row) {
  if (tf.num_cols() != model.vocab_size) throw Error(Errc::DimensionMismatch, "TF vocabulary differs from the model's");
  double sum = 0.0;
  for (const auto& tree : model.trees)
    sum += leaf_fraction(find_leaf(tree, [&](std::size_t f) { return static_cast<double>(tf.count(row, f)); }));
  return sum / static_cast<double>(model.trees.size());
}

namespace {

std::unordered_map<std::string, std::size_t> row_index(const TfMatrix& tf) {
  std::unordered_map<std::string, std::size_t> idx;
  for (std::size_t r = 0; r < tf.num_rows(); ++r) idx.emplace(tf.article_ids()[r], r);
  return idx;
}

std::vector<ScoredArticle> score_corpus(const ForestModel& model, const Corpus& corpus, const TfMatrix& tf) {
  const auto idx = row_index(tf);
  std::vector<ScoredArticle> out;
  out.reserve(corpus.size());
  for (const auto& a : corpus.articles()) {
    auto it = idx.find(a.id);
    if (it == idx.end()) throw Error(Errc::InvalidArgument, "article " + a.id + " has no TF row");
    out.push_back({a.id, score_row(model, tf, it->second)});
  }
  return out;
}

// Highest score first, then id.
void rank(std::vector<ScoredArticle>& v) {
  std::sort(v.begin(), v.end(), [](const ScoredArticle& a, const ScoredArticle& b) {
    return a.score != b.score ? a.score > b.score : a.id < b.id;
  });
}

Corpus pick(const Corpus& from, const std::vector<std::string>& ids, Label label) {
  std::unordered_set<std::string> wanted(ids.begin(), ids.end());
  std::vector<Article> out;
  for (const auto& a : from.articles()) {
    if (wanted.count(a.id)) {
      out.push_back(a);
      out.back().label = label;
    }
  }
  return Corpus(std::move(out), from.period());
}

}  // namespace

Corpus mine_hard_negatives(const ForestModel& model, const Corpus& unlabeled, const TfMatrix& tf, std::size_t m) {
  if (m < 1) throw Error(Errc::InvalidArgument, "m must be >= 1");
  auto scored = score_corpus(model, unlabeled, tf);
  std::erase_if(scored, [](const ScoredArticle& s) { return s.score > 0.5; });
  rank(scored);
  if (scored.size() > m) scored.resize(m);
  std::vector<std::string> ids;
  for (const auto& s : scored) ids.push_back(s.id);
  return pick(unlabeled, ids, Label::Negative);
}

std::vector<SeedLabel> seeds_from_csv(std::string_view text) {
  std::vector<SeedLabel> out;
  const auto lines = split_lines(text);
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto cells = split_csv_line(lines[i].text);
    if (i == 0 && !cells.empty() && cells[0] == "article_id") continue;
    if (cells.size() < 2) throw ParseError(lines[i].number, "expected article_id,label");
    auto label = parse_label(cells[1]);
    if (!label || *label == Label::Unlabeled) throw ParseError(lines[i].number, "label must be Positive or Negative");
    out.push_back({cells[0], *label});
  }
  return out;
}

TopicDataset bootstrap_dataset(const std::vector<SeedLabel>& seeds, const Corpus& universal,
                               const BootstrapParams& params) {
  if (universal.empty()) throw Error(Errc::EmptyCorpus, "universal set is empty");
  const TfMatrix tf = build_tf_matrix(universal, params.orders, params.min_df);
  const auto idx = row_index(tf);

  TopicDataset ds;
  auto& prov = ds.provenance;
  prov.universal_size = universal.size();
  prov.vocab_size = tf.num_cols();
  prov.seed_size = seeds.size();
  prov.include_seeds_in_stage2 = params.include_seeds_in_stage2;

  std::vector<std::size_t> seed_rows;
  std::vector<Label> seed_labels;
  std::unordered_set<std::string> seed_ids;
  for (const auto& s : seeds) {
    auto it = idx.find(s.article_id);
    if (it == idx.end()) throw Error(Errc::InvalidArgument, "seed article " + s.article_id + " is not in the universal set");
    if (!seed_ids.insert(s.article_id).second) throw Error(Errc::InvalidArgument, "duplicate seed " + s.article_id);
    seed_rows.push_back(it->second);
    seed_labels.push_back(s.label);
    (s.label == Label::Positive ? prov.seed_positives : prov.seed_negatives) += 1;
  }

  ForestParams stage1_params = params.forest;
  stage1_params.seed = substream_seed(params.forest.seed, "stage1");
  const ForestModel stage1 = train_forest(tf, seed_rows, seed_labels, stage1_params);

  std::vector<Article> unlabeled_articles;
  for (const auto& a : universal.articles())
    if (!seed_ids.count(a.id)) unlabeled_articles.push_back(a);
  const Corpus unlabeled(std::move(unlabeled_articles), universal.period());

  auto scored = score_corpus(stage1, unlabeled, tf);
  rank(scored);
  for (const auto& s : scored) (s.score > 0.5 ? prov.k_positive : prov.k_negative) += 1;
  prov.m_positive = std::min(params.m_cap, prov.k_positive);
  prov.m_negative = std::min(params.m_cap, prov.k_negative);

  std::vector<std::size_t> train_rows;
  std::vector<Label> train_labels;
  for (std::size_t i = 0; i < prov.m_positive; ++i) {
    train_rows.push_back(idx.at(scored[i].id));
    train_labels.push_back(Label::Positive);
  }
  if (prov.m_negative > 0) {
    const Corpus hard = mine_hard_negatives(stage1, unlabeled, tf, prov.m_negative);
    for (const auto& a : hard.articles()) {
      train_rows.push_back(idx.at(a.id));
      train_labels.push_back(Label::Negative);
    }
  }
  if (params.include_seeds_in_stage2) {
    train_rows.insert(train_rows.end(), seed_rows.begin(), seed_rows.end());
    train_labels.insert(train_labels.end(), seed_labels.begin(), seed_labels.end());
  }
  prov.stage2_training_size = train_rows.size();

  ForestParams stage2_params = params.forest;
  stage2_params.seed = substream_seed(params.forest.seed, "stage2");
  const ForestModel stage2 = train_forest(tf, train_rows, train_labels, stage2_params);

  std::vector<std::string> pos_ids, neg_ids;
  for (std::size_t r = 0; r < tf.num_rows(); ++r) {
    const std::string& id = tf.article_ids()[r];
    if (score_row(stage1, tf, r) > 0.5) ds.stage1_positive_ids.push_back(id);
    (score_row(stage2, tf, r) > 0.5 ? pos_ids : neg_ids).push_back(id);
  }
  prov.stage1_positives = ds.stage1_positive_ids.size();
  ds.positives = pick(universal, pos_ids, Label::Positive);
  ds.negatives = pick(universal, neg_ids, Label::Negative);
  prov.final_positives = ds.positives.size();
  prov.final_negatives = ds.negatives.size();
  return ds;
}

Corpus quiescent_negatives(const AnnualFeatureSeries& series, const Corpus& universal, std::size_t n,
                           std::uint64_t seed) {
  if (series.size() == 0) throw Error(Errc::InvalidArgument, "empty feature series");
  if (!universal.empty() &&
      (universal.period().start.year() < series.years.front() || universal.period().end.year() > series.years.back()))
    throw Error(Errc::InvalidArgument, "feature series does not cover the universal period");

  std::vector<double> vols;
  for (auto v : series.volume) vols.push_back(static_cast<double>(v));
  const double med = median(vols);
  const double mx = *std::max_element(vols.begin(), vols.end());
  std::set<int> quiet;
  for (std::size_t i = 0; i < series.size(); ++i) {
    if (vols[i] <= med && vols[i] < mx) quiet.insert(series.years[i]);
  }
  if (quiet.empty()) throw Error(Errc::NoQuiescentYears, "no year falls below the median volume");

  std::vector<std::size_t> pool;
  for (std::size_t i = 0; i < universal.size(); ++i)
    if (quiet.count(universal[i].published_at.year())) pool.push_back(i);

  Rng rng = make_rng(seed, "sampling");
  const std::size_t take = std::min(n, pool.size());
  for (std::size_t i = 0; i < take; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(uniform_index(rng, pool.size() - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(take);
  std::sort(pool.begin(), pool.end());

  std::vector<Article> out;
  for (std::size_t i : pool) {
    out.push_back(universal[i]);
    out.back().label = Label::Negative;
  }
  return Corpus(std::move(out), universal.period());
}

}  // namespace newsframe
