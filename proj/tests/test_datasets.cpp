#include <doctest.h>

#include <algorithm>
#include <random>
#include <set>

#include "newsframe/datasets.hpp"
#include "support.hpp"
#include "synthetic.hpp"

using namespace newsframe;
using testing::article;
using testing::corpus_of;
using testing::errc_of;

namespace {

constexpr auto Pos = Label::Positive;
constexpr auto Neg = Label::Negative;

std::vector<NGram> vocab_of(std::size_t n) {
  std::vector<NGram> v;
  for (std::size_t i = 0; i < n; ++i) v.push_back(NGram{"t" + std::to_string(i)});
  return v;
}

double training_accuracy(const ForestModel& f, const TfMatrix& tf, const std::vector<Label>& labels) {
  std::size_t ok = 0;
  for (std::size_t r = 0; r < tf.num_rows(); ++r) ok += (score_row(f, tf, r) > 0.5) == (labels[r] == Pos);
  return static_cast<double>(ok) / static_cast<double>(tf.num_rows());
}

// Leaf reached by a dense row, walked independently of the library's scorer.
const TreeNode& leaf_of(const DecisionTree& t, const std::vector<std::uint32_t>& row) {
  std::size_t i = 0;
  while (!t.nodes[i].is_leaf())
    i = static_cast<std::size_t>(row[static_cast<std::size_t>(t.nodes[i].feature)] <= t.nodes[i].threshold
                                     ? t.nodes[i].left
                                     : t.nodes[i].right);
  return t.nodes[i];
}

std::set<std::string> ids_of(const Corpus& c) {
  std::set<std::string> out;
  for (const auto& a : c.articles()) out.insert(a.id);
  return out;
}

}  // namespace

TEST_CASE("train_forest") {
  SUBCASE("separable by one term") {
    const Corpus c = corpus_of({"snowden leak senate", "snowden asylum vote", "snowden russia court",
                                "budget vote senate", "court ruling budget", "asylum hearing vote"});
    const TfMatrix tf = build_tf_matrix(c, NgramOrders{1}, 1);
    const std::vector<Label> labels{Pos, Pos, Pos, Neg, Neg, Neg};
    ForestParams p;
    p.seed = 3;
    const ForestModel f = train_forest(tf, labels, p);
    CHECK(f.trees.size() == 100);
    CHECK(f.vocab_size == tf.num_cols());
    CHECK(training_accuracy(f, tf, labels) == 1.0);
    CHECK(score_row(f, tf, 0) > 0.5);
    for (const auto& t : f.trees) CHECK(t.depth() <= p.max_depth);
  }

  SUBCASE("XOR needs depth two") {
    const TfMatrix tf = TfMatrix::from_dense(vocab_of(2), {{0, 0}, {0, 1}, {1, 0}, {1, 1}});
    const std::vector<Label> labels{Neg, Pos, Pos, Neg};
    ForestParams p;
    p.n_trees = 50;
    p.seed = 9;
    const ForestModel f = train_forest(tf, labels, p);
    CHECK(training_accuracy(f, tf, labels) == 1.0);
    std::size_t deep = 0;
    for (const auto& t : f.trees) deep += t.depth() >= 2;
    CHECK(deep > 0);
  }

  SUBCASE("errors") {
    const TfMatrix tf = TfMatrix::from_dense(vocab_of(2), {{0, 1}, {1, 0}});
    CHECK(errc_of([&] { train_forest(tf, std::vector{Pos, Pos}, ForestParams{}); }) == Errc::SingleClass);
    CHECK(errc_of([&] { train_forest(tf, std::vector{Pos}, ForestParams{}); }) == Errc::LengthMismatch);
    const std::vector<std::size_t> bad_rows{0, 5};
    CHECK(errc_of([&] { train_forest(tf, bad_rows, std::vector{Pos, Neg}, ForestParams{}); }) ==
          Errc::IndexOutOfRange);
    ForestParams zero;
    zero.n_trees = 0;
    CHECK(errc_of([&] { train_forest(tf, std::vector{Pos, Neg}, zero); }) == Errc::InvalidArgument);
  }
}

TEST_CASE("score_article") {
  std::mt19937_64 rng(21);
  std::vector<std::vector<std::uint32_t>> dense(30, std::vector<std::uint32_t>(10));
  std::vector<Label> labels;
  for (auto& r : dense) {
    for (auto& c : r) c = static_cast<std::uint32_t>(rng() % 3);
    labels.push_back(r[0] + r[3] > 2 ? Pos : Neg);
  }
  const TfMatrix tf = TfMatrix::from_dense(vocab_of(10), dense);
  ForestParams p;
  p.seed = 4;
  p.n_trees = 30;
  const ForestModel f = train_forest(tf, labels, p);

  for (int t = 0; t < 100; ++t) {
    std::vector<std::uint32_t> row(10);
    for (auto& c : row) c = static_cast<std::uint32_t>(rng() % 5);
    const double s = score_article(f, row);
    CHECK(s >= 0.0);
    CHECK(s <= 1.0);
    // Mean of per-tree leaf fractions, recomputed by walking each tree.
    double expect = 0.0;
    for (const auto& tree : f.trees) {
      const auto& leaf = leaf_of(tree, row);
      const double total = leaf.positive + leaf.negative;
      expect += total > 0 ? leaf.positive / total : 0.5;
    }
    CHECK(s == doctest::Approx(expect / 30.0).epsilon(1e-12));
  }
  const std::vector<std::uint32_t> zeros(10, 0);
  const double z = score_article(f, zeros);
  CHECK(z >= 0.0);
  CHECK(z <= 1.0);
  CHECK(errc_of([&] { score_article(f, std::vector<std::uint32_t>(9)); }) == Errc::DimensionMismatch);

  SUBCASE("one tree scores its leaf fraction exactly") {
    p.n_trees = 1;
    const ForestModel one = train_forest(tf, labels, p);
    for (std::size_t r = 0; r < tf.num_rows(); ++r) {
      const auto& leaf = leaf_of(one.trees[0], dense[r]);
      CHECK(score_row(one, tf, r) == leaf.positive / (leaf.positive + leaf.negative));
    }
  }

  SUBCASE("determinism") {
    const ForestModel again = train_forest(tf, labels, p);
    for (std::size_t r = 0; r < tf.num_rows(); ++r) CHECK(score_row(again, tf, r) == score_row(f, tf, r));
    p.seed = 5;
    const ForestModel other = train_forest(tf, labels, p);
    bool differs = false;
    for (std::size_t r = 0; r < tf.num_rows(); ++r) differs = differs || score_row(other, tf, r) != score_row(f, tf, r);
    CHECK(differs);
  }
}

TEST_CASE("mine_hard_negatives") {
  // One hand-built tree: feature 0 counts 0..3 reach leaves with positive
  // fractions 0.1, 0.4, 0.45, 0.7.
  ForestModel f;
  f.vocab_size = 1;
  DecisionTree t;
  auto leaf = [](double pos) {
    TreeNode n;
    n.positive = pos;
    n.negative = 1.0 - pos;
    return n;
  };
  auto split = [](double thr, int l, int r) {
    TreeNode n;
    n.feature = 0;
    n.threshold = thr;
    n.left = l;
    n.right = r;
    return n;
  };
  t.nodes = {split(0.5, 1, 2), leaf(0.1), split(1.5, 3, 4), leaf(0.4), split(2.5, 5, 6), leaf(0.45), leaf(0.7)};
  f.trees = {t};

  const Corpus unl({article("c", Date(2014, 1, 1), "x"), article("a", Date(2014, 1, 2), "x"),
                    article("b", Date(2014, 1, 3), "x"), article("d", Date(2014, 1, 4), "x")});
  const TfMatrix tf = TfMatrix::from_dense({NGram{"x"}}, {{0}, {1}, {2}, {3}}, {"c", "a", "b", "d"});
  CHECK(score_row(f, tf, 2) == 0.45);

  const Corpus two = mine_hard_negatives(f, unl, tf, 2);
  CHECK(ids_of(two) == std::set<std::string>{"a", "b"});
  for (const auto& a : two.articles()) CHECK(a.label == Label::Negative);
  CHECK(ids_of(mine_hard_negatives(f, unl, tf, 10)) == std::set<std::string>{"a", "b", "c"});

  // Ties break by id.
  const TfMatrix tie = TfMatrix::from_dense({NGram{"x"}}, {{1}, {1}, {1}, {3}}, {"c", "a", "b", "d"});
  CHECK(ids_of(mine_hard_negatives(f, unl, tie, 2)) == std::set<std::string>{"a", "b"});

  const TfMatrix hot = TfMatrix::from_dense({NGram{"x"}}, {{3}, {3}, {3}, {3}}, {"c", "a", "b", "d"});
  CHECK(mine_hard_negatives(f, unl, hot, 2).empty());
}

TEST_CASE("seeds_from_csv") {
  const auto s = seeds_from_csv("article_id,label\nx1,Positive\nx2,negative\n");
  REQUIRE(s.size() == 2);
  CHECK(s[0].article_id == "x1");
  CHECK(s[0].label == Pos);
  CHECK(s[1].label == Neg);
  CHECK(seeds_from_csv("y,Positive\n").size() == 1);

  auto line_of = [](std::string_view text) -> std::optional<std::size_t> {
    try {
      seeds_from_csv(text);
    } catch (const ParseError& e) {
      return e.line();
    }
    return std::nullopt;
  };
  CHECK(line_of("article_id,label\nx1,Positive\nx2\n") == 3u);
  CHECK(line_of("x1,Maybe\n") == 1u);
  CHECK(line_of("x1,Unlabeled\n") == 1u);
}

TEST_CASE("bootstrap_dataset") {
  const auto u = synthetic::marked_universe(300, 0.4, 25, 12);
  BootstrapParams p;
  p.forest.seed = 7;
  p.forest.n_trees = 50;
  const TopicDataset ds = bootstrap_dataset(u.seeds, u.corpus, p);

  const std::set<std::string> members(u.members.begin(), u.members.end());
  CHECK(ids_of(ds.positives) == members);
  CHECK(ds.positives.size() + ds.negatives.size() == u.corpus.size());
  for (const auto& a : ds.positives.articles()) CHECK(a.label == Pos);
  for (const auto& a : ds.negatives.articles()) CHECK(a.label == Neg);

  const auto& pr = ds.provenance;
  CHECK(pr.universal_size == 300);
  CHECK(pr.seed_positives == 25);
  CHECK(pr.seed_negatives == 25);
  CHECK(pr.k_positive + pr.k_negative == 250);
  CHECK(pr.m_positive == std::min<std::size_t>(1000, pr.k_positive));
  CHECK(pr.m_negative == std::min<std::size_t>(1000, pr.k_negative));
  CHECK(pr.stage2_training_size == pr.m_positive + pr.m_negative);
  CHECK(pr.final_positives == members.size());
  CHECK(pr.stage1_positives == ds.stage1_positive_ids.size());

  SUBCASE("m is capped") {
    p.m_cap = 40;
    const TopicDataset capped = bootstrap_dataset(u.seeds, u.corpus, p);
    CHECK(capped.provenance.k_positive > 40);
    CHECK(capped.provenance.m_positive == 40);
    CHECK(capped.provenance.m_negative == 40);
    CHECK(capped.provenance.stage2_training_size == 80);
  }

  SUBCASE("seeds can join stage 2") {
    p.include_seeds_in_stage2 = true;
    const TopicDataset with = bootstrap_dataset(u.seeds, u.corpus, p);
    CHECK(with.provenance.stage2_training_size == pr.stage2_training_size + 50);
    CHECK(with.provenance.include_seeds_in_stage2);
  }

  SUBCASE("deterministic") {
    const TopicDataset again = bootstrap_dataset(u.seeds, u.corpus, p);
    CHECK(ids_of(again.positives) == ids_of(ds.positives));
    CHECK(again.stage1_positive_ids == ds.stage1_positive_ids);
  }

  SUBCASE("errors") {
    std::vector<SeedLabel> one_class;
    for (const auto& s : u.seeds)
      if (s.label == Pos) one_class.push_back(s);
    CHECK(errc_of([&] { bootstrap_dataset(one_class, u.corpus, p); }) == Errc::SingleClass);
    auto missing = u.seeds;
    missing.push_back({"nope", Neg});
    CHECK(errc_of([&] { bootstrap_dataset(missing, u.corpus, p); }) == Errc::InvalidArgument);
    auto dup = u.seeds;
    dup.push_back(u.seeds.front());
    CHECK(errc_of([&] { bootstrap_dataset(dup, u.corpus, p); }) == Errc::InvalidArgument);
    CHECK(errc_of([&] { bootstrap_dataset(u.seeds, Corpus{}, p); }) == Errc::EmptyCorpus);
  }
}

TEST_CASE("quiescent_negatives") {
  AnnualFeatureSeries s;
  s.years = {2010, 2011, 2012};
  s.volume = {5, 5, 100};
  s.mean_sentiment.assign(3, 0.0);
  s.mnc.assign(3, std::nullopt);
  s.legislative.assign(3, std::nullopt);

  std::vector<Article> arts;
  for (int y = 2010; y <= 2012; ++y)
    for (int i = 0; i < (y == 2012 ? 20 : 5); ++i)
      arts.push_back(article(std::to_string(y) + "-" + std::to_string(i), Date(y, 1 + static_cast<unsigned>(i % 12), 1), "x"));
  const Corpus universal(arts);

  const Corpus three = quiescent_negatives(s, universal, 3, 1);
  CHECK(three.size() == 3);
  for (const auto& a : three.articles()) {
    CHECK(a.published_at.year() < 2012);
    CHECK(a.label == Label::Negative);
  }
  CHECK(ids_of(quiescent_negatives(s, universal, 3, 1)) == ids_of(three));
  CHECK(quiescent_negatives(s, universal, 100, 1).size() == 10);

  s.volume = {7, 7, 7};
  CHECK(errc_of([&] { quiescent_negatives(s, universal, 3, 1); }) == Errc::NoQuiescentYears);
}
