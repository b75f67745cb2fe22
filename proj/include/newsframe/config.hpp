#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include <nlohmann/json.hpp>

#include "newsframe/corpus.hpp"
#include "newsframe/datasets.hpp"
#include "newsframe/framing.hpp"
#include "newsframe/legislation.hpp"
#include "newsframe/newscycle.hpp"

namespace newsframe {

/// Every tunable and path of one CLI run.
///
/// Config file grammar, one setting per line:
///
///     # comment
///     key = value
///
/// Keys are the snake_case names returned by `RunConfig::keys()`; whitespace
/// around keys and values is ignored, an empty value clears an optional path,
/// and unknown or repeated keys are errors. Command-line flags are applied after
/// the file, so they win.
struct RunConfig {
  // keywords
  std::size_t k = 6;
  NgramOrders orders;
  std::size_t min_df = 2;
  bool full_ig = false;
  // semantics
  std::size_t j = 3;
  std::size_t window = 5;
  Weighting weighting = Weighting::Ppmi;
  // framing
  ScoreMode score_mode = ScoreMode::MeanSimilarity;
  ThresholdMode threshold_mode = ThresholdMode::Fixed;
  double threshold = 0.15;
  // legislation
  std::size_t bins = 5;
  double alpha = 1.0;
  PredictorMode predictor_mode = PredictorMode::Anomaly;
  double t = 0.05;
  PairSource pair_source = PairSource::Diffs;
  // datasets
  std::size_t n_trees = 100;
  std::size_t max_depth = 12;
  std::size_t m_cap = 1000;
  bool include_seeds_in_stage2 = false;
  // news cycle
  bool global_vocab = false;
  // fetch
  std::string adapter = "nyt";
  std::string query;
  std::string from;
  std::string to;
  int max_pages = 1;
  double rps = 1.0;
  std::string cache_dir = "cache";

  std::uint64_t seed = 0;
  std::string topic;

  // paths
  std::string t1, t2, corpus, lexicons, laws, series_dir, model, seeds, universal, score_pool, out;

  static const std::vector<std::string>& keys();

  // Throws InvalidArgument for unknown keys or values that do not parse.
  void set(std::string_view key, std::string_view value);
  std::string get(std::string_view key) const;

  // Range checks on numeric parameters.
  void validate() const;

  // All keys except `out`, so reruns into another directory produce identical reports.
  nlohmann::json to_json() const;

  FramingConfig framing() const;
  ModelOptions model_options() const;
  BootstrapParams bootstrap() const;
  CycleOptions cycle() const;
};

// Applies a config file's settings on top of `base`.
RunConfig parse_config(std::string_view text, RunConfig base = {});
RunConfig load_config(const std::filesystem::path& path, RunConfig base = {});

}  // namespace newsframe
