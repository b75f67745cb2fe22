#pragma once

// Synthetic inputs shared by the unit tests and the acceptance run.

#include <random>
#include <set>
#include <string>
#include <vector>

#include "newsframe/corpus.hpp"
#include "newsframe/datasets.hpp"
#include "newsframe/newscycle.hpp"

namespace synthetic {

// Volume holds steady and jumps by 100 in each legislative year, and MNC
// switches between 0.3 and 0.8 in the same years, so the only large annual
// changes fall on legislative years. Sentiment stays constant.
inline newsframe::AnnualFeatureSeries stepped_topic(const std::string& topic, int first_year, int years,
                                                    const std::set<int>& legislative_offsets) {
  newsframe::AnnualFeatureSeries s;
  s.topic = topic;
  std::uint64_t volume = 10;
  double mnc = 0.3;
  for (int i = 0; i < years; ++i) {
    const bool leg = legislative_offsets.count(i) > 0;
    if (leg) {
      volume += 100;
      mnc = mnc == 0.3 ? 0.8 : 0.3;
    }
    s.years.push_back(first_year + i);
    s.volume.push_back(volume);
    s.mean_sentiment.emplace_back(0.1);
    s.mnc.emplace_back(mnc);
    s.legislative.emplace_back(leg);
  }
  return s;
}


struct Universe {
  newsframe::Corpus corpus;
  std::vector<std::string> members;  // ids whose body contains the marker term
  std::vector<newsframe::SeedLabel> seeds;
};

// `n` articles of filler words; a `share` of them also carry the marker "q"
// (twice, so it survives any min_df). The first `seeds_per_class` members and
// non-members become seeds.
inline Universe marked_universe(std::size_t n, double share, std::size_t seeds_per_class, std::uint64_t seed) {
  static const std::vector<std::string> filler = {
      "senate", "vote",    "budget",   "hearing", "committee", "report",  "agency",   "court",
      "ruling", "policy",  "official", "program", "market",    "school",  "weather",  "traffic",
      "museum", "concert", "season",   "league",  "election",  "mayor",   "council",  "harbor",
      "bridge", "garden",  "library",  "theater", "festival",  "factory", "hospital", "airport"};
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Universe out;
  std::vector<newsframe::Article> arts;
  std::size_t pos_seeds = 0, neg_seeds = 0;
  for (std::size_t i = 0; i < n; ++i) {
    newsframe::Article a;
    a.id = "u" + std::to_string(100000 + i);
    a.published_at = newsframe::Date(2014, 1 + static_cast<unsigned>(i % 12), 1 + static_cast<unsigned>(i % 28));
    std::string body;
    for (int w = 0; w < 8; ++w) body += filler[rng() % filler.size()] + " ";
    const bool member = u(rng) < share;
    if (member) body += "q report q";
    a.body = body;
    if (member) {
      out.members.push_back(a.id);
      if (pos_seeds < seeds_per_class) {
        out.seeds.push_back({a.id, newsframe::Label::Positive});
        ++pos_seeds;
      }
    } else if (neg_seeds < seeds_per_class) {
      out.seeds.push_back({a.id, newsframe::Label::Negative});
      ++neg_seeds;
    }
    arts.push_back(std::move(a));
  }
  out.corpus = newsframe::Corpus(std::move(arts));
  return out;
}

}  // namespace synthetic
