#pragma once

#include <filesystem>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <nlohmann/json.hpp>

#include "newsframe/datasets.hpp"
#include "newsframe/framing.hpp"
#include "newsframe/legislation.hpp"

namespace newsframe {

// Pretty JSON with a trailing newline.
std::string dump_json(const nlohmann::json& j);

// sha256 over each named input's sha256, in the order given.
struct InputFile {
  std::string name;
  std::string content;
};
std::string input_digest(const std::vector<InputFile>& inputs);

nlohmann::json period_to_json(const Period& p);

nlohmann::json framing_report_to_json(const FramingReport& r);
std::string keywords_csv(const KeywordSet& ks);          // ngram,ig_bits
std::string coordinates_csv(const std::vector<Point2d>& pts);  // ngram,x,y
std::string distances_csv(const KeywordDistanceReport& d);     // a,b,wmd,similarity

nlohmann::json model_to_json(const LegislationModel& m);
LegislationModel model_from_json(const nlohmann::json& j);

std::string predictions_csv(const std::vector<YearPrediction>& preds);  // topic,year,posterior,label
nlohmann::json loo_report_to_json(const LooReport& r);

nlohmann::json provenance_to_json(const BootstrapProvenance& p);

/// topic,year,count rows. Returns topic -> year -> legislative (count >= 1).
std::map<std::string, std::map<int, bool>> laws_from_csv(std::string_view text);

}  // namespace newsframe
