#pragma once

#include <filesystem>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include "newsframe/corpus.hpp"
#include "newsframe/error.hpp"

namespace testing {

using namespace newsframe;

inline Article article(std::string id, Date date, std::string title, std::string body = {}) {
  Article a;
  a.id = std::move(id);
  a.published_at = date;
  a.title = std::move(title);
  a.body = std::move(body);
  return a;
}

// One article per body text, all dated `date`, ids "<prefix>0", "<prefix>1", ...
inline Corpus corpus_of(const std::vector<std::string>& bodies, Date date = Date(2014, 1, 1),
                        const std::string& prefix = "d") {
  std::vector<Article> out;
  for (std::size_t i = 0; i < bodies.size(); ++i) out.push_back(article(prefix + std::to_string(i), date, "", bodies[i]));
  return Corpus(std::move(out));
}

// Error code raised by `f`, or nullopt when it returns normally.
template <typename F>
std::optional<Errc> errc_of(F&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.code();
  }
  return std::nullopt;
}

// Fresh empty directory under the system temp dir.
inline std::filesystem::path temp_dir(const std::string& name) {
  auto dir = std::filesystem::temp_directory_path() / ("newsframe-test-" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace testing
