#pragma once

#include <charconv>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace newsframe {

// Shortest round-trip decimal form; identical across runs and platforms.
inline std::string format_double(double v) {
  char buf[64];
  auto [ptr, ec] = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, ptr);
}

std::optional<double> parse_double(std::string_view s);
std::optional<long long> parse_int(std::string_view s);

std::string_view trim(std::string_view s);

// Minimal CSV: comma separated, optional double quotes with "" escapes.
std::vector<std::string> split_csv_line(std::string_view line);
std::string csv_escape(std::string_view field);

// Splits on '\n', dropping a trailing '\r' and blank lines. Keeps 1-based line numbers.
struct Line {
  std::size_t number;
  std::string_view text;
};
std::vector<Line> split_lines(std::string_view text);

}  // namespace newsframe
