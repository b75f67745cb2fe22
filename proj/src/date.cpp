#include "newsframe/date.hpp"

#include <cctype>
#include <charconv>
#include <cstdio>

namespace newsframe {

namespace {

std::optional<int> digits(std::string_view s) {
  int value = 0;
  for (char c : s) {
    if (!std::isdigit(static_cast<unsigned char>(c))) return std::nullopt;
  }
  auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), value);
  if (ec != std::errc{} || ptr != s.data() + s.size()) return std::nullopt;
  return value;
}

}  // namespace

std::optional<Date> Date::parse(std::string_view text) {
  std::optional<int> y, m, d;
  if (text.size() >= 10 && text[4] == '-' && text[7] == '-') {
    y = digits(text.substr(0, 4));
    m = digits(text.substr(5, 2));
    d = digits(text.substr(8, 2));
    if (text.size() > 10 && text[10] != 'T' && text[10] != ' ') return std::nullopt;
  } else if (text.size() == 8) {
    y = digits(text.substr(0, 4));
    m = digits(text.substr(4, 2));
    d = digits(text.substr(6, 2));
  }
  if (!y || !m || !d || *m < 1 || *d < 1) return std::nullopt;
  Date out(*y, static_cast<unsigned>(*m), static_cast<unsigned>(*d));
  if (!out.ok()) return std::nullopt;
  return out;
}

std::string Date::iso() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u", year(), month(), day());
  return buf;
}

std::string Date::compact() const {
  char buf[16];
  std::snprintf(buf, sizeof buf, "%04d%02u%02u", year(), month(), day());
  return buf;
}

}  // namespace newsframe
