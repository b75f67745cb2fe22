#pragma once

#include <chrono>
#include <optional>
#include <string>
#include <string_view>

namespace newsframe {

// Calendar date in UTC. Thin wrapper so ordering and ISO formatting live in one place.
class Date {
 public:
  constexpr Date() = default;
  constexpr Date(int y, unsigned m, unsigned d)
      : ymd_{std::chrono::year{y}, std::chrono::month{m}, std::chrono::day{d}} {}

  // Accepts "YYYY-MM-DD", "YYYYMMDD", and full ISO-8601 timestamps (time part ignored).
  static std::optional<Date> parse(std::string_view text);

  int year() const { return static_cast<int>(ymd_.year()); }
  unsigned month() const { return static_cast<unsigned>(ymd_.month()); }
  unsigned day() const { return static_cast<unsigned>(ymd_.day()); }
  bool ok() const { return ymd_.ok(); }

  std::string iso() const;      // YYYY-MM-DD
  std::string compact() const;  // YYYYMMDD

  friend constexpr auto operator<=>(const Date&, const Date&) = default;
  friend constexpr bool operator==(const Date&, const Date&) = default;

 private:
  std::chrono::year_month_day ymd_{std::chrono::year{1970}, std::chrono::January,
                                   std::chrono::day{1}};
};

}  // namespace newsframe
