#include "maintviz/time.hpp"

#include <charconv>
#include <chrono>
#include <cstdio>

namespace maintviz {

namespace {

Timestamp floor_div(Timestamp a, Timestamp b) {
  Timestamp q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

bool read_fixed(std::string_view text, std::size_t pos, std::size_t len,
                int& out) {
  if (pos + len > text.size()) return false;
  for (std::size_t i = pos; i < pos + len; ++i)
    if (text[i] < '0' || text[i] > '9') return false;
  auto [ptr, ec] =
      std::from_chars(text.data() + pos, text.data() + pos + len, out);
  return ec == std::errc{} && ptr == text.data() + pos + len;
}

}  // namespace

std::string format_iso8601(Timestamp ts) {
  using namespace std::chrono;
  const Timestamp days = floor_div(ts, kSecondsPerDay);
  const Timestamp secs = ts - days * kSecondsPerDay;
  const year_month_day ymd{sys_days{std::chrono::days{days}}};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02uT%02d:%02d:%02dZ",
                static_cast<int>(ymd.year()),
                static_cast<unsigned>(ymd.month()),
                static_cast<unsigned>(ymd.day()),
                static_cast<int>(secs / 3600),
                static_cast<int>((secs % 3600) / 60),
                static_cast<int>(secs % 60));
  return buf;
}

std::optional<Timestamp> parse_iso8601(std::string_view text) {
  using namespace std::chrono;
  if (text.size() != 20 || text[4] != '-' || text[7] != '-' ||
      text[10] != 'T' || text[13] != ':' || text[16] != ':' || text[19] != 'Z')
    return std::nullopt;
  int y, mo, d, h, mi, s;
  if (!read_fixed(text, 0, 4, y) || !read_fixed(text, 5, 2, mo) ||
      !read_fixed(text, 8, 2, d) || !read_fixed(text, 11, 2, h) ||
      !read_fixed(text, 14, 2, mi) || !read_fixed(text, 17, 2, s))
    return std::nullopt;
  if (h > 23 || mi > 59 || s > 59) return std::nullopt;
  const year_month_day ymd{year{y}, month{static_cast<unsigned>(mo)},
                           day{static_cast<unsigned>(d)}};
  if (!ymd.ok()) return std::nullopt;
  const Timestamp days = sys_days{ymd}.time_since_epoch().count();
  return days * kSecondsPerDay + h * 3600 + mi * 60 + s;
}

Timestamp floor_to_midnight(Timestamp ts) {
  return floor_div(ts, kSecondsPerDay) * kSecondsPerDay;
}

}  // namespace maintviz
