#include "cosearch/timestamp.h"

#include <chrono>
#include <cstdio>

namespace cosearch {

namespace {

bool ParseDigits(std::string_view s, int *value) {
  int v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return false;
    v = v * 10 + (c - '0');
  }
  *value = v;
  return !s.empty();
}

}  // namespace

std::optional<Timestamp> ParseTimestamp(std::string_view text) {
  // 0123456789012345678
  // YYYY-MM-DD HH:MM:SS
  if (text.size() != 19 || text[4] != '-' || text[7] != '-' ||
      text[10] != ' ' || text[13] != ':' || text[16] != ':') {
    return std::nullopt;
  }
  int y, mo, d, h, mi, s;
  if (!ParseDigits(text.substr(0, 4), &y) ||
      !ParseDigits(text.substr(5, 2), &mo) ||
      !ParseDigits(text.substr(8, 2), &d) ||
      !ParseDigits(text.substr(11, 2), &h) ||
      !ParseDigits(text.substr(14, 2), &mi) ||
      !ParseDigits(text.substr(17, 2), &s)) {
    return std::nullopt;
  }
  using namespace std::chrono;
  const year_month_day date{year{y}, month{static_cast<unsigned>(mo)},
                            day{static_cast<unsigned>(d)}};
  if (!date.ok() || h > 23 || mi > 59 || s > 59) return std::nullopt;
  const auto days = sys_days{date}.time_since_epoch().count();
  return static_cast<Timestamp>(days) * 86400 + h * 3600 + mi * 60 + s;
}

std::string FormatTimestamp(Timestamp t) {
  using namespace std::chrono;
  Timestamp day_count = t / 86400;
  Timestamp rem = t % 86400;
  if (rem < 0) {
    rem += 86400;
    --day_count;
  }
  const year_month_day date{sys_days{days{day_count}}};
  char buf[32];
  std::snprintf(buf, sizeof buf, "%04d-%02u-%02u %02d:%02d:%02d",
                static_cast<int>(date.year()),
                static_cast<unsigned>(date.month()),
                static_cast<unsigned>(date.day()), static_cast<int>(rem / 3600),
                static_cast<int>(rem / 60 % 60), static_cast<int>(rem % 60));
  return buf;
}

}  // namespace cosearch
