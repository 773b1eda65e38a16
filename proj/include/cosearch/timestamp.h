#ifndef COSEARCH_TIMESTAMP_H_
#define COSEARCH_TIMESTAMP_H_

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace cosearch {

// Seconds since 1970-01-01 00:00:00, no time zone (log times are naive).
using Timestamp = std::int64_t;

// Parses exactly "YYYY-MM-DD HH:MM:SS"; nullopt on any deviation.
std::optional<Timestamp> ParseTimestamp(std::string_view text);

std::string FormatTimestamp(Timestamp t);

}  // namespace cosearch

#endif  // COSEARCH_TIMESTAMP_H_
