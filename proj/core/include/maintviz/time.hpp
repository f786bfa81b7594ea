#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

namespace maintviz {

/// Seconds since the Unix epoch, UTC.
using Timestamp = std::int64_t;

inline constexpr Timestamp kSecondsPerDay = 86400;

/// `YYYY-MM-DDTHH:MM:SSZ`
std::string format_iso8601(Timestamp ts);

/// Strict inverse of format_iso8601. Returns nullopt on any deviation from
/// the exact layout or on an out-of-range calendar field.
std::optional<Timestamp> parse_iso8601(std::string_view text);

Timestamp floor_to_midnight(Timestamp ts);

}  // namespace maintviz
