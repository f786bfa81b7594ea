#pragma once

#include <string>
#include <string_view>

namespace maintviz {

std::string ascii_lower(std::string_view text);
std::string_view trim(std::string_view text);

/// Replaces every invalid UTF-8 sequence with U+FFFD. Valid input is
/// returned unchanged.
std::string sanitize_utf8(std::string_view bytes);

bool is_valid_utf8(std::string_view bytes);

}  // namespace maintviz
