#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace maintviz::csv {

/// Appends one RFC-4180 record terminated by LF. A field is quoted only
/// when it contains a comma, a double quote, CR or LF.
void append_row(std::string& out, const std::vector<std::string_view>& fields);

/// Pull parser over an in-memory CSV document. Accepts LF and CRLF record
/// terminators; quoted fields keep embedded line breaks byte-exact.
class Reader {
 public:
  explicit Reader(std::string_view text) : text_(text) {}

  /// Next record, or nullopt at end of input. Throws MalformedRecord on
  /// an unterminated quoted field or a stray quote.
  std::optional<std::vector<std::string>> next();

  /// 1-based number of the record last returned by next().
  std::size_t record_number() const { return record_; }

 private:
  std::string_view text_;
  std::size_t pos_ = 0;
  std::size_t record_ = 0;
};

}  // namespace maintviz::csv
