#include "maintviz/csv.hpp"

#include "maintviz/error.hpp"

namespace maintviz::csv {

void append_row(std::string& out,
                const std::vector<std::string_view>& fields) {
  for (std::size_t i = 0; i < fields.size(); ++i) {
    if (i > 0) out += ',';
    const std::string_view f = fields[i];
    if (f.find_first_of(",\"\r\n") == std::string_view::npos) {
      out += f;
      continue;
    }
    out += '"';
    for (char c : f) {
      if (c == '"') out += '"';
      out += c;
    }
    out += '"';
  }
  out += '\n';
}

std::optional<std::vector<std::string>> Reader::next() {
  if (pos_ >= text_.size()) return std::nullopt;
  ++record_;
  const auto fail = [&](const std::string& what) {
    throw Error(ErrorKind::MalformedRecord,
                "row " + std::to_string(record_) + ": " + what);
  };

  std::vector<std::string> fields;
  std::string field;
  for (;;) {
    if (pos_ < text_.size() && text_[pos_] == '"') {
      ++pos_;
      for (;;) {
        if (pos_ >= text_.size()) fail("unterminated quoted field");
        const char c = text_[pos_++];
        if (c != '"') {
          field += c;
        } else if (pos_ < text_.size() && text_[pos_] == '"') {
          field += '"';
          ++pos_;
        } else {
          break;
        }
      }
    } else {
      while (pos_ < text_.size()) {
        const char c = text_[pos_];
        if (c == ',' || c == '\n' || c == '\r') break;
        if (c == '"') fail("unexpected quote in unquoted field");
        field += c;
        ++pos_;
      }
    }

    fields.push_back(std::move(field));
    field.clear();
    if (pos_ >= text_.size()) return fields;
    const char c = text_[pos_];
    if (c == ',') {
      ++pos_;
      continue;
    }
    if (c == '\n') {
      ++pos_;
      return fields;
    }
    if (c == '\r' && pos_ + 1 < text_.size() && text_[pos_ + 1] == '\n') {
      pos_ += 2;
      return fields;
    }
    fail("unexpected character after field");
  }
}

}  // namespace maintviz::csv
