#include <array>
#include <charconv>

#include "maintviz/error.hpp"
#include "maintviz/ingest.hpp"
#include "maintviz/text.hpp"

namespace maintviz {

namespace {

constexpr std::string_view kAlphabet =
    "ABCDEFGHIJKLMNOPQRSTUVWXYZabcdefghijklmnopqrstuvwxyz0123456789+/";

int decode_char(char c) {
  if (c >= 'A' && c <= 'Z') return c - 'A';
  if (c >= 'a' && c <= 'z') return c - 'a' + 26;
  if (c >= '0' && c <= '9') return c - '0' + 52;
  if (c == '+') return 62;
  if (c == '/') return 63;
  return -1;
}

std::vector<std::string_view> split_tabs(std::string_view line) {
  std::vector<std::string_view> fields;
  std::size_t start = 0;
  for (;;) {
    const std::size_t tab = line.find('\t', start);
    if (tab == std::string_view::npos) {
      fields.push_back(line.substr(start));
      return fields;
    }
    fields.push_back(line.substr(start, tab - start));
    start = tab + 1;
  }
}

std::optional<Timestamp> parse_canonical_seconds(std::string_view text) {
  if (text.empty() || (text.size() > 1 && text[0] == '0')) return std::nullopt;
  Timestamp value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size() || value < 0)
    return std::nullopt;
  return value;
}

// Decodes fields without the joint-author check, so bulk parsing can count
// author-less records instead of failing on them.
RawCommit decode_fields(std::string_view line) {
  const auto fields = split_tabs(line);
  if (fields.size() != 6)
    throw Error(ErrorKind::MalformedRecord,
                "expected 6 tab-separated fields, got " +
                    std::to_string(fields.size()));
  RawCommit c;
  c.project = sanitize_utf8(fields[0]);
  if (c.project.empty())
    throw Error(ErrorKind::MalformedRecord, "empty project name");
  c.hash = normalize_hash(fields[1]);
  c.author_name = sanitize_utf8(fields[2]);
  c.author_email = sanitize_utf8(fields[3]);
  const auto ts = parse_canonical_seconds(fields[4]);
  if (!ts)
    throw Error(ErrorKind::MalformedRecord,
                "bad timestamp '" + std::string(fields[4]) + "'");
  c.timestamp = *ts;
  auto message = base64_decode(fields[5]);
  if (!message) throw Error(ErrorKind::MalformedRecord, "bad base64 message");
  c.message = sanitize_utf8(*message);
  return c;
}

}  // namespace

std::string base64_encode(std::string_view bytes) {
  std::string out;
  out.reserve((bytes.size() + 2) / 3 * 4);
  std::size_t i = 0;
  for (; i + 3 <= bytes.size(); i += 3) {
    const unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                       (static_cast<unsigned char>(bytes[i + 1]) << 8) |
                       static_cast<unsigned char>(bytes[i + 2]);
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += kAlphabet[v & 63];
  }
  const std::size_t rest = bytes.size() - i;
  if (rest == 1) {
    const unsigned v = static_cast<unsigned char>(bytes[i]) << 16;
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += "==";
  } else if (rest == 2) {
    const unsigned v = (static_cast<unsigned char>(bytes[i]) << 16) |
                       (static_cast<unsigned char>(bytes[i + 1]) << 8);
    out += kAlphabet[(v >> 18) & 63];
    out += kAlphabet[(v >> 12) & 63];
    out += kAlphabet[(v >> 6) & 63];
    out += '=';
  }
  return out;
}

std::optional<std::string> base64_decode(std::string_view text) {
  if (text.size() % 4 != 0) return std::nullopt;
  std::string out;
  out.reserve(text.size() / 4 * 3);
  for (std::size_t i = 0; i < text.size(); i += 4) {
    const bool last = i + 4 == text.size();
    std::size_t pad = 0;
    if (last && text[i + 3] == '=') pad = text[i + 2] == '=' ? 2 : 1;
    std::array<int, 4> v{};
    for (std::size_t j = 0; j < 4 - pad; ++j) {
      v[j] = decode_char(text[i + j]);
      if (v[j] < 0) return std::nullopt;
    }
    const unsigned bits = (v[0] << 18) | (v[1] << 12) | (v[2] << 6) | v[3];
    out += static_cast<char>((bits >> 16) & 0xFF);
    if (pad == 2) {
      if ((bits & 0xFFFF) != 0) return std::nullopt;
      break;
    }
    out += static_cast<char>((bits >> 8) & 0xFF);
    if (pad == 1) {
      if ((bits & 0xFF) != 0) return std::nullopt;
      break;
    }
    out += static_cast<char>(bits & 0xFF);
  }
  return out;
}

RawCommit parse_export_line(std::string_view line) {
  RawCommit c = decode_fields(line);
  validate_commit(c);
  return c;
}

std::string serialize_export_line(const RawCommit& commit) {
  validate_commit(commit);
  for (std::string_view f :
       {std::string_view(commit.project), std::string_view(commit.author_name),
        std::string_view(commit.author_email)}) {
    if (f.find_first_of("\t\r\n") != std::string_view::npos)
      throw Error(ErrorKind::MalformedRecord,
                  "field contains a tab or line break: '" + std::string(f) +
                      "'");
  }
  std::string line;
  line += commit.project;
  line += '\t';
  line += commit.hash;
  line += '\t';
  line += commit.author_name;
  line += '\t';
  line += commit.author_email;
  line += '\t';
  line += std::to_string(commit.timestamp);
  line += '\t';
  line += base64_encode(commit.message);
  return line;
}

std::vector<RawCommit> parse_export(std::string_view text,
                                    IngestReport* report) {
  std::vector<RawCommit> commits;
  std::size_t line_no = 0;
  std::size_t start = 0;
  while (start < text.size()) {
    std::size_t end = text.find('\n', start);
    if (end == std::string_view::npos) end = text.size();
    const std::string_view line = text.substr(start, end - start);
    start = end + 1;
    ++line_no;
    try {
      RawCommit c = decode_fields(line);
      if (c.author_name.empty() && c.author_email.empty()) {
        if (report) ++report->rejected_without_author;
        continue;
      }
      validate_commit(c);
      commits.push_back(std::move(c));
    } catch (const Error& e) {
      throw Error(ErrorKind::MalformedRecord,
                  "line " + std::to_string(line_no) + ": " + e.what());
    }
  }
  return commits;
}

std::vector<RawCommit> read_export_file(const std::filesystem::path& path,
                                        IngestReport* report) {
  return parse_export(read_file(path), report);
}

}  // namespace maintviz
