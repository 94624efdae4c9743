#include "paxad/record.hpp"

#include <charconv>

#include "paxad/errors.hpp"

namespace paxad {

Record& Record::add(std::string key, std::string value) {
  fields.emplace_back(std::move(key), std::move(value));
  return *this;
}

Record& Record::add(std::string key, std::uint64_t value) {
  return add(std::move(key), std::to_string(value));
}

const std::string* Record::find(std::string_view key) const {
  for (const auto& [k, v] : fields) {
    if (k == key) return &v;
  }
  return nullptr;
}

const std::string& Record::get(std::string_view key) const {
  if (const auto* v = find(key)) return *v;
  throw Error(Errc::parse_error,
              "record kind=" + kind + " lacks field '" + std::string(key) + "'");
}

std::uint64_t Record::get_uint(std::string_view key) const {
  return parse_uint(get(key));
}

std::uint64_t parse_uint(std::string_view text) {
  std::uint64_t value = 0;
  const auto* end = text.data() + text.size();
  auto [ptr, ec] = std::from_chars(text.data(), end, value);
  if (text.empty() || ec != std::errc{} || ptr != end) {
    throw Error(Errc::parse_error,
                "expected unsigned integer, got '" + std::string(text) + "'");
  }
  return value;
}

namespace {

constexpr char kHex[] = "0123456789ABCDEF";

bool needs_escape(unsigned char c) {
  return c <= 0x20 || c == '%' || c == '=' || c == 0x7F;
}

int hex_value(char c) {
  if (c >= '0' && c <= '9') return c - '0';
  if (c >= 'A' && c <= 'F') return c - 'A' + 10;
  if (c >= 'a' && c <= 'f') return c - 'a' + 10;
  return -1;
}

}  // namespace

std::string escape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (char ch : text) {
    const auto c = static_cast<unsigned char>(ch);
    if (needs_escape(c)) {
      out += '%';
      out += kHex[c >> 4];
      out += kHex[c & 0xF];
    } else {
      out += ch;
    }
  }
  return out;
}

std::string unescape(std::string_view text) {
  std::string out;
  out.reserve(text.size());
  for (std::size_t i = 0; i < text.size(); ++i) {
    if (text[i] != '%') {
      out += text[i];
      continue;
    }
    if (i + 2 >= text.size()) {
      throw Error(Errc::parse_error, "truncated escape in '" + std::string(text) + "'");
    }
    const int hi = hex_value(text[i + 1]);
    const int lo = hex_value(text[i + 2]);
    if (hi < 0 || lo < 0) {
      throw Error(Errc::parse_error, "bad escape in '" + std::string(text) + "'");
    }
    out += static_cast<char>((hi << 4) | lo);
    i += 2;
  }
  return out;
}

std::string format_record(const Record& record) {
  std::string line = "time=" + std::to_string(record.time) +
                     " seq=" + std::to_string(record.seq) +
                     " kind=" + escape(record.kind);
  for (const auto& [key, value] : record.fields) {
    line += ' ';
    line += key;
    line += '=';
    line += escape(value);
  }
  return line;
}

Record parse_record(std::string_view line) {
  Record record;
  std::size_t index = 0;
  std::size_t pos = 0;
  while (pos < line.size()) {
    std::size_t end = line.find(' ', pos);
    if (end == std::string_view::npos) end = line.size();
    const auto token = line.substr(pos, end - pos);
    pos = end + 1;
    if (token.empty()) continue;
    const auto eq = token.find('=');
    if (eq == std::string_view::npos || eq == 0) {
      throw Error(Errc::parse_error, "malformed token '" + std::string(token) + "'");
    }
    const auto key = token.substr(0, eq);
    auto value = unescape(token.substr(eq + 1));
    switch (index++) {
      case 0:
        if (key != "time") throw Error(Errc::parse_error, "record must start with time=");
        record.time = parse_uint(value);
        break;
      case 1:
        if (key != "seq") throw Error(Errc::parse_error, "second field must be seq=");
        record.seq = parse_uint(value);
        break;
      case 2:
        if (key != "kind") throw Error(Errc::parse_error, "third field must be kind=");
        record.kind = std::move(value);
        break;
      default:
        record.fields.emplace_back(std::string(key), std::move(value));
    }
  }
  if (index < 3) throw Error(Errc::parse_error, "record lacks time/seq/kind");
  return record;
}

}  // namespace paxad
