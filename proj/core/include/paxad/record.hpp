#pragma once

#include <cstdint>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "paxad/types.hpp"

namespace paxad {

/// One line of the event log: `time=<t> seq=<s> kind=<K> key=value ...`.
///
/// Field order is preserved so that formatting is byte-stable. Values are
/// percent-escaped on output (space, '%', '=', and control bytes), which
/// keeps every record on a single line and makes parsing unambiguous.
struct Record {
  SimTime time = 0;
  std::uint64_t seq = 0;
  std::string kind;
  std::vector<std::pair<std::string, std::string>> fields;

  Record& add(std::string key, std::string value);
  Record& add(std::string key, std::uint64_t value);

  const std::string* find(std::string_view key) const;
  // Throws Error(parse_error) when absent.
  const std::string& get(std::string_view key) const;
  std::uint64_t get_uint(std::string_view key) const;

  bool operator==(const Record&) const = default;
};

std::string escape(std::string_view text);
std::string unescape(std::string_view text);

std::string format_record(const Record& record);
Record parse_record(std::string_view line);

std::uint64_t parse_uint(std::string_view text);

}  // namespace paxad
