#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace paxad {

enum class Errc {
  unknown_state,
  bad_regex,
  no_start_state,
  star_not_self_loop,
  duplicate_state,
  zero_membership,
  unknown_node,
  empty_group,
  queue_empty,
  parse_error,
  validation_error,
};

std::string_view to_string(Errc code);

/// Error raised for precondition failures and malformed input.
///
/// `field` names the offending scenario field when one is known
/// (e.g. "faults[0].target"); `line` is 1-based, 0 when unknown.
class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& message, std::string field = {},
        std::size_t line = 0);

  Errc code() const noexcept { return code_; }
  const std::string& field() const noexcept { return field_; }
  std::size_t line() const noexcept { return line_; }

 private:
  Errc code_;
  std::string field_;
  std::size_t line_;
};

}  // namespace paxad
