#include "paxad/errors.hpp"

namespace paxad {

std::string_view to_string(Errc code) {
  switch (code) {
    case Errc::unknown_state: return "UnknownState";
    case Errc::bad_regex: return "BadRegex";
    case Errc::no_start_state: return "NoStartState";
    case Errc::star_not_self_loop: return "StarNotSelfLoop";
    case Errc::duplicate_state: return "DuplicateState";
    case Errc::zero_membership: return "ZeroMembership";
    case Errc::unknown_node: return "UnknownNode";
    case Errc::empty_group: return "EmptyGroup";
    case Errc::queue_empty: return "QueueEmpty";
    case Errc::parse_error: return "ParseError";
    case Errc::validation_error: return "ValidationError";
  }
  return "Unknown";
}

namespace {

std::string decorate(Errc code, const std::string& message,
                     const std::string& field, std::size_t line) {
  std::string out{to_string(code)};
  if (line != 0) out += " at line " + std::to_string(line);
  if (!field.empty()) out += " [" + field + "]";
  out += ": ";
  out += message;
  return out;
}

}  // namespace

Error::Error(Errc code, const std::string& message, std::string field,
             std::size_t line)
    : std::runtime_error(decorate(code, message, field, line)),
      code_(code),
      field_(std::move(field)),
      line_(line) {}

}  // namespace paxad
