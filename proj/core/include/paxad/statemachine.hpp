#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <memory>
#include <optional>
#include <regex>
#include <string>
#include <string_view>
#include <vector>

#include "paxad/messages.hpp"

namespace paxad {

// Undecoded rule as written in a scenario. A missing threshold means '*'.
struct RuleSource {
  std::string from;
  std::string to;
  std::optional<std::string> input_regex;  // absent: match anything
  std::string output_regex;
  std::optional<std::uint32_t> threshold;
};

struct MachineSource {
  std::vector<std::string> states;
  std::string start;
  std::vector<RuleSource> rules;
};

class StateMachineDef;
StateMachineDef compile(const MachineSource& source);

struct TransitionRule {
  std::string from;
  std::string to;
  std::string input_pattern;
  std::string output_pattern;
  // Number of consecutive matches tolerated before the transition fires;
  // nullopt is the '*' self-description that never escalates.
  std::optional<std::uint32_t> threshold;

  bool is_star() const noexcept { return !threshold.has_value(); }
  bool matches(std::string_view input, std::string_view output) const;

 private:
  friend class StateMachineDef;
  friend StateMachineDef compile(const MachineSource& source);
  std::shared_ptr<const std::regex> input_;
  std::shared_ptr<const std::regex> output_;
};

/// Validated, immutable replica state machine. Regexes are compiled once and
/// shared between copies.
class StateMachineDef {
 public:
  const std::vector<std::string>& states() const noexcept { return states_; }
  const std::string& start() const noexcept { return start_; }
  const std::vector<TransitionRule>& rules() const noexcept { return rules_; }
  bool has_state(std::string_view name) const;

 private:
  friend StateMachineDef compile(const MachineSource& source);
  StateMachineDef() = default;

  std::vector<std::string> states_;
  std::string start_;
  std::vector<TransitionRule> rules_;
};

/// Throws Error with code unknown_state, bad_regex, no_start_state,
/// star_not_self_loop or duplicate_state. `field` names the offending entry
/// relative to the machine section (e.g. "rules[2].to").
StateMachineDef compile(const MachineSource& source);

/// Current state plus consecutive-match counters keyed by rule index. Only
/// non-zero counters are stored, so equal histories compare equal.
struct RuntimeState {
  std::string current;
  std::map<std::size_t, std::uint32_t> counters;

  bool operator==(const RuntimeState&) const = default;
};

RuntimeState initial_state(const StateMachineDef& def);

// First rule (declaration order) leaving `current` whose regexes both fully
// match. This is the active rule for a step.
std::optional<std::size_t> active_rule(const StateMachineDef& def,
                                       std::string_view current,
                                       std::string_view input,
                                       std::string_view output);

RuntimeState apply(const StateMachineDef& def, const RuntimeState& rs,
                   std::string_view input, std::string_view output);

/// The simulated application: payload -> deterministic output.
class AppModel {
 public:
  AppModel() = default;
  explicit AppModel(std::string default_output);

  AppModel& add_literal(std::string payload, std::string output);
  // Throws Error(bad_regex).
  AppModel& add_regex(std::string pattern, std::string output);

  const std::string& default_output() const noexcept { return default_output_; }
  std::size_t size() const noexcept { return entries_.size(); }

  std::string execute(std::string_view payload) const;

  // A copy whose literal overrides take precedence over every entry.
  AppModel with_overrides(const std::map<std::string, std::string>& overrides) const;

 private:
  struct Entry {
    std::string pattern;
    std::shared_ptr<const std::regex> regex;  // null: literal match
    std::string output;
  };
  std::vector<Entry> entries_;
  std::string default_output_;
};

std::string execute(const AppModel& model, const ClientRequest& request);

}  // namespace paxad
