#include "paxad/statemachine.hpp"

#include <algorithm>
#include <set>

#include "paxad/errors.hpp"

namespace paxad {

namespace {

bool full_match(const std::regex& re, std::string_view text) {
  return std::regex_match(text.begin(), text.end(), re);
}

std::shared_ptr<const std::regex> compile_regex(const std::string& pattern,
                                                const std::string& field) {
  try {
    return std::make_shared<const std::regex>(pattern, std::regex::ECMAScript);
  } catch (const std::regex_error& e) {
    throw Error(Errc::bad_regex, "'" + pattern + "': " + e.what(), field);
  }
}

}  // namespace

bool TransitionRule::matches(std::string_view input, std::string_view output) const {
  return full_match(*input_, input) && full_match(*output_, output);
}

bool StateMachineDef::has_state(std::string_view name) const {
  return std::find(states_.begin(), states_.end(), name) != states_.end();
}

StateMachineDef compile(const MachineSource& source) {
  StateMachineDef def;
  std::set<std::string> seen;
  for (std::size_t i = 0; i < source.states.size(); ++i) {
    if (!seen.insert(source.states[i]).second) {
      throw Error(Errc::duplicate_state, "state '" + source.states[i] + "' declared twice",
                  "states[" + std::to_string(i) + "]");
    }
  }
  def.states_ = source.states;

  if (source.start.empty()) throw Error(Errc::no_start_state, "no start state", "start");
  if (!def.has_state(source.start)) {
    throw Error(Errc::no_start_state, "start state '" + source.start + "' is not declared",
                "start");
  }
  def.start_ = source.start;

  for (std::size_t i = 0; i < source.rules.size(); ++i) {
    const auto& src = source.rules[i];
    const std::string prefix = "rules[" + std::to_string(i) + "]";
    if (!def.has_state(src.from)) {
      throw Error(Errc::unknown_state, "undeclared state '" + src.from + "'", prefix + ".from");
    }
    if (!def.has_state(src.to)) {
      throw Error(Errc::unknown_state, "undeclared state '" + src.to + "'", prefix + ".to");
    }
    if (!src.threshold && src.from != src.to) {
      throw Error(Errc::star_not_self_loop,
                  "'*' threshold on " + src.from + " -> " + src.to, prefix + ".threshold");
    }
    TransitionRule rule;
    rule.from = src.from;
    rule.to = src.to;
    rule.input_pattern = src.input_regex.value_or(".*");
    rule.output_pattern = src.output_regex;
    rule.threshold = src.threshold;
    rule.input_ = compile_regex(rule.input_pattern, prefix + ".input");
    rule.output_ = compile_regex(rule.output_pattern, prefix + ".output");
    def.rules_.push_back(std::move(rule));
  }
  return def;
}

RuntimeState initial_state(const StateMachineDef& def) { return {def.start(), {}}; }

std::optional<std::size_t> active_rule(const StateMachineDef& def,
                                       std::string_view current,
                                       std::string_view input,
                                       std::string_view output) {
  const auto& rules = def.rules();
  for (std::size_t i = 0; i < rules.size(); ++i) {
    if (rules[i].from == current && rules[i].matches(input, output)) return i;
  }
  return std::nullopt;
}

RuntimeState apply(const StateMachineDef& def, const RuntimeState& rs,
                   std::string_view input, std::string_view output) {
  const auto active = active_rule(def, rs.current, input, output);
  if (!active) return {rs.current, {}};

  const auto& rule = def.rules()[*active];
  if (rule.is_star()) return rs;

  const auto it = rs.counters.find(*active);
  const std::uint32_t count = it == rs.counters.end() ? 0 : it->second;
  if (count < *rule.threshold) {
    // Any other counter in this state loses its streak.
    return {rs.current, {{*active, count + 1}}};
  }
  return {rule.to, {}};
}

AppModel::AppModel(std::string default_output) : default_output_(std::move(default_output)) {}

AppModel& AppModel::add_literal(std::string payload, std::string output) {
  entries_.push_back({std::move(payload), nullptr, std::move(output)});
  return *this;
}

AppModel& AppModel::add_regex(std::string pattern, std::string output) {
  auto re = compile_regex(pattern, "outputs");
  entries_.push_back({std::move(pattern), std::move(re), std::move(output)});
  return *this;
}

std::string AppModel::execute(std::string_view payload) const {
  for (const auto& e : entries_) {
    if (e.regex ? full_match(*e.regex, payload) : e.pattern == payload) return e.output;
  }
  return default_output_;
}

AppModel AppModel::with_overrides(const std::map<std::string, std::string>& overrides) const {
  AppModel out(default_output_);
  for (const auto& [payload, output] : overrides) out.add_literal(payload, output);
  out.entries_.insert(out.entries_.end(), entries_.begin(), entries_.end());
  return out;
}

std::string execute(const AppModel& model, const ClientRequest& request) {
  return model.execute(request.payload);
}

}  // namespace paxad
