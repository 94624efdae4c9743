#pragma once

#include <cstddef>
#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "paxad/learner.hpp"
#include "paxad/simnet.hpp"
#include "paxad/statemachine.hpp"

namespace paxad {

struct Timing {
  SimTime heartbeat_interval = 5;
  SimTime suspect_after = 15;
  SimTime prepare_timeout = 10;
  SimTime instance_deadline = 50;
  SimTime horizon = 10000;
};

struct RequestSpec {
  SimTime at = 0;
  std::string payload;
};

struct OutputSpec {
  std::string pattern;
  bool is_regex = false;
  std::string output;
};

/// Declarative simulation input. Request ids are positions in `requests`.
struct Scenario {
  std::string name = "unnamed";
  std::size_t acceptors = 0;
  MachineSource machine;
  std::vector<OutputSpec> outputs;
  std::string default_output = "Error";
  std::vector<RequestSpec> requests;
  std::vector<FaultSpec> faults;
  NetConfig net;
  Timing timing;
  AnomalyPolicy anomaly_policy = AnomalyPolicy::strict;
};

// Throws Error(validation_error) naming the offending field, e.g.
// "faults[0].target" or "machine.rules[1].to".
void validate_scenario(const Scenario& s);

StateMachineDef compile_machine(const Scenario& s);
AppModel build_app_model(const Scenario& s);

// Structured text (YAML subset) to Scenario. Throws Error(parse_error) with a
// line number for malformed text, Error(validation_error) for bad values.
Scenario parse_scenario(std::string_view text);
Scenario load_scenario(const std::filesystem::path& path);

// Compiles a standalone machine section (states/start/rules).
StateMachineDef compile_machine_text(std::string_view text);

}  // namespace paxad
