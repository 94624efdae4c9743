#pragma once

#include "paxad/report.hpp"
#include "paxad/scenario.hpp"
#include "paxad/simnet.hpp"

namespace paxad {

// Endpoint ids beyond the acceptors 0..n-1.
inline NodeId learner_node(std::size_t acceptors) { return NodeId{static_cast<std::uint32_t>(acceptors)}; }
inline NodeId monitor_node(std::size_t acceptors) { return NodeId{static_cast<std::uint32_t>(acceptors + 1)}; }
inline NodeId client_node(std::size_t acceptors) { return NodeId{static_cast<std::uint32_t>(acceptors + 2)}; }

struct RunResult {
  Report report;
  EventLog log;
};

/// Builds every node of the scenario, schedules arrivals and faults, and runs
/// the event loop until quiescence, halt, or the time horizon.
/// Throws Error(validation_error) for an invalid scenario.
RunResult run(const Scenario& scenario);

}  // namespace paxad
