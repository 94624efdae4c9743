#pragma once

#include <map>
#include <optional>
#include <set>

#include "paxad/types.hpp"

namespace paxad {

/// Group view kept by the failure detector. `members` is the fixed scenario
/// roster; `alive` is the subset currently trusted.
struct MembershipView {
  Epoch epoch = 0;
  std::set<NodeId> members;
  std::set<NodeId> alive;
  NodeId leader;
  std::map<NodeId, SimTime> last_heartbeat;
};

// Every member alive, leader = node 0, epoch 0, heartbeats stamped at `now`.
MembershipView initial_view(std::size_t member_count, SimTime now = 0);

struct HeartbeatResult {
  bool rejoined = false;
};

// Throws Error(unknown_node) for ids outside the roster.
HeartbeatResult record_heartbeat(MembershipView& v, NodeId from, SimTime now);

struct Election {
  Epoch epoch = 0;
  NodeId leader;
};

// Smallest alive id becomes leader; epoch advances. Throws Error(empty_group).
Election elect_leader(MembershipView& v);

struct FailureReport {
  std::set<NodeId> failed;
  std::optional<Election> election;
};

/// Removes every alive node silent for more than `suspect_after`. Elects a new
/// leader when the current one is among them.
FailureReport detect_failures(MembershipView& v, SimTime now, SimTime suspect_after);

}  // namespace paxad
