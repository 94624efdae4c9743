#include "paxad/membership.hpp"

#include "paxad/errors.hpp"

namespace paxad {

MembershipView initial_view(std::size_t member_count, SimTime now) {
  MembershipView v;
  for (std::uint32_t i = 0; i < member_count; ++i) {
    v.members.insert(NodeId{i});
    v.alive.insert(NodeId{i});
    v.last_heartbeat[NodeId{i}] = now;
  }
  v.leader = NodeId{0};
  return v;
}

HeartbeatResult record_heartbeat(MembershipView& v, NodeId from, SimTime now) {
  if (!v.members.contains(from)) {
    throw Error(Errc::unknown_node, "heartbeat from undeclared node " + to_string(from));
  }
  auto& last = v.last_heartbeat[from];
  if (now > last) last = now;
  return {v.alive.insert(from).second};
}

Election elect_leader(MembershipView& v) {
  if (v.alive.empty()) throw Error(Errc::empty_group, "no alive member can lead");
  v.leader = *v.alive.begin();
  ++v.epoch;
  return {v.epoch, v.leader};
}

FailureReport detect_failures(MembershipView& v, SimTime now, SimTime suspect_after) {
  FailureReport report;
  for (const auto node : v.alive) {
    const SimTime last = v.last_heartbeat.at(node);
    if (now > last && now - last > suspect_after) report.failed.insert(node);
  }
  for (const auto node : report.failed) v.alive.erase(node);
  if (report.failed.contains(v.leader)) report.election = elect_leader(v);
  return report;
}

}  // namespace paxad
