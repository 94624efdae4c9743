#include "paxad/acceptor.hpp"

namespace paxad {

std::string_view to_string(Refusal r) {
  switch (r) {
    case Refusal::not_higher: return "not_higher";
    case Refusal::stale_epoch: return "stale_epoch";
    case Refusal::stale_accept: return "stale_accept";
    case Refusal::out_of_order: return "out_of_order";
    case Refusal::duplicate_request: return "duplicate_request";
    case Refusal::unknown_proposal: return "unknown_proposal";
    case Refusal::not_leader: return "not_leader";
  }
  return "unknown";
}

AcceptorState::AcceptorState(NodeId node, const StateMachineDef& def, AppModel app)
    : id(node), machine(initial_state(def)), model(std::move(app)) {}

void compromise(AcceptorState& s, const std::map<std::string, std::string>& overrides) {
  s.override_model = s.model.with_overrides(overrides);
}

namespace {

bool stale_epoch(AcceptorState& s, Epoch epoch) {
  if (epoch < s.known_epoch) return true;
  s.known_epoch = epoch;
  return false;
}

}  // namespace

Outcome<Promise> on_prepare(AcceptorState& s, const Prepare& p) {
  if (stale_epoch(s, p.epoch)) return Refusal::stale_epoch;
  if (s.highest_promised && p.n <= *s.highest_promised) return Refusal::not_higher;
  s.highest_promised = p.n;
  return Promise{p.n, s.last_served, s.id};
}

Outcome<Accepted> on_accept_request(AcceptorState& s, const StateMachineDef& def,
                                    const AcceptRequest& a) {
  if (stale_epoch(s, a.epoch)) return Refusal::stale_epoch;
  if (s.highest_promised && a.n < *s.highest_promised) return Refusal::stale_accept;

  const auto instance = a.request.request_id;
  if (instance > s.executed.size()) return Refusal::out_of_order;

  s.highest_promised = a.n;
  s.last_served = a.n;
  if (instance < s.executed.size()) {
    const auto& cached = s.executed[instance];
    return Accepted{a.n, instance, cached.output, cached.state, s.id};
  }

  const AppModel& app = s.override_model ? *s.override_model : s.model;
  auto output = execute(app, a.request);
  s.machine = apply(def, s.machine, a.request.payload, output);
  s.executed.push_back({output, s.machine.current});
  return Accepted{a.n, instance, std::move(output), s.machine.current, s.id};
}

}  // namespace paxad
