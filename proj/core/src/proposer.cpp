#include "paxad/proposer.hpp"

#include <algorithm>

#include "paxad/errors.hpp"

namespace paxad {

std::size_t majority_threshold(std::size_t membership_size) {
  if (membership_size == 0) {
    throw Error(Errc::zero_membership, "majority of an empty membership");
  }
  return membership_size / 2 + 1;
}

const Proposal* ProposerState::current() const {
  for (const auto& [id, p] : in_flight) {
    if (p.phase != Phase::decided) return &p;
  }
  return nullptr;
}

void observe(ProposerState& s, const ProposalNumber& n) {
  if (!s.highest_seen || n > *s.highest_seen) s.highest_seen = n;
}

void activate(ProposerState& s, Epoch epoch, std::set<NodeId> membership) {
  s.active = true;
  s.epoch = epoch;
  s.membership = std::move(membership);
  s.in_flight.clear();
  s.pending.clear();
  if (s.highest_seen) s.next_round = std::max(s.next_round, s.highest_seen->round + 1);
}

void deactivate(ProposerState& s) {
  s.active = false;
  s.in_flight.clear();
  s.pending.clear();
}

namespace {

std::uint64_t allocate_round(ProposerState& s) {
  std::uint64_t round = s.next_round;
  if (s.highest_seen) round = std::max(round, s.highest_seen->round + 1);
  s.next_round = round + 1;
  return round;
}

void broadcast(const ProposerState& s, const Packet& packet, ProposerOutput& out) {
  for (const auto member : s.membership) out.sends.push_back({member, packet});
}

void send_prepare(const ProposerState& s, const Proposal& p, ProposerOutput& out) {
  broadcast(s, Prepare{p.n, s.epoch, p.request}, out);
  out.timers.push_back({TimerKind::prepare_timeout, p.request.request_id, p.n});
}

void start_next(ProposerState& s, ProposerOutput& out) {
  if (s.current() != nullptr || s.pending.empty()) return;
  auto node = s.pending.extract(s.pending.begin());
  Proposal p;
  p.n = ProposalNumber{allocate_round(s), s.id};
  p.request = std::move(node.mapped());
  const auto instance = p.request.request_id;
  auto& stored = s.in_flight[instance] = std::move(p);
  out.notes.push_back({ProposerNote::Kind::propose, instance, stored.n, std::nullopt, 0,
                       s.membership.size()});
  send_prepare(s, stored, out);
}

void check_promises(ProposerState& s, Proposal& p, ProposerOutput& out) {
  if (p.phase != Phase::preparing || s.membership.empty()) return;
  if (p.promises.size() < majority_threshold(s.membership.size())) return;
  p.phase = Phase::accepting;
  out.notes.push_back({ProposerNote::Kind::majority_reached, p.request.request_id, p.n,
                       std::nullopt, p.promises.size(), s.membership.size()});
  broadcast(s, AcceptRequest{p.n, s.epoch, p.request}, out);
  out.timers.push_back({TimerKind::accept_timeout, p.request.request_id, p.n});
}

bool check_accepted(ProposerState& s, Proposal& p, ProposerOutput& out) {
  if (p.phase != Phase::accepting || s.membership.empty()) return false;
  if (p.accepted_from.size() < majority_threshold(s.membership.size())) return false;
  p.phase = Phase::decided;
  out.notes.push_back({ProposerNote::Kind::decided, p.request.request_id, p.n, std::nullopt,
                       p.promises.size(), s.membership.size()});
  return true;
}

Proposal* find_attempt(ProposerState& s, const ProposalNumber& n, Phase phase) {
  for (auto& [id, p] : s.in_flight) {
    if (p.n == n && p.phase == phase) return &p;
  }
  return nullptr;
}

// Fresh attempt numbered above everything this proposer has observed.
void repropose(ProposerState& s, Proposal& p, ProposerOutput& out) {
  std::uint64_t top = s.next_round == 0 ? 0 : s.next_round - 1;
  for (const auto& [node, last] : p.promises) {
    if (last) top = std::max(top, last->round);
  }
  top = std::max(top, p.n.round);
  if (s.highest_seen) top = std::max(top, s.highest_seen->round);

  const auto previous = p.n;
  p.n = ProposalNumber{top + 1, s.id};
  s.next_round = top + 2;
  p.phase = Phase::preparing;
  p.promises.clear();
  p.accepted_from.clear();
  out.notes.push_back({ProposerNote::Kind::repropose, p.request.request_id, p.n, previous, 0,
                       s.membership.size()});
  send_prepare(s, p, out);
}

}  // namespace

ProposerOutput on_client_request(ProposerState& s, const ClientRequest& r) {
  ProposerOutput out;
  if (!s.active) {
    out.refusal = Refusal::not_leader;
    return out;
  }
  if (s.in_flight.contains(r.request_id) || s.pending.contains(r.request_id)) {
    out.refusal = Refusal::duplicate_request;
    return out;
  }
  s.pending.emplace(r.request_id, r);
  start_next(s, out);
  return out;
}

ProposerOutput on_promise(ProposerState& s, const Promise& p) {
  ProposerOutput out;
  observe(s, p.n);
  if (p.last_served) observe(s, *p.last_served);
  Proposal* prop = s.active ? find_attempt(s, p.n, Phase::preparing) : nullptr;
  if (prop == nullptr || !s.membership.contains(p.from)) {
    out.refusal = Refusal::unknown_proposal;
    return out;
  }
  prop->promises.emplace(p.from, p.last_served);
  check_promises(s, *prop, out);
  return out;
}

ProposerOutput on_accepted(ProposerState& s, const Accepted& a) {
  ProposerOutput out;
  observe(s, a.n);
  Proposal* prop = s.active ? find_attempt(s, a.n, Phase::accepting) : nullptr;
  if (prop == nullptr || !s.membership.contains(a.from)) {
    out.refusal = Refusal::unknown_proposal;
    return out;
  }
  prop->accepted_from.insert(a.from);
  if (check_accepted(s, *prop, out)) start_next(s, out);
  return out;
}

ProposerOutput on_prepare_timeout(ProposerState& s, std::uint64_t request_id,
                                  const ProposalNumber& n) {
  ProposerOutput out;
  auto it = s.in_flight.find(request_id);
  if (!s.active || it == s.in_flight.end() || it->second.n != n ||
      it->second.phase != Phase::preparing) {
    return out;
  }
  repropose(s, it->second, out);
  return out;
}

ProposerOutput on_accept_timeout(ProposerState& s, std::uint64_t request_id,
                                 const ProposalNumber& n) {
  ProposerOutput out;
  auto it = s.in_flight.find(request_id);
  if (!s.active || it == s.in_flight.end() || it->second.n != n ||
      it->second.phase != Phase::accepting) {
    return out;
  }
  repropose(s, it->second, out);
  return out;
}

ProposerOutput on_membership_change(ProposerState& s, std::set<NodeId> new_membership) {
  ProposerOutput out;
  if (new_membership == s.membership) return out;
  s.membership = std::move(new_membership);
  if (!s.active) return out;

  bool advanced = false;
  for (auto& [id, p] : s.in_flight) {
    std::erase_if(p.promises, [&](const auto& kv) { return !s.membership.contains(kv.first); });
    std::erase_if(p.accepted_from, [&](NodeId n) { return !s.membership.contains(n); });
    check_promises(s, p, out);
    advanced = check_accepted(s, p, out) || advanced;
  }
  if (advanced) start_next(s, out);
  return out;
}

}  // namespace paxad
