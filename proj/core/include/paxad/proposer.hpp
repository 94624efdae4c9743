#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <vector>

#include "paxad/acceptor.hpp"
#include "paxad/messages.hpp"

namespace paxad {

enum class Phase { preparing, accepting, decided };

struct Proposal {
  ProposalNumber n;
  ClientRequest request;
  Phase phase = Phase::preparing;
  // Distinct promisers and the last-served number each reported.
  std::map<NodeId, std::optional<ProposalNumber>> promises;
  std::set<NodeId> accepted_from;
};

enum class TimerKind { prepare_timeout, accept_timeout };

struct ProposalTimer {
  TimerKind kind;
  std::uint64_t instance = 0;
  ProposalNumber n;
};

struct ProposerNote {
  enum class Kind { propose, repropose, majority_reached, decided };

  Kind kind;
  std::uint64_t instance = 0;
  ProposalNumber n;
  std::optional<ProposalNumber> previous;  // repropose only
  std::size_t promises = 0;
  std::size_t membership = 0;
};

struct Outgoing {
  NodeId to;
  Packet packet;
};

struct ProposerOutput {
  std::vector<Outgoing> sends;
  std::vector<ProposalTimer> timers;
  std::vector<ProposerNote> notes;
  std::optional<Refusal> refusal;
};

/// Leader-side bookkeeping. Every acceptor node owns one; only the elected
/// leader's instance is active. Requests are served one instance at a time in
/// request_id order.
struct ProposerState {
  explicit ProposerState(NodeId node) : id(node) {}

  NodeId id;
  Epoch epoch = 0;
  bool active = false;
  std::uint64_t next_round = 0;
  // Highest proposal number seen in any traffic reaching this node.
  std::optional<ProposalNumber> highest_seen;
  std::set<NodeId> membership;
  std::map<std::uint64_t, Proposal> in_flight;
  std::map<std::uint64_t, ClientRequest> pending;

  const Proposal* current() const;
};

// floor(size / 2) + 1; throws Error(zero_membership) for 0.
std::size_t majority_threshold(std::size_t membership_size);

void observe(ProposerState& s, const ProposalNumber& n);
void activate(ProposerState& s, Epoch epoch, std::set<NodeId> membership);
void deactivate(ProposerState& s);

ProposerOutput on_client_request(ProposerState& s, const ClientRequest& r);
ProposerOutput on_promise(ProposerState& s, const Promise& p);
ProposerOutput on_accepted(ProposerState& s, const Accepted& a);
// `n` identifies the attempt the timer was armed for; stale timers are no-ops.
ProposerOutput on_prepare_timeout(ProposerState& s, std::uint64_t request_id,
                                  const ProposalNumber& n);
ProposerOutput on_accept_timeout(ProposerState& s, std::uint64_t request_id,
                                 const ProposalNumber& n);
ProposerOutput on_membership_change(ProposerState& s, std::set<NodeId> new_membership);

}  // namespace paxad
