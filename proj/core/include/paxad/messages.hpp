#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <variant>

#include "paxad/record.hpp"
#include "paxad/types.hpp"

namespace paxad {

/// Proposal identity. Ordered lexicographically on (round, proposer), so two
/// proposers can never mint the same number.
struct ProposalNumber {
  std::uint64_t round = 0;
  NodeId proposer;

  constexpr auto operator<=>(const ProposalNumber&) const = default;
};

std::strong_ordering compare_proposal(const ProposalNumber& a,
                                      const ProposalNumber& b);

// "<round>.<proposer>"
std::string to_string(const ProposalNumber& n);
ProposalNumber parse_proposal(std::string_view text);

struct ClientRequest {
  std::uint64_t request_id = 0;
  std::string payload;

  bool operator==(const ClientRequest&) const = default;
};

struct Prepare {
  ProposalNumber n;
  Epoch epoch = 0;
  ClientRequest request;

  bool operator==(const Prepare&) const = default;
};

struct Promise {
  ProposalNumber n;
  std::optional<ProposalNumber> last_served;
  NodeId from;

  bool operator==(const Promise&) const = default;
};

struct AcceptRequest {
  ProposalNumber n;
  Epoch epoch = 0;
  ClientRequest request;

  bool operator==(const AcceptRequest&) const = default;
};

/// The replica tuple [N, output, new state], tagged with its instance.
struct Accepted {
  ProposalNumber n;
  std::uint64_t instance = 0;
  std::string output;
  std::string new_state;
  NodeId from;

  bool operator==(const Accepted&) const = default;
};

struct Heartbeat {
  NodeId from;
  std::uint64_t seq = 0;

  bool operator==(const Heartbeat&) const = default;
};

struct ClientResponse {
  std::uint64_t request_id = 0;
  std::string output;

  bool operator==(const ClientResponse&) const = default;
};

using Packet =
    std::variant<Prepare, Promise, AcceptRequest, Accepted, Heartbeat, ClientResponse>;

std::string_view kind_name(const Packet& packet);
bool is_packet_kind(std::string_view kind);

struct Addressed {
  Packet packet;
  NodeId from;
  NodeId to;

  bool operator==(const Addressed&) const = default;
};

// Event-log form of a packet. time/seq are left for the caller to fill.
Record to_record(const Packet& packet, NodeId from, NodeId to);
Addressed packet_from_record(const Record& record);

}  // namespace paxad
