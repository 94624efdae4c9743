#include "paxad/messages.hpp"

#include "paxad/errors.hpp"

namespace paxad {

std::strong_ordering compare_proposal(const ProposalNumber& a,
                                      const ProposalNumber& b) {
  if (auto c = a.round <=> b.round; c != 0) return c;
  return a.proposer.value <=> b.proposer.value;
}

std::string to_string(const ProposalNumber& n) {
  return std::to_string(n.round) + "." + std::to_string(n.proposer.value);
}

ProposalNumber parse_proposal(std::string_view text) {
  const auto dot = text.find('.');
  if (dot == std::string_view::npos) {
    throw Error(Errc::parse_error, "proposal number needs '<round>.<proposer>'");
  }
  const auto proposer = parse_uint(text.substr(dot + 1));
  if (proposer > UINT32_MAX) throw Error(Errc::parse_error, "proposer id out of range");
  return {parse_uint(text.substr(0, dot)), NodeId{static_cast<std::uint32_t>(proposer)}};
}

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

NodeId parse_node(const Record& r, std::string_view key) {
  const auto v = r.get_uint(key);
  if (v > UINT32_MAX) throw Error(Errc::parse_error, "node id out of range");
  return NodeId{static_cast<std::uint32_t>(v)};
}

}  // namespace

std::string_view kind_name(const Packet& packet) {
  return std::visit(overloaded{
                        [](const Prepare&) { return std::string_view{"Prepare"}; },
                        [](const Promise&) { return std::string_view{"Promise"}; },
                        [](const AcceptRequest&) { return std::string_view{"AcceptRequest"}; },
                        [](const Accepted&) { return std::string_view{"Accepted"}; },
                        [](const Heartbeat&) { return std::string_view{"Heartbeat"}; },
                        [](const ClientResponse&) { return std::string_view{"ClientResponse"}; },
                    },
                    packet);
}

bool is_packet_kind(std::string_view kind) {
  return kind == "Prepare" || kind == "Promise" || kind == "AcceptRequest" ||
         kind == "Accepted" || kind == "Heartbeat" || kind == "ClientResponse";
}

Record to_record(const Packet& packet, NodeId from, NodeId to) {
  Record r;
  r.kind = std::string(kind_name(packet));
  r.add("from", from.value).add("to", to.value);
  std::visit(overloaded{
                 [&](const Prepare& p) {
                   r.add("n", to_string(p.n)).add("epoch", p.epoch);
                   r.add("instance", p.request.request_id).add("payload", p.request.payload);
                 },
                 [&](const Promise& p) {
                   r.add("n", to_string(p.n));
                   if (p.last_served) r.add("last", to_string(*p.last_served));
                 },
                 [&](const AcceptRequest& a) {
                   r.add("n", to_string(a.n)).add("epoch", a.epoch);
                   r.add("instance", a.request.request_id).add("payload", a.request.payload);
                 },
                 [&](const Accepted& a) {
                   r.add("n", to_string(a.n)).add("instance", a.instance);
                   r.add("output", a.output).add("state", a.new_state);
                 },
                 [&](const Heartbeat& h) { r.add("hb", h.seq); },
                 [&](const ClientResponse& c) {
                   r.add("instance", c.request_id).add("output", c.output);
                 },
             },
             packet);
  return r;
}

Addressed packet_from_record(const Record& r) {
  const NodeId from = parse_node(r, "from");
  const NodeId to = parse_node(r, "to");
  auto request = [&] { return ClientRequest{r.get_uint("instance"), r.get("payload")}; };

  if (r.kind == "Prepare") {
    return {Prepare{parse_proposal(r.get("n")), r.get_uint("epoch"), request()}, from, to};
  }
  if (r.kind == "Promise") {
    Promise p{parse_proposal(r.get("n")), std::nullopt, from};
    if (const auto* last = r.find("last")) p.last_served = parse_proposal(*last);
    return {p, from, to};
  }
  if (r.kind == "AcceptRequest") {
    return {AcceptRequest{parse_proposal(r.get("n")), r.get_uint("epoch"), request()}, from, to};
  }
  if (r.kind == "Accepted") {
    return {Accepted{parse_proposal(r.get("n")), r.get_uint("instance"), r.get("output"),
                     r.get("state"), from},
            from, to};
  }
  if (r.kind == "Heartbeat") return {Heartbeat{from, r.get_uint("hb")}, from, to};
  if (r.kind == "ClientResponse") {
    return {ClientResponse{r.get_uint("instance"), r.get("output")}, from, to};
  }
  throw Error(Errc::parse_error, "not a packet record: kind=" + r.kind);
}

}  // namespace paxad
