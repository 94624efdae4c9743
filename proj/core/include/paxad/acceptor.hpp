#pragma once

#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

#include "paxad/messages.hpp"
#include "paxad/statemachine.hpp"

namespace paxad {

// Why a node stayed silent. Refusals are not errors on the wire: the
// protocol has no negative acknowledgement, so the sender only sees silence.
enum class Refusal {
  not_higher,         // prepare number does not exceed the highest promise
  stale_epoch,        // packet stamped by a deposed proposer
  stale_accept,       // accept request below the highest promise
  out_of_order,       // earlier instances not executed yet
  duplicate_request,  // proposer already holds this request
  unknown_proposal,   // promise/accepted for no in-flight proposal
  not_leader,         // proposer role inactive on this node
};

std::string_view to_string(Refusal r);

template <class T>
class Outcome {
 public:
  Outcome(T value) : value_(std::move(value)) {}  // NOLINT: implicit by design of call sites
  Outcome(Refusal r) : value_(r) {}                 // NOLINT

  bool ok() const noexcept { return std::holds_alternative<T>(value_); }
  explicit operator bool() const noexcept { return ok(); }
  const T& value() const { return std::get<T>(value_); }
  const T& operator*() const { return value(); }
  const T* operator->() const { return &value(); }
  Refusal refusal() const { return std::get<Refusal>(value_); }

 private:
  std::variant<T, Refusal> value_;
};

struct ExecutedEntry {
  std::string output;
  std::string state;

  bool operator==(const ExecutedEntry&) const = default;
};

struct AcceptorState {
  AcceptorState(NodeId id, const StateMachineDef& def, AppModel model);

  NodeId id;
  std::optional<ProposalNumber> highest_promised;
  std::optional<ProposalNumber> last_served;
  Epoch known_epoch = 0;
  RuntimeState machine;
  AppModel model;
  // Installed by a Compromise fault; protocol behaviour stays honest.
  std::optional<AppModel> override_model;
  // One entry per executed request, indexed by request_id.
  std::vector<ExecutedEntry> executed;

  bool compromised() const noexcept { return override_model.has_value(); }
};

void compromise(AcceptorState& s, const std::map<std::string, std::string>& overrides);

Outcome<Promise> on_prepare(AcceptorState& s, const Prepare& p);

/// Executes the request (or replays the cached result of an already executed
/// instance) and returns the tuple for proposer and learner.
Outcome<Accepted> on_accept_request(AcceptorState& s, const StateMachineDef& def,
                                    const AcceptRequest& a);

}  // namespace paxad
