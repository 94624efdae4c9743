#pragma once

#include <cstddef>
#include <cstdint>
#include <map>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <variant>

#include "paxad/messages.hpp"

namespace paxad {

struct ReplicaTuple {
  ProposalNumber n;
  std::string output;
  std::string new_state;

  bool operator==(const ReplicaTuple&) const = default;
};

struct ConsensusVerdict {
  std::string output;
  std::string state;

  bool operator==(const ConsensusVerdict&) const = default;
};

struct AnomalyVerdict {
  std::set<NodeId> agreeing;
  std::set<NodeId> dissenting;
  std::map<std::string, std::size_t> states_seen;
  // The (output, state) pair of the agreeing group.
  std::string majority_output;
  std::string majority_state;
  // True when several groups shared the largest size and the tie-break
  // (smallest state name, then smallest output) picked the agreeing group.
  bool tie_broken = false;

  bool operator==(const AnomalyVerdict&) const = default;
};

struct InconclusiveVerdict {
  std::size_t received = 0;
  std::size_t needed = 0;

  bool operator==(const InconclusiveVerdict&) const = default;
};

using Verdict = std::variant<ConsensusVerdict, AnomalyVerdict, InconclusiveVerdict>;

std::string_view verdict_name(const Verdict& v);
// Consensus and Anomaly close an instance; Inconclusive does not.
bool is_final(const Verdict& v);

enum class AnomalyPolicy { strict, majority };

std::string_view to_string(AnomalyPolicy p);
std::optional<AnomalyPolicy> parse_policy(std::string_view text);

struct InstanceLedger {
  std::map<NodeId, ReplicaTuple> tuples;
  std::optional<Verdict> verdict;  // set once final, never changed
};

/// Records `a` unless the instance is closed. A tuple from the same node is
/// only replaced by one with a strictly higher N. Returns whether the ledger
/// changed.
bool on_accepted(InstanceLedger& ledger, const Accepted& a);

// Tuples carrying the highest N present in the ledger.
std::map<NodeId, ReplicaTuple> highest_tuples(const InstanceLedger& ledger);

struct Decision {
  Verdict verdict;
  // Majority policy only: divergence that did not block consensus.
  std::optional<AnomalyVerdict> minority_report;
};

/// Pure decision over the highest-N tuples. Any divergence is an anomaly
/// under the strict policy; agreement needs majority_threshold(membership).
Decision decide(const InstanceLedger& ledger, std::size_t membership_size,
                bool deadline_reached, AnomalyPolicy policy = AnomalyPolicy::strict);

}  // namespace paxad
