#pragma once

// Reference implementations used as oracles by the unit and acceptance
// tests. They are written directly from the protocol rules and deliberately
// share no code with the library beyond plain data types.

#include <functional>
#include <string>
#include <utility>
#include <vector>

#include "paxad/learner.hpp"
#include "paxad/scenario.hpp"

namespace paxad {

/// Decision table for one ledger, computed by brute force over groups.
Decision reference_decide(const InstanceLedger& ledger, std::size_t membership,
                          AnomalyPolicy policy);

/// Calls `fn` with every assignment of `nodes` slots to one of `pairs`
/// values or -1 (no tuple received).
void for_each_assignment(std::size_t nodes, std::size_t pairs,
                         const std::function<void(const std::vector<int>&)>& fn);

struct ReplicaStep {
  std::string output;
  std::string state;
  bool operator==(const ReplicaStep&) const = default;
};

/// Runs one honest replica of the scenario's machine over its request trace
/// with a from-scratch interpreter (std::regex full matches, streak counters).
std::vector<ReplicaStep> reference_replica(const Scenario& s);

/// Same, with literal output overrides taking precedence for every request.
std::vector<ReplicaStep> reference_replica(const Scenario& s,
                                           const std::map<std::string, std::string>& overrides);

struct ProposalCheck {
  std::size_t proposals = 0;
  std::vector<std::string> violations;
  bool ok() const { return violations.empty(); }
};

/// Scans an event log. Per proposer, Propose/Repropose rounds must strictly
/// increase, and each new number must exceed every proposal number that
/// proposer emitted or had delivered to it earlier in the log.
ProposalCheck check_proposal_numbers(const std::vector<std::string>& lines);

}  // namespace paxad
