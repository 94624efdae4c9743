#include "paxad/learner.hpp"

#include <algorithm>
#include <vector>

#include "paxad/proposer.hpp"

namespace paxad {

std::string_view verdict_name(const Verdict& v) {
  switch (v.index()) {
    case 0: return "Consensus";
    case 1: return "Anomaly";
    default: return "Inconclusive";
  }
}

bool is_final(const Verdict& v) { return !std::holds_alternative<InconclusiveVerdict>(v); }

std::string_view to_string(AnomalyPolicy p) {
  return p == AnomalyPolicy::strict ? "strict" : "majority";
}

std::optional<AnomalyPolicy> parse_policy(std::string_view text) {
  if (text == "strict") return AnomalyPolicy::strict;
  if (text == "majority") return AnomalyPolicy::majority;
  return std::nullopt;
}

bool on_accepted(InstanceLedger& ledger, const Accepted& a) {
  if (ledger.verdict) return false;
  auto [it, inserted] =
      ledger.tuples.try_emplace(a.from, ReplicaTuple{a.n, a.output, a.new_state});
  if (inserted) return true;
  if (a.n <= it->second.n) return false;
  it->second = ReplicaTuple{a.n, a.output, a.new_state};
  return true;
}

std::map<NodeId, ReplicaTuple> highest_tuples(const InstanceLedger& ledger) {
  std::map<NodeId, ReplicaTuple> out;
  if (ledger.tuples.empty()) return out;
  ProposalNumber top = ledger.tuples.begin()->second.n;
  for (const auto& [node, t] : ledger.tuples) top = std::max(top, t.n);
  for (const auto& [node, t] : ledger.tuples) {
    if (t.n == top) out.emplace(node, t);
  }
  return out;
}

namespace {

struct Group {
  std::string output;
  std::string state;
  std::set<NodeId> nodes;
};

AnomalyVerdict describe_divergence(const std::map<NodeId, ReplicaTuple>& tuples) {
  std::vector<Group> groups;
  for (const auto& [node, t] : tuples) {
    auto it = std::find_if(groups.begin(), groups.end(), [&](const Group& g) {
      return g.output == t.output && g.state == t.new_state;
    });
    if (it == groups.end()) {
      groups.push_back({t.output, t.new_state, {node}});
    } else {
      it->nodes.insert(node);
    }
  }
  // Largest first; ties toward the smallest state name, then output.
  std::sort(groups.begin(), groups.end(), [](const Group& a, const Group& b) {
    if (a.nodes.size() != b.nodes.size()) return a.nodes.size() > b.nodes.size();
    if (a.state != b.state) return a.state < b.state;
    return a.output < b.output;
  });

  AnomalyVerdict v;
  v.agreeing = groups.front().nodes;
  v.majority_output = groups.front().output;
  v.majority_state = groups.front().state;
  v.tie_broken = groups.size() > 1 && groups[1].nodes.size() == groups[0].nodes.size();
  for (const auto& [node, t] : tuples) {
    if (!v.agreeing.contains(node)) v.dissenting.insert(node);
    ++v.states_seen[t.new_state];
  }
  return v;
}

}  // namespace

Decision decide(const InstanceLedger& ledger, std::size_t membership_size,
                bool /*deadline_reached*/, AnomalyPolicy policy) {
  const std::size_t needed = majority_threshold(std::max<std::size_t>(membership_size, 1));
  const auto tuples = highest_tuples(ledger);
  if (tuples.empty()) return {InconclusiveVerdict{0, needed}, std::nullopt};

  const auto& first = tuples.begin()->second;
  const bool agree = std::all_of(tuples.begin(), tuples.end(), [&](const auto& kv) {
    return kv.second.output == first.output && kv.second.new_state == first.new_state;
  });

  if (!agree) {
    auto anomaly = describe_divergence(tuples);
    if (policy == AnomalyPolicy::majority && anomaly.agreeing.size() >= needed) {
      ConsensusVerdict c{anomaly.majority_output, anomaly.majority_state};
      return {c, std::move(anomaly)};
    }
    return {std::move(anomaly), std::nullopt};
  }
  if (tuples.size() >= needed) return {ConsensusVerdict{first.output, first.new_state}, std::nullopt};
  return {InconclusiveVerdict{tuples.size(), needed}, std::nullopt};
}

}  // namespace paxad
