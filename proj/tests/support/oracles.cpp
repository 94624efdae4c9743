#include "oracles.hpp"

#include <algorithm>
#include <map>
#include <optional>
#include <regex>
#include <set>

#include "paxad/messages.hpp"
#include "paxad/record.hpp"

namespace paxad {

Decision reference_decide(const InstanceLedger& ledger, std::size_t membership,
                          AnomalyPolicy policy) {
  std::size_t needed = 1;
  while (2 * needed <= membership) ++needed;

  std::optional<ProposalNumber> top;
  for (const auto& [node, t] : ledger.tuples) {
    if (!top || *top < t.n) top = t.n;
  }
  std::vector<std::pair<NodeId, ReplicaTuple>> received;
  for (const auto& [node, t] : ledger.tuples) {
    if (t.n == *top) received.emplace_back(node, t);
  }
  if (received.empty()) return {InconclusiveVerdict{0, needed}, std::nullopt};

  std::map<std::pair<std::string, std::string>, std::set<NodeId>> groups;  // (state, output)
  for (const auto& [node, t] : received) groups[{t.new_state, t.output}].insert(node);

  if (groups.size() == 1) {
    const auto& [key, members] = *groups.begin();
    if (members.size() >= needed) return {ConsensusVerdict{key.second, key.first}, std::nullopt};
    return {InconclusiveVerdict{members.size(), needed}, std::nullopt};
  }

  std::size_t best = 0;
  for (const auto& [key, members] : groups) best = std::max(best, members.size());
  std::size_t at_best = 0;
  const std::pair<std::string, std::string>* chosen = nullptr;
  for (const auto& [key, members] : groups) {
    if (members.size() != best) continue;
    ++at_best;
    if (chosen == nullptr) chosen = &key;  // map order: smallest state, then output
  }
  AnomalyVerdict a;
  a.agreeing = groups.at(*chosen);
  a.majority_state = chosen->first;
  a.majority_output = chosen->second;
  a.tie_broken = at_best > 1;
  for (const auto& [node, t] : received) {
    if (!a.agreeing.contains(node)) a.dissenting.insert(node);
    a.states_seen[t.new_state] += 1;
  }
  if (policy == AnomalyPolicy::majority && a.agreeing.size() >= needed) {
    return {ConsensusVerdict{a.majority_output, a.majority_state}, a};
  }
  return {a, std::nullopt};
}

void for_each_assignment(std::size_t nodes, std::size_t pairs,
                         const std::function<void(const std::vector<int>&)>& fn) {
  std::vector<int> slot(nodes, -1);
  while (true) {
    fn(slot);
    std::size_t i = 0;
    while (i < nodes && slot[i] == static_cast<int>(pairs) - 1) {
      slot[i] = -1;
      ++i;
    }
    if (i == nodes) return;
    ++slot[i];
  }
}

std::vector<ReplicaStep> reference_replica(const Scenario& s) { return reference_replica(s, {}); }

std::vector<ReplicaStep> reference_replica(const Scenario& s,
                                           const std::map<std::string, std::string>& overrides) {
  auto full = [](const std::string& pattern, const std::string& text) {
    return std::regex_match(text, std::regex(pattern));
  };
  auto output_for = [&](const std::string& payload) {
    if (const auto it = overrides.find(payload); it != overrides.end()) return it->second;
    for (const auto& o : s.outputs) {
      if (o.is_regex ? full(o.pattern, payload) : o.pattern == payload) return o.output;
    }
    return s.default_output;
  };

  std::string state = s.machine.start;
  std::vector<std::uint32_t> streak(s.machine.rules.size(), 0);
  std::vector<ReplicaStep> trace;
  for (const auto& req : s.requests) {
    const auto out = output_for(req.payload);
    std::optional<std::size_t> hit;
    for (std::size_t i = 0; i < s.machine.rules.size() && !hit; ++i) {
      const auto& r = s.machine.rules[i];
      if (r.from == state && full(r.input_regex.value_or(".*"), req.payload) &&
          full(r.output_regex, out)) {
        hit = i;
      }
    }
    const bool star = hit && !s.machine.rules[*hit].threshold;
    if (!star) {
      // A '*' step leaves every streak alone; anything else breaks the others.
      for (std::size_t i = 0; i < streak.size(); ++i) {
        if (!hit || i != *hit) streak[i] = 0;
      }
    }
    if (hit && !star) {
      const auto& r = s.machine.rules[*hit];
      if (++streak[*hit] == *r.threshold + 1) {
        state = r.to;
        std::fill(streak.begin(), streak.end(), 0);
      }
    }
    trace.push_back({out, state});
  }
  return trace;
}

ProposalCheck check_proposal_numbers(const std::vector<std::string>& lines) {
  ProposalCheck check;
  std::map<std::string, std::optional<ProposalNumber>> observed;  // by node id text
  std::map<std::string, std::uint64_t> last_round;

  auto see = [&](const std::string& node, const ProposalNumber& n) {
    auto& o = observed[node];
    if (!o || *o < n) o = n;
  };

  for (const auto& line : lines) {
    const auto rec = parse_record(line);
    if (rec.kind == "Propose" || rec.kind == "Repropose") {
      ++check.proposals;
      const auto& node = rec.get("node");
      const auto n = parse_proposal(rec.get("n"));
      const auto where = "time=" + std::to_string(rec.time) + " node=" + node;
      if (n.proposer.value != parse_uint(node)) {
        check.violations.push_back(where + ": number " + to_string(n) + " not owned by proposer");
      }
      if (const auto it = last_round.find(node); it != last_round.end() && n.round <= it->second) {
        check.violations.push_back(where + ": round " + std::to_string(n.round) +
                                   " does not exceed previous " + std::to_string(it->second));
      }
      if (const auto& o = observed[node]; o && !(*o < n)) {
        check.violations.push_back(where + ": " + to_string(n) + " does not exceed observed " +
                                   to_string(*o));
      }
      last_round[node] = n.round;
      see(node, n);
      continue;
    }
    if (!is_packet_kind(rec.kind)) continue;
    const auto& to = rec.get("to");
    if (const auto* n = rec.find("n")) see(to, parse_proposal(*n));
    if (const auto* last = rec.find("last")) see(to, parse_proposal(*last));
  }
  return check;
}

}  // namespace paxad
