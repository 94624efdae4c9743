#include "paxad/replay.hpp"

#include <map>
#include <optional>
#include <sstream>

#include "paxad/errors.hpp"
#include "paxad/messages.hpp"

namespace paxad {

std::string join_nodes(const std::set<NodeId>& nodes) {
  std::string out;
  for (const auto node : nodes) {
    if (!out.empty()) out += ',';
    out += to_string(node);
  }
  return out;
}

namespace {

std::string join_states(const std::map<std::string, std::size_t>& states) {
  std::string out;
  for (const auto& [name, count] : states) {
    if (!out.empty()) out += ',';
    out += name + ":" + std::to_string(count);
  }
  return out;
}

}  // namespace

Record verdict_record(std::uint64_t instance, const Verdict& verdict, std::size_t received,
                      std::size_t membership, bool deadline_reached) {
  Record r;
  r.kind = "Verdict";
  r.add("verdict", std::string(verdict_name(verdict)));
  r.add("instance", instance);
  r.add("membership", membership);
  r.add("deadline", deadline_reached ? 1u : 0u);
  if (const auto* c = std::get_if<ConsensusVerdict>(&verdict)) {
    r.add("received", received).add("output", c->output).add("state", c->state);
  } else if (const auto* a = std::get_if<AnomalyVerdict>(&verdict)) {
    r.add("received", received);
    r.add("agreeing", join_nodes(a->agreeing)).add("dissenting", join_nodes(a->dissenting));
    r.add("states", join_states(a->states_seen));
  } else {
    const auto& i = std::get<InconclusiveVerdict>(verdict);
    r.add("received", i.received).add("needed", i.needed);
  }
  return r;
}

Record anomaly_report_record(std::uint64_t instance, const AnomalyVerdict& anomaly,
                             AnomalyPolicy policy) {
  Record r;
  r.kind = "AnomalyReport";
  r.add("instance", instance).add("policy", std::string(to_string(policy)));
  r.add("dissenting", join_nodes(anomaly.dissenting));
  r.add("agreeing", join_nodes(anomaly.agreeing));
  r.add("majority_output", anomaly.majority_output);
  r.add("majority_state", anomaly.majority_state);
  r.add("states", join_states(anomaly.states_seen));
  r.add("tie_break", anomaly.tie_broken ? 1u : 0u);
  return r;
}

ReplayResult replay(const std::vector<std::string>& lines) {
  ReplayResult result;
  std::optional<NodeId> learner;
  AnomalyPolicy policy = AnomalyPolicy::strict;
  std::map<std::uint64_t, InstanceLedger> ledgers;

  for (std::size_t i = 0; i < lines.size(); ++i) {
    if (lines[i].empty()) continue;
    Record r;
    try {
      r = parse_record(lines[i]);
    } catch (const Error& e) {
      throw Error(Errc::parse_error, e.what(), {}, i + 1);
    }

    if (r.kind == "Start") {
      learner = NodeId{static_cast<std::uint32_t>(r.get_uint("learner"))};
      const auto p = parse_policy(r.get("policy"));
      if (!p) throw Error(Errc::parse_error, "unknown policy in Start record", {}, i + 1);
      policy = *p;
    } else if (r.kind == "Accepted") {
      if (!learner) throw Error(Errc::parse_error, "Accepted before Start record", {}, i + 1);
      const auto addressed = packet_from_record(r);
      if (addressed.to == *learner) {
        const auto& a = std::get<Accepted>(addressed.packet);
        on_accepted(ledgers[a.instance], a);
      }
    } else if (r.kind == "Verdict") {
      const auto instance = r.get_uint("instance");
      const auto membership = r.get_uint("membership");
      const bool deadline = r.get_uint("deadline") != 0;
      auto& ledger = ledgers[instance];
      const auto decision = decide(ledger, membership, deadline, policy);
      auto expected = verdict_record(instance, decision.verdict, highest_tuples(ledger).size(),
                                     membership, deadline);
      expected.time = r.time;
      expected.seq = r.seq;
      ++result.verdicts_checked;
      if (!(expected == r)) {
        result.mismatches.push_back("line " + std::to_string(i + 1) + ": logged '" + lines[i] +
                                    "' recomputed '" + format_record(expected) + "'");
      }
      if (is_final(decision.verdict)) ledger.verdict = decision.verdict;
    }
  }
  return result;
}

ReplayResult replay_text(std::string_view log_text) {
  std::vector<std::string> lines;
  std::istringstream in{std::string(log_text)};
  for (std::string line; std::getline(in, line);) lines.push_back(line);
  return replay(lines);
}

}  // namespace paxad
