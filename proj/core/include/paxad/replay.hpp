#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <string_view>
#include <vector>

#include "paxad/learner.hpp"
#include "paxad/record.hpp"

namespace paxad {

/// Event-log form of a learner decision. `received` is the number of
/// highest-N tuples the decision saw.
Record verdict_record(std::uint64_t instance, const Verdict& verdict, std::size_t received,
                      std::size_t membership, bool deadline_reached);

Record anomaly_report_record(std::uint64_t instance, const AnomalyVerdict& anomaly,
                             AnomalyPolicy policy);

std::string join_nodes(const std::set<NodeId>& nodes);

struct ReplayResult {
  std::size_t verdicts_checked = 0;
  std::vector<std::string> mismatches;

  bool ok() const noexcept { return mismatches.empty(); }
};

/// Rebuilds the learner ledgers from the Accepted deliveries in a log and
/// recomputes every Verdict record with decide(). Throws Error(parse_error).
ReplayResult replay(const std::vector<std::string>& lines);
ReplayResult replay_text(std::string_view log_text);

}  // namespace paxad
