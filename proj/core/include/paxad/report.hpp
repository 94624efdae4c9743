#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <string>
#include <vector>

#include "paxad/learner.hpp"
#include "paxad/types.hpp"

namespace paxad {

struct ReportCounts {
  std::size_t consensus = 0;
  std::size_t anomaly = 0;
  std::size_t inconclusive = 0;
  std::size_t reproposals = 0;
  std::size_t elections = 0;  // excludes the initial epoch-0 leader
  std::size_t drops = 0;
};

struct AnomalyDetail {
  std::uint64_t instance = 0;
  AnomalyVerdict anomaly;
};

/// End-of-run summary. `verdicts[i]` is the final verdict for request i.
struct Report {
  std::string scenario;
  std::uint64_t seed = 0;
  std::vector<Verdict> verdicts;
  ReportCounts counts;
  std::set<NodeId> final_membership;
  NodeId final_leader;
  Epoch final_epoch = 0;
  std::vector<AnomalyDetail> anomalies;
  bool horizon_reached = false;
  bool halted = false;  // every acceptor failed
  SimTime end_time = 0;
};

// 2 when any anomaly was detected, else 3 on livelock or halt, else 0.
int exit_code(const Report& report);

std::string report_json(const Report& report);
std::string report_text(const Report& report);

}  // namespace paxad
