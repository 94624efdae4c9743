#include <gtest/gtest.h>

#include "oracles.hpp"
#include "paxad/learner.hpp"

using namespace paxad;

namespace {

ProposalNumber pn(std::uint64_t round) { return {round, NodeId{0}}; }

Accepted tuple(std::uint32_t node, std::string output, std::string state, std::uint64_t round = 1) {
  return {pn(round), 0, std::move(output), std::move(state), NodeId{node}};
}

}  // namespace

TEST(OnAccepted, RecordsAndDeduplicates) {
  InstanceLedger ledger;
  EXPECT_TRUE(on_accepted(ledger, tuple(1, "OK", "S1")));
  EXPECT_EQ(ledger.tuples.size(), 1u);
  EXPECT_FALSE(on_accepted(ledger, tuple(1, "OK", "S1")));
  EXPECT_FALSE(on_accepted(ledger, tuple(1, "X", "S9")));  // equal n, ignored
  EXPECT_EQ(ledger.tuples.at(NodeId{1}).output, "OK");
  EXPECT_TRUE(on_accepted(ledger, tuple(1, "Y", "S2", 2)));
  EXPECT_EQ(ledger.tuples.at(NodeId{1}).output, "Y");
  EXPECT_FALSE(on_accepted(ledger, tuple(1, "Z", "S3", 1)));
}

TEST(OnAccepted, ClosedLedgerIsFrozen) {
  InstanceLedger ledger;
  ledger.verdict = ConsensusVerdict{"OK", "S"};
  EXPECT_FALSE(on_accepted(ledger, tuple(0, "OK", "S")));
  EXPECT_TRUE(ledger.tuples.empty());
}

TEST(Decide, UnanimousFiveIsConsensus) {
  InstanceLedger ledger;
  for (std::uint32_t i = 0; i < 5; ++i) on_accepted(ledger, tuple(i, "OK", "S1"));
  const auto d = decide(ledger, 5, false);
  ASSERT_TRUE(std::holds_alternative<ConsensusVerdict>(d.verdict));
  EXPECT_EQ(std::get<ConsensusVerdict>(d.verdict), (ConsensusVerdict{"OK", "S1"}));
}

TEST(Decide, SingleDissenterIsAnomaly) {
  InstanceLedger ledger;
  for (std::uint32_t i = 0; i < 5; ++i) on_accepted(ledger, tuple(i, "OK", i == 3 ? "S7" : "S1"));
  const auto d = decide(ledger, 5, false);
  ASSERT_TRUE(std::holds_alternative<AnomalyVerdict>(d.verdict));
  const auto& a = std::get<AnomalyVerdict>(d.verdict);
  EXPECT_EQ(a.dissenting, std::set<NodeId>{NodeId{3}});
  EXPECT_EQ(a.states_seen.at("S1"), 4u);
  EXPECT_EQ(a.states_seen.at("S7"), 1u);
}

TEST(Decide, TwoOfFiveIsInconclusive) {
  InstanceLedger ledger;
  on_accepted(ledger, tuple(0, "OK", "S1"));
  on_accepted(ledger, tuple(1, "OK", "S1"));
  const auto d = decide(ledger, 5, true);
  EXPECT_EQ(std::get<InconclusiveVerdict>(d.verdict), (InconclusiveVerdict{2, 3}));
}

TEST(Decide, OutputOnlyDivergenceCounts) {
  InstanceLedger ledger;
  on_accepted(ledger, tuple(0, "OK", "S"));
  on_accepted(ledger, tuple(1, "OK", "S"));
  on_accepted(ledger, tuple(2, "Error", "S"));
  EXPECT_TRUE(std::holds_alternative<AnomalyVerdict>(decide(ledger, 3, false).verdict));
}

TEST(Decide, OnlyHighestNumberCounts) {
  InstanceLedger ledger;
  on_accepted(ledger, tuple(0, "Old", "X", 1));
  on_accepted(ledger, tuple(1, "OK", "S", 2));
  on_accepted(ledger, tuple(2, "OK", "S", 2));
  const auto d = decide(ledger, 3, false);
  EXPECT_EQ(std::get<ConsensusVerdict>(d.verdict), (ConsensusVerdict{"OK", "S"}));
}

TEST(Decide, TieBreaksTowardSmallestState) {
  InstanceLedger ledger;
  on_accepted(ledger, tuple(0, "OK", "B"));
  on_accepted(ledger, tuple(1, "OK", "A"));
  const auto a = std::get<AnomalyVerdict>(decide(ledger, 2, false).verdict);
  EXPECT_TRUE(a.tie_broken);
  EXPECT_EQ(a.majority_state, "A");
  EXPECT_EQ(a.dissenting, std::set<NodeId>{NodeId{0}});
}

TEST(Decide, MajorityPolicyReportsMinority) {
  InstanceLedger ledger;
  for (std::uint32_t i = 0; i < 5; ++i) on_accepted(ledger, tuple(i, "OK", i == 4 ? "Bad" : "S"));
  const auto d = decide(ledger, 5, false, AnomalyPolicy::majority);
  EXPECT_EQ(std::get<ConsensusVerdict>(d.verdict), (ConsensusVerdict{"OK", "S"}));
  ASSERT_TRUE(d.minority_report.has_value());
  EXPECT_EQ(d.minority_report->dissenting, std::set<NodeId>{NodeId{4}});
}

TEST(Decide, AgreesWithReferenceTableOnSmallCases) {
  // The full sweep lives in the acceptance suite; this is a fast subset.
  const std::vector<std::pair<std::string, std::string>> pairs = {{"OK", "A"}, {"OK", "B"}};
  for (std::size_t members = 1; members <= 4; ++members) {
    for_each_assignment(members, pairs.size(), [&](const std::vector<int>& slot) {
      InstanceLedger ledger;
      for (std::size_t i = 0; i < slot.size(); ++i) {
        if (slot[i] < 0) continue;
        on_accepted(ledger, {pn(1), 0, pairs[slot[i]].first, pairs[slot[i]].second,
                             NodeId{static_cast<std::uint32_t>(i)}});
      }
      for (const auto policy : {AnomalyPolicy::strict, AnomalyPolicy::majority}) {
        const auto got = decide(ledger, members, false, policy);
        const auto want = reference_decide(ledger, members, policy);
        ASSERT_EQ(got.verdict, want.verdict);
        ASSERT_EQ(got.minority_report, want.minority_report);
      }
    });
  }
}
