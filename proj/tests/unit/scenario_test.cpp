#include <gtest/gtest.h>

#include "paxad/errors.hpp"
#include "paxad/scenario.hpp"

using namespace paxad;

namespace {

const std::string kMinimal = R"(
name: minimal
acceptors: 3
machine:
  states: [A, B]
  start: A
  rules:
    - {from: A, to: B, output: Error, threshold: 1}
    - {from: B, to: B, output: ".*", threshold: "*"}
)";

Error failure(const std::string& text) {
  try {
    parse_scenario(text);
  } catch (const Error& e) {
    return e;
  }
  ADD_FAILURE() << "scenario accepted:\n" << text;
  return Error(Errc::parse_error, "none");
}

}  // namespace

TEST(LoadScenario, BundledFixturesValidate) {
  for (const auto* name : {"baseline", "fig3", "section5", "election"}) {
    const auto s = load_scenario(std::string(PAXAD_SCENARIO_DIR) + "/" + name + ".scenario");
    EXPECT_EQ(s.name, name);
  }
}

TEST(LoadScenario, CountedMachineFixture) {
  const auto s = load_scenario(std::string(PAXAD_SCENARIO_DIR) + "/fig3.scenario");
  EXPECT_EQ(s.machine.states, (std::vector<std::string>{"3", "7"}));
  ASSERT_EQ(s.machine.rules.size(), 2u);
  EXPECT_EQ(s.machine.rules[0].output_regex, "Error|Failure");
  EXPECT_EQ(s.machine.rules[0].threshold, 6u);
  EXPECT_FALSE(s.machine.rules[1].threshold.has_value());
}

TEST(ParseScenario, DefaultsAndEmptyRequests) {
  const auto s = parse_scenario(kMinimal);
  EXPECT_EQ(s.acceptors, 3u);
  EXPECT_TRUE(s.requests.empty());
  EXPECT_EQ(s.timing.heartbeat_interval, 5u);
  EXPECT_EQ(s.timing.suspect_after, 15u);
  EXPECT_EQ(s.timing.prepare_timeout, 10u);
  EXPECT_EQ(s.timing.instance_deadline, 50u);
  EXPECT_EQ(s.anomaly_policy, AnomalyPolicy::strict);
}

TEST(ParseScenario, FullDocument) {
  const auto s = parse_scenario(kMinimal + R"(
anomaly_policy: majority
net: {seed: 9, base_delay: 2, jitter: 3, loss_rate: 0.25}
timing: {heartbeat_interval: 4, suspect_after: 12, prepare_timeout: 8, instance_deadline: 30, horizon: 900}
outputs:
  default: Nope
  table:
    - {payload: "a b", output: OK}
    - {payload_regex: "x.*", output: X}
requests:
  - {at: 1, payload: "a b"}
  - {at: 1, payload: xy}
faults:
  - {at: 5, target: 2, kind: compromise, overrides: {"a b": Error}}
  - {at: 7, target: 1, kind: crash}
)");
  EXPECT_EQ(s.anomaly_policy, AnomalyPolicy::majority);
  EXPECT_EQ(s.net.seed, 9u);
  EXPECT_DOUBLE_EQ(s.net.loss_rate, 0.25);
  EXPECT_EQ(s.timing.horizon, 900u);
  EXPECT_EQ(s.default_output, "Nope");
  ASSERT_EQ(s.outputs.size(), 2u);
  EXPECT_TRUE(s.outputs[1].is_regex);
  EXPECT_EQ(s.requests[1].payload, "xy");
  ASSERT_EQ(s.faults.size(), 2u);
  EXPECT_EQ(s.faults[0].overrides.at("a b"), "Error");
  EXPECT_EQ(s.faults[1].kind, FaultKind::crash);
  const auto model = build_app_model(s);
  EXPECT_EQ(model.execute("xyz"), "X");
  EXPECT_EQ(model.execute("zz"), "Nope");
}

TEST(ParseScenario, FaultTargetOutOfRange) {
  const auto e = failure(kMinimal + "faults:\n  - {at: 1, target: 3, kind: crash}\n");
  EXPECT_EQ(e.code(), Errc::validation_error);
  EXPECT_EQ(e.field(), "faults[0].target");
}

TEST(ParseScenario, FieldErrors) {
  struct Case {
    std::string extra;
    std::string field;
  };
  const std::vector<Case> cases = {
      {"requests:\n  - {at: 5, payload: a}\n  - {at: 2, payload: b}\n", "requests[1].at"},
      {"net: {loss_rate: 1.5}\n", "net.loss_rate"},
      {"net: {base_delay: 0}\n", "net.base_delay"},
      {"timing: {prepare_timeout: 0}\n", "timing.prepare_timeout"},
      {"timing: {prepare_timeout: soon}\n", "timing.prepare_timeout"},
      {"bogus: 1\n", "bogus"},
      {"anomaly_policy: lenient\n", "anomaly_policy"},
      {"faults:\n  - {at: 1, target: 0, kind: explode}\n", "faults[0].kind"},
      {"faults:\n  - {at: 1, target: 0, kind: crash, overrides: {a: b}}\n", "faults[0].overrides"},
  };
  for (const auto& c : cases) {
    const auto e = failure(kMinimal + c.extra);
    EXPECT_EQ(e.code(), Errc::validation_error) << c.extra;
    EXPECT_EQ(e.field(), c.field) << c.extra;
  }
}

TEST(ParseScenario, MachineErrorsNameTheRule) {
  const auto e = failure(R"(
acceptors: 1
machine:
  states: ["3", "7"]
  start: "3"
  rules:
    - {from: "3", to: "9", output: Error, threshold: 6}
)");
  EXPECT_EQ(e.field(), "machine.rules[0].to");
}

TEST(ParseScenario, SyntaxErrorCarriesLine) {
  const auto e = failure("name: x\nacceptors: [1, 2\nmachine: {}\n");
  EXPECT_EQ(e.code(), Errc::parse_error);
  EXPECT_GT(e.line(), 0u);
}

TEST(ParseScenario, ZeroAcceptorsRejected) {
  const auto e = failure("acceptors: 0\nmachine: {states: [A], start: A}\n");
  EXPECT_EQ(e.field(), "acceptors");
}

TEST(CompileMachineText, Standalone) {
  const auto def = compile_machine_text("states: [A]\nstart: A\n");
  EXPECT_EQ(def.start(), "A");
  EXPECT_THROW(compile_machine_text("states: [A]\nstart: B\n"), Error);
}
