#include "generators.hpp"

#include <algorithm>
#include <set>

#include "oracles.hpp"
#include "paxad/statemachine.hpp"

namespace paxad {

namespace {

const std::vector<std::string> kOutputs = {"OK", "Error", "Failure", "Busy"};
const std::vector<std::string> kOutputPatterns = {"OK", "Error", "Error|Failure", "Busy", ".*", "B.*"};
const std::vector<std::string> kPayloads = {"p0", "p1", "p2", "p3", "p4", "p5"};

template <class T>
const T& pick(std::mt19937_64& rng, const std::vector<T>& v) {
  return v[rng() % v.size()];
}

std::uint64_t between(std::mt19937_64& rng, std::uint64_t lo, std::uint64_t hi) {
  return lo + rng() % (hi - lo + 1);
}

}  // namespace

Scenario random_workload(std::mt19937_64& rng, std::size_t acceptors, std::size_t requests) {
  Scenario s;
  s.name = "generated";
  s.acceptors = acceptors;

  const auto states = between(rng, 2, 4);
  for (std::uint64_t i = 0; i < states; ++i) s.machine.states.push_back("S" + std::to_string(i));
  s.machine.start = s.machine.states.front();
  const auto rules = between(rng, 1, 6);
  for (std::uint64_t i = 0; i < rules; ++i) {
    RuleSource r;
    r.from = pick(rng, s.machine.states);
    r.output_regex = pick(rng, kOutputPatterns);
    if (rng() % 4 == 0) r.input_regex = "p[0-2]";
    if (rng() % 5 == 0) {
      r.to = r.from;  // '*'
    } else {
      r.to = pick(rng, s.machine.states);
      r.threshold = static_cast<std::uint32_t>(between(rng, 0, 3));
    }
    s.machine.rules.push_back(std::move(r));
  }

  s.default_output = pick(rng, kOutputs);
  for (const auto& p : kPayloads) {
    if (rng() % 3 != 0) s.outputs.push_back({p, false, pick(rng, kOutputs)});
  }
  if (rng() % 2) s.outputs.push_back({"p[3-5]", true, pick(rng, kOutputs)});

  SimTime at = 1;
  for (std::size_t i = 0; i < requests; ++i) {
    at += between(rng, 0, 12);
    s.requests.push_back({at, pick(rng, kPayloads)});
  }

  s.net.seed = rng();
  s.net.base_delay = 1;
  s.net.jitter = between(rng, 0, 3);
  s.timing.horizon = 4000;
  return s;
}

Scenario safety_scenario(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  const auto n = between(rng, 3, 9);
  auto s = random_workload(rng, n, between(rng, 1, 10));
  s.name = "safety-" + std::to_string(seed);
  s.net.loss_rate = static_cast<double>(between(rng, 0, 20)) / 100.0;

  const std::size_t spare = n - (n / 2 + 1);
  const auto crashes = std::min<std::size_t>(between(rng, 0, 2), spare);
  std::set<std::uint32_t> targets;
  while (targets.size() < crashes) targets.insert(static_cast<std::uint32_t>(rng() % n));
  for (const auto t : targets) {
    s.faults.push_back({between(rng, 0, 150), NodeId{t}, FaultKind::crash, {}});
  }
  return s;
}

CompromiseCase compromise_scenario(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  while (true) {
    const auto n = between(rng, 3, 7);
    auto s = random_workload(rng, n, between(rng, 1, 8));
    s.name = "compromise-" + std::to_string(seed);
    const auto def = compile(s.machine);
    const auto honest = reference_replica(s);

    // Candidate: the first request carrying some payload, with an override
    // output that selects a different active rule from the honest state.
    std::vector<std::pair<std::size_t, std::string>> candidates;
    std::set<std::string> seen_payloads;
    std::string state = s.machine.start;
    for (std::size_t i = 0; i < s.requests.size(); ++i) {
      const auto& payload = s.requests[i].payload;
      if (seen_payloads.insert(payload).second) {
        const auto before = active_rule(def, state, payload, honest[i].output);
        for (const auto& o : kOutputs) {
          if (o != honest[i].output && active_rule(def, state, payload, o) != before) {
            candidates.emplace_back(i, o);
          }
        }
      }
      state = honest[i].state;
    }
    if (candidates.empty()) continue;

    const auto& [request, output] = pick(rng, candidates);
    const NodeId target{static_cast<std::uint32_t>(rng() % n)};
    s.faults.push_back(
        {0, target, FaultKind::compromise, {{s.requests[request].payload, output}}});
    return {std::move(s), target, request};
  }
}

Scenario leader_crash_scenario(std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  auto s = random_workload(rng, 5, between(rng, 4, 10));
  s.name = "leader-crash-" + std::to_string(seed);
  // Crash somewhere inside the request burst so later requests are queued.
  const auto first = s.requests.front().at;
  const auto last = s.requests.back().at;
  s.faults.push_back({between(rng, first, std::max(first, last)), NodeId{0}, FaultKind::crash, {}});
  return s;
}

}  // namespace paxad
