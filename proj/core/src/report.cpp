#include "paxad/report.hpp"

#include <sstream>
#include <variant>

#include "json.hpp"

#include "paxad/messages.hpp"

namespace paxad {

namespace {

using nlohmann::json;

json node_list(const std::set<NodeId>& nodes) {
  json out = json::array();
  for (const auto n : nodes) out.push_back(n.value);
  return out;
}

json anomaly_json(const AnomalyVerdict& a) {
  return {{"agreeing", node_list(a.agreeing)},
          {"dissenting", node_list(a.dissenting)},
          {"states_seen", a.states_seen},
          {"majority_output", a.majority_output},
          {"majority_state", a.majority_state},
          {"tie_broken", a.tie_broken}};
}

json verdict_json(std::size_t instance, const Verdict& v) {
  json out{{"instance", instance}, {"verdict", std::string(verdict_name(v))}};
  std::visit(
      [&](const auto& x) {
        using T = std::decay_t<decltype(x)>;
        if constexpr (std::is_same_v<T, ConsensusVerdict>) {
          out["output"] = x.output;
          out["state"] = x.state;
        } else if constexpr (std::is_same_v<T, AnomalyVerdict>) {
          out["anomaly"] = anomaly_json(x);
        } else {
          out["received"] = x.received;
          out["needed"] = x.needed;
        }
      },
      v);
  return out;
}

}  // namespace

int exit_code(const Report& report) {
  if (!report.anomalies.empty() || report.counts.anomaly > 0) return 2;
  if (report.horizon_reached || report.halted) return 3;
  return 0;
}

std::string report_json(const Report& report) {
  json verdicts = json::array();
  for (std::size_t i = 0; i < report.verdicts.size(); ++i) {
    verdicts.push_back(verdict_json(i, report.verdicts[i]));
  }
  json anomalies = json::array();
  for (const auto& a : report.anomalies) {
    json entry = anomaly_json(a.anomaly);
    entry["instance"] = a.instance;
    anomalies.push_back(std::move(entry));
  }
  const auto& c = report.counts;
  const json out{
      {"scenario", report.scenario},
      {"seed", report.seed},
      {"verdicts", std::move(verdicts)},
      {"counts",
       {{"consensus", c.consensus},
        {"anomaly", c.anomaly},
        {"inconclusive", c.inconclusive},
        {"reproposals", c.reproposals},
        {"elections", c.elections},
        {"drops", c.drops}}},
      {"final_membership", node_list(report.final_membership)},
      {"final_leader", report.final_leader.value},
      {"final_epoch", report.final_epoch},
      {"anomalies", std::move(anomalies)},
      {"horizon_reached", report.horizon_reached},
      {"halted", report.halted},
      {"end_time", report.end_time},
      {"exit_code", exit_code(report)},
  };
  return out.dump(2);
}

std::string report_text(const Report& report) {
  std::ostringstream os;
  const auto& c = report.counts;
  os << "scenario " << report.scenario << " (seed " << report.seed << ")\n";
  for (std::size_t i = 0; i < report.verdicts.size(); ++i) {
    const auto& v = report.verdicts[i];
    os << "  request " << i << ": " << verdict_name(v);
    if (const auto* cv = std::get_if<ConsensusVerdict>(&v)) {
      os << " output=" << cv->output << " state=" << cv->state;
    } else if (const auto* av = std::get_if<AnomalyVerdict>(&v)) {
      os << " dissenting=";
      const char* sep = "";
      for (const auto n : av->dissenting) {
        os << sep << n.value;
        sep = ",";
      }
    } else if (const auto* iv = std::get_if<InconclusiveVerdict>(&v)) {
      os << " received=" << iv->received << " needed=" << iv->needed;
    }
    os << '\n';
  }
  os << "consensus=" << c.consensus << " anomaly=" << c.anomaly
     << " inconclusive=" << c.inconclusive << " reproposals=" << c.reproposals
     << " elections=" << c.elections << " drops=" << c.drops << '\n';
  os << "leader=" << report.final_leader.value << " epoch=" << report.final_epoch
     << " members=";
  const char* sep = "";
  for (const auto n : report.final_membership) {
    os << sep << n.value;
    sep = ",";
  }
  os << " end_time=" << report.end_time;
  if (report.horizon_reached) os << " horizon_reached";
  if (report.halted) os << " halted";
  os << '\n';
  return os.str();
}

}  // namespace paxad
