#include "paxad/scenario.hpp"

#include <fstream>
#include <initializer_list>
#include <set>
#include <sstream>

#include <yaml-cpp/yaml.h>

#include "paxad/errors.hpp"

namespace paxad {

void validate_scenario(const Scenario& s) {
  auto invalid = [](const std::string& field, const std::string& msg) {
    throw Error(Errc::validation_error, msg, field);
  };
  if (s.name.empty()) invalid("name", "scenario name is empty");
  if (s.acceptors == 0) invalid("acceptors", "need at least one acceptor");
  if (s.acceptors > 1000) invalid("acceptors", "at most 1000 acceptors");

  for (std::size_t i = 1; i < s.requests.size(); ++i) {
    if (s.requests[i].at < s.requests[i - 1].at) {
      invalid("requests[" + std::to_string(i) + "].at", "arrival times must be nondecreasing");
    }
  }
  for (std::size_t i = 0; i < s.faults.size(); ++i) {
    const auto& f = s.faults[i];
    const std::string prefix = "faults[" + std::to_string(i) + "]";
    if (f.target.value >= s.acceptors) {
      invalid(prefix + ".target", "target " + to_string(f.target) + " is not in 0.." +
                                      std::to_string(s.acceptors - 1));
    }
    if (f.kind == FaultKind::crash && !f.overrides.empty()) {
      invalid(prefix + ".overrides", "crash faults take no overrides");
    }
  }

  if (!(s.net.loss_rate >= 0.0 && s.net.loss_rate <= 1.0)) {
    invalid("net.loss_rate", "must lie in [0, 1]");
  }
  if (s.net.base_delay == 0) invalid("net.base_delay", "must be at least 1");

  const std::pair<SimTime, const char*> positive[] = {
      {s.timing.heartbeat_interval, "timing.heartbeat_interval"},
      {s.timing.suspect_after, "timing.suspect_after"},
      {s.timing.prepare_timeout, "timing.prepare_timeout"},
      {s.timing.instance_deadline, "timing.instance_deadline"},
      {s.timing.horizon, "timing.horizon"},
  };
  for (const auto& [value, field] : positive) {
    if (value == 0) invalid(field, "must be positive");
  }

  (void)compile_machine(s);
  (void)build_app_model(s);
}

StateMachineDef compile_machine(const Scenario& s) {
  try {
    return compile(s.machine);
  } catch (const Error& e) {
    throw Error(Errc::validation_error, e.what(), "machine." + e.field());
  }
}

AppModel build_app_model(const Scenario& s) {
  AppModel model(s.default_output);
  for (std::size_t i = 0; i < s.outputs.size(); ++i) {
    const auto& o = s.outputs[i];
    if (!o.is_regex) {
      model.add_literal(o.pattern, o.output);
      continue;
    }
    try {
      model.add_regex(o.pattern, o.output);
    } catch (const Error& e) {
      throw Error(Errc::validation_error, e.what(),
                  "outputs.table[" + std::to_string(i) + "].payload_regex");
    }
  }
  return model;
}

namespace {

std::size_t line_of(const YAML::Node& n) {
  const auto mark = n.Mark();
  return mark.line >= 0 ? static_cast<std::size_t>(mark.line) + 1 : 0;
}

[[noreturn]] void invalid(const std::string& field, const std::string& msg,
                          const YAML::Node& at) {
  throw Error(Errc::validation_error, msg, field, line_of(at));
}

void check_keys(const YAML::Node& map, std::initializer_list<std::string_view> allowed,
                const std::string& field) {
  if (!map.IsMap()) invalid(field, "expected a mapping", map);
  for (const auto& kv : map) {
    const auto key = kv.first.Scalar();
    bool known = false;
    for (auto a : allowed) known = known || a == key;
    if (!known) {
      invalid(field.empty() ? key : field + "." + key, "unknown key '" + key + "'", kv.first);
    }
  }
}

std::string text(const YAML::Node& n, const std::string& field) {
  if (!n.IsDefined() || n.IsNull()) invalid(field, "missing value", n);
  if (!n.IsScalar()) invalid(field, "expected a scalar", n);
  return n.Scalar();
}

std::uint64_t uint(const YAML::Node& n, const std::string& field) {
  const auto s = text(n, field);
  try {
    return parse_uint(s);
  } catch (const Error&) {
    invalid(field, "expected a non-negative integer, got '" + s + "'", n);
  }
}

double real(const YAML::Node& n, const std::string& field) {
  const auto s = text(n, field);
  try {
    std::size_t used = 0;
    const double v = std::stod(s, &used);
    if (used != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    invalid(field, "expected a number, got '" + s + "'", n);
  }
}

template <class Fn>
void each(const YAML::Node& seq, const std::string& field, Fn&& fn) {
  if (!seq.IsDefined() || seq.IsNull()) return;
  if (!seq.IsSequence()) invalid(field, "expected a list", seq);
  for (std::size_t i = 0; i < seq.size(); ++i) {
    fn(seq[i], field + "[" + std::to_string(i) + "]");
  }
}

MachineSource read_machine(const YAML::Node& m, const std::string& field) {
  if (!m.IsDefined() || m.IsNull()) invalid(field, "missing machine section", m);
  check_keys(m, {"states", "start", "rules"}, field);
  const std::string prefix = field.empty() ? "" : field + ".";
  MachineSource src;
  each(m["states"], prefix + "states",
       [&](const YAML::Node& n, const std::string& f) { src.states.push_back(text(n, f)); });
  if (m["start"]) src.start = text(m["start"], prefix + "start");
  each(m["rules"], prefix + "rules", [&](const YAML::Node& n, const std::string& f) {
    check_keys(n, {"from", "to", "output", "input", "threshold"}, f);
    RuleSource r;
    r.from = text(n["from"], f + ".from");
    r.to = text(n["to"], f + ".to");
    r.output_regex = text(n["output"], f + ".output");
    if (n["input"]) r.input_regex = text(n["input"], f + ".input");
    const auto threshold = text(n["threshold"], f + ".threshold");
    if (threshold != "*") r.threshold = static_cast<std::uint32_t>(uint(n["threshold"], f + ".threshold"));
    src.rules.push_back(std::move(r));
  });
  return src;
}

YAML::Node load_yaml(std::string_view source) {
  try {
    return YAML::Load(std::string(source));
  } catch (const YAML::ParserException& e) {
    const auto line = e.mark.line >= 0 ? static_cast<std::size_t>(e.mark.line) + 1 : 0;
    throw Error(Errc::parse_error, e.msg, {}, line);
  }
}

}  // namespace

Scenario parse_scenario(std::string_view source) {
  const YAML::Node root = load_yaml(source);
  if (!root.IsMap()) throw Error(Errc::parse_error, "scenario must be a mapping", {}, line_of(root));
  check_keys(root, {"name", "acceptors", "anomaly_policy", "net", "timing", "machine", "outputs",
                    "requests", "faults"},
             "");

  Scenario s;
  if (root["name"]) s.name = text(root["name"], "name");
  s.acceptors = uint(root["acceptors"], "acceptors");
  if (root["anomaly_policy"]) {
    const auto p = parse_policy(text(root["anomaly_policy"], "anomaly_policy"));
    if (!p) invalid("anomaly_policy", "expected strict or majority", root["anomaly_policy"]);
    s.anomaly_policy = *p;
  }

  if (const auto net = root["net"]) {
    check_keys(net, {"seed", "base_delay", "jitter", "loss_rate"}, "net");
    if (net["seed"]) s.net.seed = uint(net["seed"], "net.seed");
    if (net["base_delay"]) s.net.base_delay = uint(net["base_delay"], "net.base_delay");
    if (net["jitter"]) s.net.jitter = uint(net["jitter"], "net.jitter");
    if (net["loss_rate"]) s.net.loss_rate = real(net["loss_rate"], "net.loss_rate");
  }

  if (const auto t = root["timing"]) {
    check_keys(t, {"heartbeat_interval", "suspect_after", "prepare_timeout", "instance_deadline",
                   "horizon"},
               "timing");
    auto opt = [&](const char* key, SimTime& out) {
      if (t[key]) out = uint(t[key], std::string("timing.") + key);
    };
    opt("heartbeat_interval", s.timing.heartbeat_interval);
    opt("suspect_after", s.timing.suspect_after);
    opt("prepare_timeout", s.timing.prepare_timeout);
    opt("instance_deadline", s.timing.instance_deadline);
    opt("horizon", s.timing.horizon);
  }

  s.machine = read_machine(root["machine"], "machine");

  if (const auto out = root["outputs"]) {
    check_keys(out, {"default", "table"}, "outputs");
    if (out["default"]) s.default_output = text(out["default"], "outputs.default");
    each(out["table"], "outputs.table", [&](const YAML::Node& n, const std::string& f) {
      check_keys(n, {"payload", "payload_regex", "output"}, f);
      OutputSpec o;
      if (n["payload"] && n["payload_regex"]) invalid(f, "give payload or payload_regex, not both", n);
      if (n["payload_regex"]) {
        o.is_regex = true;
        o.pattern = text(n["payload_regex"], f + ".payload_regex");
      } else {
        o.pattern = text(n["payload"], f + ".payload");
      }
      o.output = text(n["output"], f + ".output");
      s.outputs.push_back(std::move(o));
    });
  }

  each(root["requests"], "requests", [&](const YAML::Node& n, const std::string& f) {
    check_keys(n, {"at", "payload"}, f);
    s.requests.push_back({uint(n["at"], f + ".at"), text(n["payload"], f + ".payload")});
  });

  each(root["faults"], "faults", [&](const YAML::Node& n, const std::string& f) {
    check_keys(n, {"at", "target", "kind", "overrides"}, f);
    FaultSpec fault;
    fault.at = uint(n["at"], f + ".at");
    const auto target = uint(n["target"], f + ".target");
    if (target > UINT32_MAX) invalid(f + ".target", "node id out of range", n["target"]);
    fault.target = NodeId{static_cast<std::uint32_t>(target)};
    const auto kind = text(n["kind"], f + ".kind");
    if (kind == "crash") {
      fault.kind = FaultKind::crash;
    } else if (kind == "compromise") {
      fault.kind = FaultKind::compromise;
    } else {
      invalid(f + ".kind", "expected crash or compromise, got '" + kind + "'", n["kind"]);
    }
    if (const auto o = n["overrides"]) {
      if (!o.IsMap()) invalid(f + ".overrides", "expected a payload -> output mapping", o);
      for (const auto& kv : o) {
        fault.overrides[kv.first.Scalar()] = text(kv.second, f + ".overrides." + kv.first.Scalar());
      }
    }
    s.faults.push_back(std::move(fault));
  });

  validate_scenario(s);
  return s;
}

Scenario load_scenario(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error(Errc::parse_error, "cannot open " + path.string());
  std::ostringstream buffer;
  buffer << in.rdbuf();
  return parse_scenario(buffer.str());
}

StateMachineDef compile_machine_text(std::string_view source) {
  const YAML::Node root = load_yaml(source);
  return compile(read_machine(root, ""));
}

}  // namespace paxad
