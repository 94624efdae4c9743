#include "paxad/cluster.hpp"

#include <algorithm>

#include "paxad/acceptor.hpp"
#include "paxad/errors.hpp"
#include "paxad/membership.hpp"
#include "paxad/proposer.hpp"
#include "paxad/replay.hpp"

namespace paxad {

namespace {

class Simulation final : public EventHandler {
 public:
  Simulation(const Scenario& s, StateMachineDef def)
      : sc_(s),
        def_(std::move(def)),
        n_(s.acceptors),
        learner_(learner_node(s.acceptors)),
        monitor_(monitor_node(s.acceptors)),
        client_(client_node(s.acceptors)),
        net_(s.net, s.acceptors, log_),
        final_(s.requests.size()),
        arrived_(s.requests.size(), false),
        hb_seq_(s.acceptors, 0) {
    const AppModel model = build_app_model(s);
    acceptors_.reserve(n_);
    proposers_.reserve(n_);
    for (std::uint32_t i = 0; i < n_; ++i) {
      acceptors_.emplace_back(NodeId{i}, def_, model);
      proposers_.emplace_back(NodeId{i});
    }
  }

  RunResult run() {
    start();
    while (!halted_ && !net_.empty() && *net_.next_time() <= sc_.timing.horizon) {
      net_.step(*this);
      maybe_settle();
    }
    const bool undecided = !all_final();
    if (!halted_ && undecided) {
      Record r;
      r.kind = "Horizon";
      r.add("undecided", static_cast<std::uint64_t>(std::count_if(
                             final_.begin(), final_.end(), [](const auto& v) { return !v; })));
      net_.log(std::move(r));
    }
    RunResult result{build_report(!halted_ && undecided), std::move(log_)};
    return result;
  }

  void on_deliver(const Deliver& d) override {
    net_.log(to_record(d.packet, d.from, d.to));
    if (d.to.value < n_) {
      deliver_to_node(d.to.value, d);
    } else if (d.to == learner_) {
      if (const auto* a = std::get_if<Accepted>(&d.packet)) learner_accept(*a);
    } else if (d.to == monitor_) {
      if (std::holds_alternative<Heartbeat>(d.packet)) monitor_heartbeat(d.from);
    }
  }

  void on_timer(const TimerFire& t) override {
    if (settled_) return;
    switch (t.tag.kind) {
      case TimerTag::Kind::heartbeat: {
        const auto k = t.owner.value;
        net_.send(Heartbeat{t.owner, hb_seq_[k]++}, t.owner, monitor_);
        net_.set_timer(t.owner, t.tag, sc_.timing.heartbeat_interval);
        break;
      }
      case TimerTag::Kind::detect:
        detect();
        if (!halted_) net_.set_timer(monitor_, t.tag, sc_.timing.heartbeat_interval);
        break;
      case TimerTag::Kind::prepare_timeout:
        handle(t.owner.value,
               on_prepare_timeout(proposers_[t.owner.value], t.tag.instance, t.tag.n));
        break;
      case TimerTag::Kind::accept_timeout:
        handle(t.owner.value,
               on_accept_timeout(proposers_[t.owner.value], t.tag.instance, t.tag.n));
        break;
      case TimerTag::Kind::deadline:
        learner_check(t.tag.instance, true);
        break;
    }
  }

  void on_fault(const FaultSpec& f) override {
    const auto k = f.target.value;
    Record r;
    r.add("node", k);
    if (f.kind == FaultKind::crash) {
      r.kind = "Crash";
      deactivate(proposers_[k]);
    } else {
      r.kind = "Compromise";
      r.add("overrides", static_cast<std::uint64_t>(f.overrides.size()));
      compromise(acceptors_[k], f.overrides);
    }
    net_.log(std::move(r));
  }

  void on_arrival(const ClientRequest& req) override {
    arrived_[req.request_id] = true;
    Record r;
    r.kind = "ClientArrival";
    r.add("instance", req.request_id).add("to", view_.leader.value).add("payload", req.payload);
    net_.log(std::move(r));
    submit(req);
  }

 private:
  void start() {
    Record r;
    r.kind = "Start";
    r.add("scenario", sc_.name).add("acceptors", n_);
    r.add("learner", learner_.value).add("monitor", monitor_.value).add("client", client_.value);
    r.add("seed", sc_.net.seed).add("policy", std::string(to_string(sc_.anomaly_policy)));
    r.add("requests", static_cast<std::uint64_t>(sc_.requests.size()));
    net_.log(std::move(r));

    view_ = initial_view(n_, 0);
    Record e;
    e.kind = "Election";
    e.add("epoch", view_.epoch).add("leader", view_.leader.value);
    net_.log(std::move(e));
    activate(proposers_[view_.leader.value], view_.epoch, view_.alive);

    SimTime last_activity = 0;
    for (const auto& f : sc_.faults) {
      net_.inject(f);
      last_activity = std::max(last_activity, f.at);
    }
    for (std::size_t i = 0; i < sc_.requests.size(); ++i) {
      net_.arrive(sc_.requests[i].at, ClientRequest{i, sc_.requests[i].payload});
      last_activity = std::max(last_activity, sc_.requests[i].at);
    }
    for (std::uint32_t k = 0; k < n_; ++k) {
      net_.set_timer(NodeId{k}, {TimerTag::Kind::heartbeat, 0, {}}, 0);
    }
    net_.set_timer(monitor_, {TimerTag::Kind::detect, 0, {}}, sc_.timing.heartbeat_interval);
    activity_until_ =
        last_activity + sc_.timing.suspect_after + 2 * sc_.timing.heartbeat_interval;
  }

  bool all_final() const {
    return std::all_of(final_.begin(), final_.end(), [](const auto& v) { return v.has_value(); });
  }

  void maybe_settle() {
    if (settled_ || halted_ || net_.now() < activity_until_ || !all_final()) return;
    settled_ = true;
    Record r;
    r.kind = "Settled";
    net_.log(std::move(r));
  }

  void refused(std::uint32_t node, Refusal why, const Packet& packet) {
    Record r;
    r.kind = "Refused";
    r.add("node", node).add("reason", std::string(to_string(why)));
    r.add("packet", std::string(kind_name(packet)));
    std::visit(
        [&](const auto& p) {
          if constexpr (requires { p.n; }) r.add("n", to_string(p.n));
          if constexpr (requires { p.request; }) r.add("instance", p.request.request_id);
        },
        packet);
    net_.log(std::move(r));
  }

  void deliver_to_node(std::uint32_t k, const Deliver& d) {
    const NodeId self{k};
    if (const auto* p = std::get_if<Prepare>(&d.packet)) {
      observe(proposers_[k], p->n);
      const auto res = on_prepare(acceptors_[k], *p);
      if (res) {
        net_.send(*res, self, p->n.proposer);
      } else {
        refused(k, res.refusal(), d.packet);
      }
    } else if (const auto* a = std::get_if<AcceptRequest>(&d.packet)) {
      observe(proposers_[k], a->n);
      const auto res = on_accept_request(acceptors_[k], def_, *a);
      if (res) {
        net_.send(*res, self, a->n.proposer);
        net_.send(*res, self, learner_);
      } else {
        refused(k, res.refusal(), d.packet);
      }
    } else if (const auto* pr = std::get_if<Promise>(&d.packet)) {
      handle(k, on_promise(proposers_[k], *pr), &d.packet);
    } else if (const auto* ac = std::get_if<Accepted>(&d.packet)) {
      handle(k, on_accepted(proposers_[k], *ac), &d.packet);
    }
  }

  void handle(std::uint32_t k, const ProposerOutput& out, const Packet* cause = nullptr) {
    const NodeId self{k};
    for (const auto& note : out.notes) {
      Record r;
      r.add("node", k).add("instance", note.instance).add("n", to_string(note.n));
      switch (note.kind) {
        case ProposerNote::Kind::propose:
          r.kind = "Propose";
          break;
        case ProposerNote::Kind::repropose:
          r.kind = "Repropose";
          r.add("previous", to_string(*note.previous));
          ++reproposals_;
          break;
        case ProposerNote::Kind::majority_reached:
          r.kind = "MajorityReached";
          r.add("promises", static_cast<std::uint64_t>(note.promises));
          break;
        case ProposerNote::Kind::decided:
          r.kind = "Decided";
          break;
      }
      r.add("membership", static_cast<std::uint64_t>(note.membership));
      net_.log(std::move(r));
    }
    for (const auto& send : out.sends) net_.send(send.packet, self, send.to);
    for (const auto& t : out.timers) {
      const auto kind = t.kind == TimerKind::prepare_timeout ? TimerTag::Kind::prepare_timeout
                                                             : TimerTag::Kind::accept_timeout;
      net_.set_timer(self, {kind, t.instance, t.n}, sc_.timing.prepare_timeout);
    }
    if (out.refusal && cause != nullptr) refused(k, *out.refusal, *cause);
  }

  void submit(const ClientRequest& req) {
    const auto leader = view_.leader;
    if (net_.crashed(leader)) {
      Record r;
      r.kind = "ClientLost";
      r.add("instance", req.request_id).add("to", leader.value);
      net_.log(std::move(r));
      return;
    }
    const auto out = on_client_request(proposers_[leader.value], req);
    if (out.refusal) {
      Record r;
      r.kind = "Refused";
      r.add("node", leader.value).add("reason", std::string(to_string(*out.refusal)));
      r.add("packet", "ClientRequest").add("instance", req.request_id);
      net_.log(std::move(r));
    }
    handle(leader.value, out);
  }

  // Learner.

  void learner_accept(const Accepted& a) {
    if (a.instance >= final_.size()) return;
    auto& ledger = ledgers_[a.instance];
    if (ledger.verdict) {
      Record r;
      r.kind = "Ignored";
      r.add("node", learner_.value).add("reason", "closed").add("instance", a.instance);
      r.add("from", a.from.value);
      net_.log(std::move(r));
      return;
    }
    on_accepted(ledger, a);
    if (deadline_armed_.insert(a.instance).second) {
      net_.set_timer(learner_, {TimerTag::Kind::deadline, a.instance, {}},
                     sc_.timing.instance_deadline);
    }
    learner_check(a.instance, false);
  }

  void learner_check(std::uint64_t instance, bool fired) {
    auto& ledger = ledgers_[instance];
    if (ledger.verdict) return;
    const bool past = deadline_passed_.contains(instance);
    const auto top = highest_tuples(ledger);
    const bool complete =
        !view_.alive.empty() && std::all_of(view_.alive.begin(), view_.alive.end(),
                                            [&](NodeId m) { return top.contains(m); });
    if (!complete && !fired && !past) return;

    const bool deadline = fired || past;
    const auto membership = view_.alive.size();
    const auto d = decide(ledger, membership, deadline, sc_.anomaly_policy);
    if (!is_final(d.verdict)) {
      if (fired && !past) {
        net_.log(verdict_record(instance, d.verdict, top.size(), membership, deadline));
        deadline_passed_.insert(instance);
      }
      return;
    }

    ledger.verdict = d.verdict;
    final_[instance] = d.verdict;
    net_.log(verdict_record(instance, d.verdict, top.size(), membership, deadline));
    if (const auto* c = std::get_if<ConsensusVerdict>(&d.verdict)) {
      net_.log(to_record(ClientResponse{instance, c->output}, learner_, client_));
    } else if (const auto* a = std::get_if<AnomalyVerdict>(&d.verdict)) {
      net_.log(anomaly_report_record(instance, *a, sc_.anomaly_policy));
      anomalies_.push_back({instance, *a});
    }
    if (d.minority_report) {
      net_.log(anomaly_report_record(instance, *d.minority_report, sc_.anomaly_policy));
      anomalies_.push_back({instance, *d.minority_report});
    }
  }

  // Membership service.

  void monitor_heartbeat(NodeId from) {
    // A heartbeat still in flight when its sender crashed.
    if (net_.crashed(from)) return;
    if (record_heartbeat(view_, from, net_.now()).rejoined) {
      Record r;
      r.kind = "Rejoin";
      r.add("node", from.value);
      net_.log(std::move(r));
      membership_changed();
    }
  }

  void detect() {
    const auto before = view_.alive;
    FailureReport report;
    try {
      report = detect_failures(view_, net_.now(), sc_.timing.suspect_after);
    } catch (const Error& e) {
      if (e.code() != Errc::empty_group) throw;
      for (const auto node : before) log_failure(node);
      Record r;
      r.kind = "Halt";
      r.add("reason", std::string(to_string(e.code())));
      net_.log(std::move(r));
      halted_ = true;
      return;
    }
    if (report.failed.empty()) return;
    for (const auto node : report.failed) log_failure(node);
    if (report.election) apply_election(*report.election);
    membership_changed();
  }

  void log_failure(NodeId node) {
    Record r;
    r.kind = "Failure";
    r.add("node", node.value);
    net_.log(std::move(r));
  }

  void membership_changed() {
    Record r;
    r.kind = "MembershipChange";
    r.add("epoch", view_.epoch).add("leader", view_.leader.value);
    r.add("alive", join_nodes(view_.alive));
    net_.log(std::move(r));

    const auto leader = view_.leader.value;
    handle(leader, on_membership_change(proposers_[leader], view_.alive));
    for (std::size_t i = 0; i < final_.size(); ++i) {
      if (ledgers_.contains(i)) learner_check(i, false);
    }
  }

  void apply_election(const Election& e) {
    Record r;
    r.kind = "Election";
    r.add("epoch", e.epoch).add("leader", e.leader.value);
    net_.log(std::move(r));
    ++elections_;

    for (std::uint32_t k = 0; k < n_; ++k) {
      if (NodeId{k} != e.leader) deactivate(proposers_[k]);
      acceptors_[k].known_epoch = std::max(acceptors_[k].known_epoch, e.epoch);
    }
    auto& p = proposers_[e.leader.value];
    const auto& acc = acceptors_[e.leader.value];
    if (acc.highest_promised) observe(p, *acc.highest_promised);
    if (acc.last_served) observe(p, *acc.last_served);
    activate(p, e.epoch, view_.alive);

    for (std::size_t i = 0; i < final_.size(); ++i) {
      if (!arrived_[i] || final_[i]) continue;
      Record rs;
      rs.kind = "ClientResubmit";
      rs.add("instance", i).add("to", e.leader.value);
      net_.log(std::move(rs));
      submit(ClientRequest{i, sc_.requests[i].payload});
    }
  }

  Report build_report(bool horizon_reached) const {
    Report report;
    report.scenario = sc_.name;
    report.seed = sc_.net.seed;
    const auto needed = majority_threshold(std::max<std::size_t>(view_.alive.size(), 1));
    for (std::size_t i = 0; i < final_.size(); ++i) {
      if (final_[i]) {
        report.verdicts.push_back(*final_[i]);
        continue;
      }
      std::size_t received = 0;
      if (const auto it = ledgers_.find(i); it != ledgers_.end()) {
        received = highest_tuples(it->second).size();
      }
      report.verdicts.push_back(InconclusiveVerdict{received, needed});
    }
    for (const auto& v : report.verdicts) {
      switch (v.index()) {
        case 0: ++report.counts.consensus; break;
        case 1: ++report.counts.anomaly; break;
        default: ++report.counts.inconclusive; break;
      }
    }
    report.counts.reproposals = reproposals_;
    report.counts.elections = elections_;
    report.counts.drops = net_.drops();
    report.final_membership = view_.alive;
    report.final_leader = view_.leader;
    report.final_epoch = view_.epoch;
    report.anomalies = anomalies_;
    report.horizon_reached = horizon_reached;
    report.halted = halted_;
    report.end_time = net_.now();
    return report;
  }

  const Scenario& sc_;
  StateMachineDef def_;
  std::size_t n_;
  NodeId learner_;
  NodeId monitor_;
  NodeId client_;
  EventLog log_;
  Network net_;

  std::vector<AcceptorState> acceptors_;
  std::vector<ProposerState> proposers_;
  MembershipView view_;

  std::map<std::uint64_t, InstanceLedger> ledgers_;
  std::set<std::uint64_t> deadline_armed_;
  std::set<std::uint64_t> deadline_passed_;
  std::vector<std::optional<Verdict>> final_;
  std::vector<bool> arrived_;
  std::vector<std::uint64_t> hb_seq_;
  std::vector<AnomalyDetail> anomalies_;

  std::size_t reproposals_ = 0;
  std::size_t elections_ = 0;
  SimTime activity_until_ = 0;
  bool settled_ = false;
  bool halted_ = false;
};

}  // namespace

RunResult run(const Scenario& scenario) {
  validate_scenario(scenario);
  Simulation sim(scenario, compile_machine(scenario));
  return sim.run();
}

}  // namespace paxad
