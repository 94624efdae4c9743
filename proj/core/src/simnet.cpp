#include "paxad/simnet.hpp"

#include <algorithm>
#include <ostream>
#include <sstream>

#include "paxad/errors.hpp"

namespace paxad {

void EventLog::write(std::ostream& os) const {
  for (const auto& line : lines_) os << line << '\n';
}

std::string EventLog::text() const {
  std::ostringstream os;
  write(os);
  return os.str();
}

Network::Network(NetConfig config, std::size_t fault_targets, EventLog& log)
    : config_(config), fault_targets_(fault_targets), log_(log), rng_(config.seed) {}

void Network::schedule(SimTime at, decltype(Event::body) body) {
  queue_.push(Event{at, next_seq_++, std::move(body)});
}

std::optional<SimTime> Network::send(const Packet& packet, NodeId from, NodeId to) {
  const double u = static_cast<double>(rng_() >> 11) * 0x1.0p-53;
  const std::uint64_t jitter_draw = rng_();
  if (u < config_.loss_rate) {
    Record r = to_record(packet, from, to);
    r.fields.insert(r.fields.begin(), {"packet", r.kind});
    r.kind = "Drop";
    log(std::move(r));
    ++drops_;
    return std::nullopt;
  }
  const SimTime at = now_ + config_.base_delay + jitter_draw % (config_.jitter + 1);
  schedule(at, Deliver{packet, from, to});
  return at;
}

void Network::set_timer(NodeId owner, TimerTag tag, SimTime delay) {
  schedule(now_ + delay, TimerFire{owner, tag});
}

void Network::inject(const FaultSpec& f) {
  if (f.target.value >= fault_targets_) {
    throw Error(Errc::unknown_node, "fault targets undeclared node " + to_string(f.target));
  }
  if (f.at < now_) throw Error(Errc::validation_error, "fault scheduled in the past");
  schedule(f.at, FaultEvent{f});
}

void Network::arrive(SimTime at, ClientRequest request) {
  schedule(std::max(at, now_), ClientArrival{std::move(request)});
}

std::optional<SimTime> Network::next_time() const {
  if (queue_.empty()) return std::nullopt;
  return queue_.top().time;
}

void Network::log(Record record) {
  record.time = now_;
  record.seq = current_seq_;
  log_.append(record);
}

void Network::step(EventHandler& handler) {
  if (queue_.empty()) throw Error(Errc::queue_empty, "step on an empty event queue");
  Event event = queue_.top();
  queue_.pop();
  now_ = event.time;
  current_seq_ = event.seq;

  if (auto* d = std::get_if<Deliver>(&event.body)) {
    if (crashed(d->to)) {
      Record r = to_record(d->packet, d->from, d->to);
      r.fields.insert(r.fields.begin(), {"packet", r.kind});
      r.kind = "DiscardCrashed";
      log(std::move(r));
      return;
    }
    handler.on_deliver(*d);
  } else if (auto* t = std::get_if<TimerFire>(&event.body)) {
    if (!crashed(t->owner)) handler.on_timer(*t);
  } else if (auto* f = std::get_if<FaultEvent>(&event.body)) {
    if (f->fault.kind == FaultKind::crash) crashed_.insert(f->fault.target);
    handler.on_fault(f->fault);
  } else if (auto* a = std::get_if<ClientArrival>(&event.body)) {
    handler.on_arrival(a->request);
  }
}

SimTime Network::run_until(EventHandler& handler, SimTime horizon) {
  while (!queue_.empty() && queue_.top().time <= horizon) step(handler);
  return now_;
}

SimTime Network::run_to_quiescence(EventHandler& handler) {
  while (!queue_.empty()) step(handler);
  return now_;
}

}  // namespace paxad
