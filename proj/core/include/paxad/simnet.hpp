#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <queue>
#include <random>
#include <set>
#include <string>
#include <variant>
#include <vector>

#include "paxad/messages.hpp"
#include "paxad/record.hpp"

namespace paxad {

struct NetConfig {
  std::uint64_t seed = 1;
  SimTime base_delay = 1;
  SimTime jitter = 0;  // extra delay drawn uniformly from [0, jitter]
  double loss_rate = 0.0;
};

enum class FaultKind { crash, compromise };

struct FaultSpec {
  SimTime at = 0;
  NodeId target;
  FaultKind kind = FaultKind::crash;
  std::map<std::string, std::string> overrides;  // compromise only
};

struct TimerTag {
  enum class Kind { heartbeat, detect, prepare_timeout, accept_timeout, deadline };

  Kind kind = Kind::heartbeat;
  std::uint64_t instance = 0;
  ProposalNumber n;
};

struct Deliver {
  Packet packet;
  NodeId from;
  NodeId to;
};

struct TimerFire {
  NodeId owner;
  TimerTag tag;
};

struct FaultEvent {
  FaultSpec fault;
};

struct ClientArrival {
  ClientRequest request;
};

struct Event {
  SimTime time = 0;
  std::uint64_t seq = 0;
  std::variant<Deliver, TimerFire, FaultEvent, ClientArrival> body;
};

/// Append-only, line-per-record event log.
class EventLog {
 public:
  void append(const Record& record) { lines_.push_back(format_record(record)); }
  const std::vector<std::string>& lines() const noexcept { return lines_; }
  std::size_t size() const noexcept { return lines_.size(); }
  void write(std::ostream& os) const;
  std::string text() const;

 private:
  std::vector<std::string> lines_;
};

class EventHandler {
 public:
  virtual ~EventHandler() = default;
  virtual void on_deliver(const Deliver& d) = 0;
  virtual void on_timer(const TimerFire& t) = 0;
  virtual void on_fault(const FaultSpec& f) = 0;
  virtual void on_arrival(const ClientRequest& r) = 0;
};

/// Deterministic discrete-event network.
///
/// Events run in strict (time, seq) order; seq is assigned when an event is
/// scheduled. All randomness comes from one generator seeded from NetConfig,
/// and it is drawn only inside send(): exactly one loss draw followed by one
/// jitter draw per call, in call order.
class Network {
 public:
  // `fault_targets`: number of nodes that faults may address (ids 0..n-1).
  Network(NetConfig config, std::size_t fault_targets, EventLog& log);

  SimTime now() const noexcept { return now_; }
  std::uint64_t current_seq() const noexcept { return current_seq_; }
  const NetConfig& config() const noexcept { return config_; }

  // Schedules delivery, or drops and logs `kind=Drop`. Returns the delivery
  // time when scheduled.
  std::optional<SimTime> send(const Packet& packet, NodeId from, NodeId to);
  void set_timer(NodeId owner, TimerTag tag, SimTime delay);
  // Throws Error(unknown_node) or Error(validation_error) when f.at < now().
  void inject(const FaultSpec& f);
  void arrive(SimTime at, ClientRequest request);

  bool crashed(NodeId node) const { return crashed_.contains(node); }
  std::size_t drops() const noexcept { return drops_; }
  bool empty() const noexcept { return queue_.empty(); }
  std::size_t pending() const noexcept { return queue_.size(); }
  std::optional<SimTime> next_time() const;

  // Stamps the record with the current (time, seq) and appends it.
  void log(Record record);

  // Removes the earliest event and dispatches it. Deliveries and timers for
  // crashed nodes are discarded. Throws Error(queue_empty).
  void step(EventHandler& handler);
  // Processes every event with time <= horizon; returns the final time.
  SimTime run_until(EventHandler& handler, SimTime horizon);
  SimTime run_to_quiescence(EventHandler& handler);

 private:
  struct Later {
    bool operator()(const Event& a, const Event& b) const {
      return a.time != b.time ? a.time > b.time : a.seq > b.seq;
    }
  };

  void schedule(SimTime at, decltype(Event::body) body);

  NetConfig config_;
  std::size_t fault_targets_;
  EventLog& log_;
  std::mt19937_64 rng_;
  std::priority_queue<Event, std::vector<Event>, Later> queue_;
  std::set<NodeId> crashed_;
  SimTime now_ = 0;
  std::uint64_t current_seq_ = 0;
  std::uint64_t next_seq_ = 1;
  std::size_t drops_ = 0;
};

}  // namespace paxad
