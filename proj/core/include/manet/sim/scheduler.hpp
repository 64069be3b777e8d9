#pragma once

#include <array>
#include <cstdint>
#include <functional>
#include <iosfwd>
#include <limits>
#include <string_view>
#include <unordered_set>
#include <vector>

namespace manet {

/// Simulation time in seconds.
using SimTime = double;

/// Dense node index, 0..n-1.
using NodeId = std::uint32_t;

inline constexpr NodeId kGlobalTarget = std::numeric_limits<NodeId>::max();

}  // namespace manet

namespace manet::sim {

enum class EventKind : std::uint8_t {
  mobility_update,
  periodic_advertisement,
  triggered_advertisement,
  packet_send,
  packet_receive,
  packet_timeout,
  metric_sample,
};

inline constexpr std::size_t kEventKindCount = 7;

std::string_view to_string(EventKind kind);

struct EventHandle {
  std::uint64_t seq = 0;
  friend bool operator==(EventHandle, EventHandle) = default;
};

struct RunStats {
  std::uint64_t dispatched = 0;
  std::uint64_t cancelled_skipped = 0;
  std::array<std::uint64_t, kEventKindCount> by_kind{};
};

/// Discrete-event queue and run loop.
///
/// Events fire in (fire_at, seq) order where seq is the insertion counter, so
/// equal-time events run in the order they were scheduled. Single-threaded.
class Scheduler {
 public:
  using Action = std::function<void()>;

  Scheduler() = default;
  Scheduler(const Scheduler&) = delete;
  Scheduler& operator=(const Scheduler&) = delete;

  /// Throws std::logic_error if `at` lies before now().
  EventHandle schedule(SimTime at, NodeId target, EventKind kind, Action action);

  EventHandle schedule_in(SimTime delay, NodeId target, EventKind kind, Action action) {
    return schedule(now_ + delay, target, kind, std::move(action));
  }

  /// Returns false if the event already fired or was cancelled.
  bool cancel(EventHandle handle);

  /// Dispatches every event with fire_at <= until, then sets the clock to until.
  RunStats run(SimTime until);

  [[nodiscard]] SimTime now() const { return now_; }
  [[nodiscard]] std::size_t pending() const { return heap_.size() - cancelled_.size(); }
  [[nodiscard]] const RunStats& totals() const { return totals_; }

  /// One line per dispatched event: `time<TAB>seq<TAB>target<TAB>kind`.
  /// Pass nullptr to disable.
  void set_event_log(std::ostream* log) { log_ = log; }

 private:
  struct Entry {
    SimTime at;
    std::uint64_t seq;
    NodeId target;
    EventKind kind;
    Action action;
  };
  struct Later {
    bool operator()(const Entry& a, const Entry& b) const {
      if (a.at != b.at) return a.at > b.at;
      return a.seq > b.seq;
    }
  };

  void log_event(const Entry& e);

  std::vector<Entry> heap_;
  std::unordered_set<std::uint64_t> cancelled_;
  std::unordered_set<std::uint64_t> live_;
  SimTime now_ = 0.0;
  std::uint64_t next_seq_ = 0;
  RunStats totals_;
  std::ostream* log_ = nullptr;
};

}  // namespace manet::sim
