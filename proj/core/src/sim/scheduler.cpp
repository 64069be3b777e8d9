#include "manet/sim/scheduler.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>
#include <stdexcept>
#include <string>

namespace manet::sim {

std::string_view to_string(EventKind kind) {
  switch (kind) {
    case EventKind::mobility_update:
      return "mobility-update";
    case EventKind::periodic_advertisement:
      return "periodic-advertisement";
    case EventKind::triggered_advertisement:
      return "triggered-advertisement";
    case EventKind::packet_send:
      return "packet-send";
    case EventKind::packet_receive:
      return "packet-receive";
    case EventKind::packet_timeout:
      return "packet-timeout";
    case EventKind::metric_sample:
      return "metric-sample";
  }
  return "unknown";
}

EventHandle Scheduler::schedule(SimTime at, NodeId target, EventKind kind, Action action) {
  if (!std::isfinite(at) || at < now_) {
    throw std::logic_error("Scheduler::schedule: event at t=" + std::to_string(at) +
                           " lies before the clock t=" + std::to_string(now_));
  }
  const std::uint64_t seq = next_seq_++;
  heap_.push_back(Entry{at, seq, target, kind, std::move(action)});
  std::push_heap(heap_.begin(), heap_.end(), Later{});
  live_.insert(seq);
  return EventHandle{seq};
}

bool Scheduler::cancel(EventHandle handle) {
  if (live_.erase(handle.seq) == 0) return false;
  cancelled_.insert(handle.seq);
  return true;
}

RunStats Scheduler::run(SimTime until) {
  if (!(until > 0.0)) throw std::invalid_argument("Scheduler::run: until must be > 0");
  if (until < now_) throw std::logic_error("Scheduler::run: until lies before the clock");

  RunStats stats;
  while (!heap_.empty() && heap_.front().at <= until) {
    std::pop_heap(heap_.begin(), heap_.end(), Later{});
    Entry e = std::move(heap_.back());
    heap_.pop_back();
    if (cancelled_.erase(e.seq) != 0) {
      ++stats.cancelled_skipped;
      continue;
    }
    live_.erase(e.seq);
    now_ = e.at;
    ++stats.dispatched;
    ++stats.by_kind[static_cast<std::size_t>(e.kind)];
    if (log_ != nullptr) log_event(e);
    e.action();
  }
  now_ = until;

  totals_.dispatched += stats.dispatched;
  totals_.cancelled_skipped += stats.cancelled_skipped;
  for (std::size_t i = 0; i < kEventKindCount; ++i) totals_.by_kind[i] += stats.by_kind[i];
  return stats;
}

void Scheduler::log_event(const Entry& e) {
  char buf[96];
  int len;
  if (e.target == kGlobalTarget) {
    len = std::snprintf(buf, sizeof buf, "%.9f\t%llu\tglobal\t", e.at,
                        static_cast<unsigned long long>(e.seq));
  } else {
    len = std::snprintf(buf, sizeof buf, "%.9f\t%llu\t%u\t", e.at,
                        static_cast<unsigned long long>(e.seq), e.target);
  }
  log_->write(buf, len);
  *log_ << to_string(e.kind) << '\n';
}

}  // namespace manet::sim
