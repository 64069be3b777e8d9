#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <map>
#include <optional>
#include <span>
#include <stdexcept>
#include <string_view>
#include <vector>

#include "manet/traffic/cbr.hpp"

namespace manet::metrics {

enum class PacketFate : std::uint8_t {
  in_flight,
  delivered,
  dropped_no_route,
  dropped_queue,
  dropped_ttl,
};

std::string_view to_string(PacketFate fate);

struct LedgerEntry {
  traffic::Packet packet;
  PacketFate fate = PacketFate::in_flight;
};

/// Every data packet originated during a run, indexed by its dense id.
///
/// When a log stream is attached, each transition is also written as a
/// tab-separated line (`s`, `r` or `D`, then time and packet id) that can be
/// replayed independently of the ledger.
class PacketLedger {
 public:
  std::uint64_t originate(NodeId src, NodeId dst, SimTime at);
  void deliver(std::uint64_t id, SimTime at);
  void drop(std::uint64_t id, PacketFate cause, SimTime at);

  traffic::Packet& packet(std::uint64_t id) { return entries_.at(id).packet; }
  [[nodiscard]] const std::vector<LedgerEntry>& entries() const { return entries_; }
  [[nodiscard]] std::size_t size() const { return entries_.size(); }

  void set_log(std::ostream* log) { log_ = log; }

 private:
  std::vector<LedgerEntry> entries_;
  std::ostream* log_ = nullptr;
};

class NoTrafficError : public std::runtime_error {
 public:
  NoTrafficError() : std::runtime_error("no packets were originated") {}
};

class UndefinedDelayError : public std::runtime_error {
 public:
  UndefinedDelayError() : std::runtime_error("no packets were delivered; delay is undefined") {}
};

struct DropBreakdown {
  std::uint64_t no_route = 0;
  std::uint64_t queue = 0;
  std::uint64_t ttl = 0;

  [[nodiscard]] std::uint64_t total() const { return no_route + queue + ttl; }
  friend bool operator==(const DropBreakdown&, const DropBreakdown&) = default;
};

struct DeliveryStats {
  std::uint64_t originated = 0;
  std::uint64_t delivered = 0;
  std::uint64_t in_flight = 0;
  DropBreakdown drops;
  double pdf = 0.0;
  /// Empty when nothing was delivered.
  std::optional<double> avg_delay;

  friend bool operator==(const DeliveryStats&, const DeliveryStats&) = default;
};

/// delivered / originated. Throws NoTrafficError on an empty ledger.
double compute_pdf(const PacketLedger& ledger);

/// Mean of (delivered_at - created_at) over delivered packets only.
/// Throws UndefinedDelayError if none was delivered.
double compute_avg_delay(const PacketLedger& ledger);

/// Counts by fate plus both metrics. Throws NoTrafficError on an empty ledger.
DeliveryStats summarize(const PacketLedger& ledger);

struct SpeedCell {
  double pdf = 0.0;
  std::optional<double> avg_delay;
};

struct LoadAverage {
  double pdf = 0.0;
  /// Empty if any speed had an undefined delay.
  std::optional<double> avg_delay;
};

/// Arithmetic mean over the required speeds, taken in ascending speed order.
/// Throws std::invalid_argument when a required speed is missing.
LoadAverage aggregate_over_speeds(const std::map<double, SpeedCell>& by_speed,
                                  std::span<const double> speeds);

}  // namespace manet::metrics
