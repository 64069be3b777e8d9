#include "manet/metrics/metrics.hpp"

#include <algorithm>
#include <cstdio>
#include <ostream>
#include <string>

namespace manet::metrics {

std::string_view to_string(PacketFate fate) {
  switch (fate) {
    case PacketFate::in_flight:
      return "in-flight";
    case PacketFate::delivered:
      return "delivered";
    case PacketFate::dropped_no_route:
      return "no-route";
    case PacketFate::dropped_queue:
      return "queue";
    case PacketFate::dropped_ttl:
      return "ttl";
  }
  return "unknown";
}

namespace {

void write_line(std::ostream* log, char tag, SimTime at, std::uint64_t id, std::string_view rest) {
  if (log == nullptr) return;
  char buf[64];
  const int len = std::snprintf(buf, sizeof buf, "%c\t%.17g\t%llu", tag, at,
                                static_cast<unsigned long long>(id));
  log->write(buf, len);
  if (!rest.empty()) *log << '\t' << rest;
  *log << '\n';
}

}  // namespace

std::uint64_t PacketLedger::originate(NodeId src, NodeId dst, SimTime at) {
  if (src == dst) throw std::invalid_argument("PacketLedger: src == dst");
  const std::uint64_t id = entries_.size();
  entries_.push_back(LedgerEntry{traffic::Packet{id, src, dst, at, std::nullopt, 0}, PacketFate::in_flight});
  write_line(log_, 's', at, id, std::to_string(src) + "\t" + std::to_string(dst));
  return id;
}

void PacketLedger::deliver(std::uint64_t id, SimTime at) {
  LedgerEntry& e = entries_.at(id);
  if (e.fate != PacketFate::in_flight) throw std::logic_error("PacketLedger: packet already settled");
  if (at < e.packet.created_at) throw std::logic_error("PacketLedger: delivered before creation");
  e.fate = PacketFate::delivered;
  e.packet.delivered_at = at;
  write_line(log_, 'r', at, id, std::to_string(e.packet.hops));
}

void PacketLedger::drop(std::uint64_t id, PacketFate cause, SimTime at) {
  LedgerEntry& e = entries_.at(id);
  if (e.fate != PacketFate::in_flight) throw std::logic_error("PacketLedger: packet already settled");
  if (cause == PacketFate::in_flight || cause == PacketFate::delivered) {
    throw std::invalid_argument("PacketLedger: not a drop cause");
  }
  e.fate = cause;
  write_line(log_, 'D', at, id, to_string(cause));
}

double compute_pdf(const PacketLedger& ledger) {
  if (ledger.size() == 0) throw NoTrafficError();
  const auto delivered = std::count_if(ledger.entries().begin(), ledger.entries().end(),
                                       [](const LedgerEntry& e) { return e.fate == PacketFate::delivered; });
  return static_cast<double>(delivered) / static_cast<double>(ledger.size());
}

double compute_avg_delay(const PacketLedger& ledger) {
  double sum = 0.0;
  std::uint64_t n = 0;
  for (const LedgerEntry& e : ledger.entries()) {
    if (e.fate != PacketFate::delivered) continue;
    sum += *e.packet.delivered_at - e.packet.created_at;
    ++n;
  }
  if (n == 0) throw UndefinedDelayError();
  return sum / static_cast<double>(n);
}

DeliveryStats summarize(const PacketLedger& ledger) {
  DeliveryStats s;
  s.originated = ledger.size();
  for (const LedgerEntry& e : ledger.entries()) {
    switch (e.fate) {
      case PacketFate::in_flight:
        ++s.in_flight;
        break;
      case PacketFate::delivered:
        ++s.delivered;
        break;
      case PacketFate::dropped_no_route:
        ++s.drops.no_route;
        break;
      case PacketFate::dropped_queue:
        ++s.drops.queue;
        break;
      case PacketFate::dropped_ttl:
        ++s.drops.ttl;
        break;
    }
  }
  s.pdf = compute_pdf(ledger);
  if (s.delivered > 0) s.avg_delay = compute_avg_delay(ledger);
  return s;
}

LoadAverage aggregate_over_speeds(const std::map<double, SpeedCell>& by_speed,
                                  std::span<const double> speeds) {
  if (speeds.empty()) throw std::invalid_argument("aggregate_over_speeds: no speeds requested");
  std::vector<double> order(speeds.begin(), speeds.end());
  std::sort(order.begin(), order.end());
  double pdf_sum = 0.0;
  double delay_sum = 0.0;
  bool delay_defined = true;
  for (double v : order) {
    auto it = by_speed.find(v);
    if (it == by_speed.end()) {
      throw std::invalid_argument("aggregate_over_speeds: missing speed " + std::to_string(v));
    }
    pdf_sum += it->second.pdf;
    if (it->second.avg_delay) {
      delay_sum += *it->second.avg_delay;
    } else {
      delay_defined = false;
    }
  }
  const double n = static_cast<double>(order.size());
  LoadAverage out;
  out.pdf = pdf_sum / n;
  if (delay_defined) out.avg_delay = delay_sum / n;
  return out;
}

}  // namespace manet::metrics
