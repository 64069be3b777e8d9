#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>

#include "manet/mobility/trace.hpp"

namespace manet::harness {

/// Shortest fixed-point rendering with at least 6 decimals that parses back
/// to exactly `v`.
std::string format_ns2_number(double v);

/// NS-2 movement script: per node the X_/Y_/Z_ initial position, then one
/// `$ns_ at <t> "$node_(i) setdest <x> <y> <speed>"` per movement leg.
/// Pauses are implicit (no line until the next departure).
std::string export_ns2_trace(const mobility::MobilityTrace& trace);

class Ns2ParseError : public std::runtime_error {
 public:
  Ns2ParseError(std::size_t line, const std::string& what);
  /// 1-based; 0 for errors not tied to a line.
  [[nodiscard]] std::size_t line() const { return line_; }

 private:
  std::size_t line_;
};

/// Field and duration are not part of the grammar. Without a field the
/// bounding box of the waypoints is used; without a duration, the time of
/// the last arrival.
mobility::MobilityTrace import_ns2_trace(std::string_view text,
                                         std::optional<mobility::Field> field = std::nullopt,
                                         std::optional<SimTime> duration = std::nullopt);

/// Native trace file: JSON with the field, duration and every waypoint as
/// [time, x, y, speed]. Doubles are written with round-trip precision.
std::string trace_to_json(const mobility::MobilityTrace& trace);
mobility::MobilityTrace trace_from_json(std::string_view text);

}  // namespace manet::harness
