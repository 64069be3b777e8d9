#include "manet/harness/ns2_trace.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <regex>
#include <sstream>

#include "json.hpp"

namespace manet::harness {

using mobility::Position;
using mobility::Waypoint;

std::string format_ns2_number(double v) {
  char buf[512];
  for (int prec = 6; prec <= 40; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*f", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

std::string export_ns2_trace(const mobility::MobilityTrace& trace) {
  std::string out;
  for (NodeId i = 0; i < trace.node_count(); ++i) {
    const auto wps = trace.waypoints(i);
    const std::string node = "$node_(" + std::to_string(i) + ")";
    out += node + " set X_ " + format_ns2_number(wps.front().pos.x) + "\n";
    out += node + " set Y_ " + format_ns2_number(wps.front().pos.y) + "\n";
    out += node + " set Z_ 0.0\n";
  }
  for (NodeId i = 0; i < trace.node_count(); ++i) {
    const auto wps = trace.waypoints(i);
    for (std::size_t k = 1; k < wps.size(); ++k) {
      const Waypoint& a = wps[k - 1];
      const Waypoint& b = wps[k];
      const double dist = mobility::distance(a.pos, b.pos);
      if (dist == 0.0) continue;  // pause
      const double speed = dist / (b.time - a.time);
      out += "$ns_ at " + format_ns2_number(a.time) + " \"$node_(" + std::to_string(i) +
             ") setdest " + format_ns2_number(b.pos.x) + " " + format_ns2_number(b.pos.y) + " " +
             format_ns2_number(speed) + "\"\n";
    }
  }
  return out;
}

Ns2ParseError::Ns2ParseError(std::size_t line, const std::string& what)
    : std::runtime_error(line > 0 ? "ns2 trace line " + std::to_string(line) + ": " + what
                                  : "ns2 trace: " + what),
      line_(line) {}

namespace {

struct SetDest {
  SimTime at;
  Position to;
  double speed;
  std::size_t line;
};

struct NodeScript {
  std::optional<double> x;
  std::optional<double> y;
  std::size_t first_line = 0;
  std::vector<SetDest> moves;
};

double parse_number(const std::string& s, std::size_t line) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (s.empty() || end != s.c_str() + s.size() || !std::isfinite(v)) {
    throw Ns2ParseError(line, "bad number '" + s + "'");
  }
  return v;
}

NodeId parse_node(const std::string& s, std::size_t line) {
  const unsigned long long v = std::strtoull(s.c_str(), nullptr, 10);
  if (s.size() > 9) throw Ns2ParseError(line, "node id out of range");
  return static_cast<NodeId>(v);
}

}  // namespace

mobility::MobilityTrace import_ns2_trace(std::string_view text, std::optional<mobility::Field> field,
                                         std::optional<SimTime> duration) {
  static const std::regex set_re(R"re(^\s*\$node_\((\d+)\)\s+set\s+([XYZ])_\s+(\S+)\s*$)re");
  static const std::regex at_re(
      R"re(^\s*\$ns_\s+at\s+(\S+)\s+"\s*\$node_\((\d+)\)\s+setdest\s+([^"]*)"\s*$)re");

  std::map<NodeId, NodeScript> scripts;
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    if (!raw.empty() && raw.back() == '\r') raw.pop_back();
    const auto first = raw.find_first_not_of(" \t");
    if (first == std::string::npos || raw[first] == '#') continue;

    std::smatch m;
    if (std::regex_match(raw, m, set_re)) {
      const NodeId node = parse_node(m[1], line_no);
      const double v = parse_number(m[3], line_no);
      auto& s = scripts[node];
      if (s.first_line == 0) s.first_line = line_no;
      if (m[2] == "X") s.x = v;
      if (m[2] == "Y") s.y = v;
      continue;
    }
    if (std::regex_match(raw, m, at_re)) {
      const double at = parse_number(m[1], line_no);
      const NodeId node = parse_node(m[2], line_no);
      std::istringstream args(m[3].str());
      std::vector<std::string> parts;
      for (std::string tok; args >> tok;) parts.push_back(tok);
      if (parts.size() != 3) {
        throw Ns2ParseError(line_no, "setdest needs 3 arguments, got " + std::to_string(parts.size()));
      }
      SetDest d{at, {parse_number(parts[0], line_no), parse_number(parts[1], line_no)},
                parse_number(parts[2], line_no), line_no};
      if (at < 0.0) throw Ns2ParseError(line_no, "negative time");
      if (d.speed < 0.0) throw Ns2ParseError(line_no, "negative speed");
      auto& s = scripts[node];
      if (s.first_line == 0) s.first_line = line_no;
      s.moves.push_back(d);
      continue;
    }
    throw Ns2ParseError(line_no, "unrecognised line");
  }
  if (scripts.empty()) throw Ns2ParseError(0, "empty input");

  const std::size_t n = scripts.rbegin()->first + 1;
  if (scripts.size() != n) throw Ns2ParseError(0, "node ids are not dense from 0");

  std::vector<std::vector<Waypoint>> nodes(n);
  for (auto& [id, s] : scripts) {
    if (!s.x || !s.y) throw Ns2ParseError(s.first_line, "node " + std::to_string(id) + " has no initial X_/Y_");
    auto& wps = nodes[id];
    wps.push_back({0.0, {*s.x, *s.y}, 0.0});
    std::stable_sort(s.moves.begin(), s.moves.end(),
                     [](const SetDest& a, const SetDest& b) { return a.at < b.at; });
    for (const SetDest& d : s.moves) {
      Waypoint& last = wps.back();
      if (d.at < last.time) {
        // New destination while still moving: cut the current leg short.
        const Waypoint& prev = wps[wps.size() - 2];
        const double f = (d.at - prev.time) / (last.time - prev.time);
        last.pos = {prev.pos.x + (last.pos.x - prev.pos.x) * f, prev.pos.y + (last.pos.y - prev.pos.y) * f};
        last.time = d.at;
        if (last.time == prev.time) wps.pop_back();
      }
      const Position from = wps.back().pos;
      const double dist = mobility::distance(from, d.to);
      if (dist == 0.0) continue;
      if (d.speed == 0.0) throw Ns2ParseError(d.line, "zero speed towards a different point");
      if (d.at > wps.back().time) wps.push_back({d.at, from, 0.0});
      wps.push_back({d.at + dist / d.speed, d.to, d.speed});
    }
  }

  if (!duration) {
    SimTime last = 0.0;
    for (const auto& wps : nodes) last = std::max(last, wps.back().time);
    if (!(last > 0.0)) throw Ns2ParseError(0, "no movement; a duration must be given");
    duration = last;
  }
  if (!field) {
    double w = 1.0;
    double h = 1.0;
    for (const auto& wps : nodes) {
      for (const auto& wp : wps) {
        w = std::max(w, wp.pos.x);
        h = std::max(h, wp.pos.y);
      }
    }
    field = mobility::Field{w, h, 0.0};
  }
  try {
    return mobility::make_trace(*field, *duration, std::move(nodes));
  } catch (const std::invalid_argument& e) {
    throw Ns2ParseError(0, e.what());
  }
}

std::string trace_to_json(const mobility::MobilityTrace& trace) {
  nlohmann::json j;
  j["field"] = {{"width", trace.field().width},
                {"height", trace.field().height},
                {"edge_margin", trace.field().edge_margin}};
  j["duration"] = trace.duration();
  auto& nodes = j["nodes"] = nlohmann::json::array();
  for (NodeId i = 0; i < trace.node_count(); ++i) {
    auto arr = nlohmann::json::array();
    for (const auto& w : trace.waypoints(i)) arr.push_back({w.time, w.pos.x, w.pos.y, w.speed});
    nodes.push_back(std::move(arr));
  }
  return j.dump() + "\n";
}

mobility::MobilityTrace trace_from_json(std::string_view text) {
  try {
    const auto j = nlohmann::json::parse(text);
    const auto& f = j.at("field");
    mobility::Field field{f.at("width").get<double>(), f.at("height").get<double>(),
                          f.at("edge_margin").get<double>()};
    std::vector<std::vector<Waypoint>> nodes;
    for (const auto& arr : j.at("nodes")) {
      auto& wps = nodes.emplace_back();
      for (const auto& w : arr) {
        if (w.size() != 4) throw std::invalid_argument("trace json: waypoint needs 4 numbers");
        wps.push_back({w[0].get<double>(), {w[1].get<double>(), w[2].get<double>()}, w[3].get<double>()});
      }
    }
    return mobility::MobilityTrace(field, j.at("duration").get<double>(), std::move(nodes));
  } catch (const nlohmann::json::exception& e) {
    throw std::invalid_argument(std::string("trace json: ") + e.what());
  }
}

}  // namespace manet::harness
