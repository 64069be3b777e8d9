#include "manet/harness/scenario.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "manet/harness/network.hpp"
#include "manet/harness/ns2_trace.hpp"

namespace manet::harness {

using nlohmann::json;

std::string_view to_string(MobilityModel model) {
  switch (model) {
    case MobilityModel::random_waypoint:
      return "rwp";
    case MobilityModel::rpgm:
      return "rpgm";
    case MobilityModel::gauss_markov:
      return "gauss_markov";
    case MobilityModel::manhattan:
      return "manhattan";
    case MobilityModel::external_trace:
      return "trace";
  }
  return "unknown";
}

std::optional<MobilityModel> parse_model(std::string_view name) {
  if (name == "rwp" || name == "random_waypoint") return MobilityModel::random_waypoint;
  if (name == "rpgm") return MobilityModel::rpgm;
  if (name == "gauss_markov" || name == "gm") return MobilityModel::gauss_markov;
  if (name == "manhattan") return MobilityModel::manhattan;
  if (name == "trace") return MobilityModel::external_trace;
  return std::nullopt;
}

void ScenarioConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("ScenarioConfig: " + what); };
  if (n_nodes < 2) fail("n_nodes must be >= 2");
  field.validate();
  if (!(duration > 0.0)) fail("duration must be > 0");
  if (!(pause >= 0.0)) fail("pause must be >= 0");
  if (!(v_max > 0.0)) fail("v_max must be > 0");
  if (!(load > 0.0)) fail("load must be > 0");
  cbr_config().validate();
  radio.validate();
  dsdv.validate();
  switch (model) {
    case MobilityModel::random_waypoint:
      rwp_config().validate();
      break;
    case MobilityModel::rpgm:
      rpgm_config().validate();
      if (rpgm.group_count > n_nodes) fail("rpgm.group_count exceeds n_nodes");
      break;
    case MobilityModel::gauss_markov:
      gauss_markov_config().validate();
      break;
    case MobilityModel::manhattan:
      manhattan_config().validate();
      break;
    case MobilityModel::external_trace:
      if (trace_file.empty()) fail("model 'trace' needs trace_file");
      break;
  }
}

mobility::RwpConfig ScenarioConfig::rwp_config() const { return {v_max, pause}; }

mobility::RpgmConfig ScenarioConfig::rpgm_config() const {
  mobility::RpgmConfig c;
  c.group_count = rpgm.group_count;
  c.sdr = rpgm.sdr;
  c.adr = rpgm.adr;
  c.max_speed = v_max;
  c.max_angle = rpgm.max_angle;
  c.member_spread = rpgm.member_spread;
  c.leader_pause = pause;
  c.update_interval = rpgm.update_interval;
  return c;
}

mobility::GaussMarkovConfig ScenarioConfig::gauss_markov_config() const {
  mobility::GaussMarkovConfig c;
  c.alpha = gauss_markov.alpha;
  c.mean_speed = gauss_markov.mean_speed_ratio * v_max;
  c.sigma_speed = gauss_markov.sigma_speed_ratio * v_max;
  c.sigma_direction = gauss_markov.sigma_direction;
  c.update_interval = gauss_markov.update_interval;
  c.max_speed = v_max;
  return c;
}

mobility::ManhattanConfig ScenarioConfig::manhattan_config() const {
  mobility::ManhattanConfig c;
  c.horizontal_streets = manhattan.horizontal_streets;
  c.vertical_streets = manhattan.vertical_streets;
  c.v_max = v_max;
  c.min_headway = manhattan.min_headway;
  c.update_interval = manhattan.update_interval;
  c.accel_ratio = manhattan.accel_ratio;
  return c;
}

traffic::CbrConfig ScenarioConfig::cbr_config() const {
  traffic::CbrConfig c;
  c.pair_count = pair_count;
  c.rate = load;
  c.packet_size = packet_size;
  return c;
}

namespace {

json to_json_value(const ScenarioConfig& c) {
  json j;
  j["model"] = std::string(to_string(c.model));
  j["n_nodes"] = c.n_nodes;
  j["field"] = {{"width", c.field.width}, {"height", c.field.height}, {"edge_margin", c.field.edge_margin}};
  j["duration"] = c.duration;
  j["pause"] = c.pause;
  j["v_max"] = c.v_max;
  j["load"] = c.load;
  j["pair_count"] = c.pair_count;
  j["packet_size"] = c.packet_size;
  j["rpgm"] = {{"group_count", c.rpgm.group_count}, {"sdr", c.rpgm.sdr},
               {"adr", c.rpgm.adr},                 {"max_angle", c.rpgm.max_angle},
               {"member_spread", c.rpgm.member_spread}, {"update_interval", c.rpgm.update_interval}};
  j["gauss_markov"] = {{"alpha", c.gauss_markov.alpha},
                       {"mean_speed_ratio", c.gauss_markov.mean_speed_ratio},
                       {"sigma_speed_ratio", c.gauss_markov.sigma_speed_ratio},
                       {"sigma_direction", c.gauss_markov.sigma_direction},
                       {"update_interval", c.gauss_markov.update_interval}};
  j["manhattan"] = {{"horizontal_streets", c.manhattan.horizontal_streets},
                    {"vertical_streets", c.manhattan.vertical_streets},
                    {"min_headway", c.manhattan.min_headway},
                    {"update_interval", c.manhattan.update_interval},
                    {"accel_ratio", c.manhattan.accel_ratio}};
  j["radio"] = {{"range", c.radio.range},
                {"bandwidth", c.radio.bandwidth},
                {"queue_capacity", c.radio.queue_capacity},
                {"processing_delay", c.radio.processing_delay}};
  j["dsdv"] = {{"periodic_interval", c.dsdv.periodic_interval},
               {"jitter", c.dsdv.jitter},
               {"pending_packet_buffer", c.dsdv.pending_packet_buffer},
               {"pending_timeout", c.dsdv.pending_timeout},
               {"ttl", c.dsdv.ttl}};
  j["trace_file"] = c.trace_file;
  j["seed"] = c.seed;
  return j;
}

// Copies j[key] into out if present, rejecting unknown keys.
class Overlay {
 public:
  Overlay(const json& j, std::string prefix) : j_(j), prefix_(std::move(prefix)) {
    if (!j_.is_object()) throw std::invalid_argument("config: '" + prefix_ + "' must be an object");
  }
  template <typename T>
  Overlay& take(const char* key, T& out) {
    seen_.push_back(key);
    if (auto it = j_.find(key); it != j_.end()) {
      try {
        out = it->get<T>();
      } catch (const json::exception& e) {
        throw std::invalid_argument("config: bad value for '" + prefix_ + key + "': " + e.what());
      }
    }
    return *this;
  }
  template <typename F>
  Overlay& nested(const char* key, F&& apply) {
    seen_.push_back(key);
    if (auto it = j_.find(key); it != j_.end()) {
      Overlay sub(*it, prefix_ + key + ".");
      apply(sub);
      sub.finish();
    }
    return *this;
  }
  void finish() const {
    for (auto it = j_.begin(); it != j_.end(); ++it) {
      if (std::find(seen_.begin(), seen_.end(), it.key()) == seen_.end()) {
        throw std::invalid_argument("config: unknown key '" + prefix_ + it.key() + "'");
      }
    }
  }

 private:
  const json& j_;
  std::string prefix_;
  std::vector<std::string> seen_;
};

}  // namespace

std::string to_json(const ScenarioConfig& cfg) { return to_json_value(cfg).dump(); }

void apply_json(ScenarioConfig& cfg, std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  std::string model = std::string(to_string(cfg.model));
  Overlay root(j, "");
  root.take("model", model)
      .take("n_nodes", cfg.n_nodes)
      .nested("field",
              [&](Overlay& o) {
                o.take("width", cfg.field.width)
                    .take("height", cfg.field.height)
                    .take("edge_margin", cfg.field.edge_margin);
              })
      .take("duration", cfg.duration)
      .take("pause", cfg.pause)
      .take("v_max", cfg.v_max)
      .take("load", cfg.load)
      .take("pair_count", cfg.pair_count)
      .take("packet_size", cfg.packet_size)
      .nested("rpgm",
              [&](Overlay& o) {
                o.take("group_count", cfg.rpgm.group_count)
                    .take("sdr", cfg.rpgm.sdr)
                    .take("adr", cfg.rpgm.adr)
                    .take("max_angle", cfg.rpgm.max_angle)
                    .take("member_spread", cfg.rpgm.member_spread)
                    .take("update_interval", cfg.rpgm.update_interval);
              })
      .nested("gauss_markov",
              [&](Overlay& o) {
                o.take("alpha", cfg.gauss_markov.alpha)
                    .take("mean_speed_ratio", cfg.gauss_markov.mean_speed_ratio)
                    .take("sigma_speed_ratio", cfg.gauss_markov.sigma_speed_ratio)
                    .take("sigma_direction", cfg.gauss_markov.sigma_direction)
                    .take("update_interval", cfg.gauss_markov.update_interval);
              })
      .nested("manhattan",
              [&](Overlay& o) {
                o.take("horizontal_streets", cfg.manhattan.horizontal_streets)
                    .take("vertical_streets", cfg.manhattan.vertical_streets)
                    .take("min_headway", cfg.manhattan.min_headway)
                    .take("update_interval", cfg.manhattan.update_interval)
                    .take("accel_ratio", cfg.manhattan.accel_ratio);
              })
      .nested("radio",
              [&](Overlay& o) {
                o.take("range", cfg.radio.range)
                    .take("bandwidth", cfg.radio.bandwidth)
                    .take("queue_capacity", cfg.radio.queue_capacity)
                    .take("processing_delay", cfg.radio.processing_delay);
              })
      .nested("dsdv",
              [&](Overlay& o) {
                o.take("periodic_interval", cfg.dsdv.periodic_interval)
                    .take("jitter", cfg.dsdv.jitter)
                    .take("pending_packet_buffer", cfg.dsdv.pending_packet_buffer)
                    .take("pending_timeout", cfg.dsdv.pending_timeout)
                    .take("ttl", cfg.dsdv.ttl);
              })
      .take("trace_file", cfg.trace_file)
      .take("seed", cfg.seed);
  root.finish();
  auto parsed = parse_model(model);
  if (!parsed) throw std::invalid_argument("config: unknown model '" + model + "'");
  cfg.model = *parsed;
}

ScenarioConfig load_config_file(const std::string& path, ScenarioConfig base) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  apply_json(base, ss.str());
  return base;
}

std::string config_hash(const ScenarioConfig& cfg) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : to_json(cfg)) {
    h ^= c;
    h *= 0x100000001b3ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

mobility::MobilityTrace build_trace(const ScenarioConfig& cfg) {
  sim::RngStream rng(cfg.seed, sim::StreamId::mobility);
  switch (cfg.model) {
    case MobilityModel::random_waypoint:
      return mobility::rwp_generate(cfg.field, cfg.rwp_config(), cfg.n_nodes, cfg.duration, rng);
    case MobilityModel::rpgm:
      return mobility::rpgm_generate(cfg.field, cfg.rpgm_config(), cfg.n_nodes, cfg.duration, rng).nodes;
    case MobilityModel::gauss_markov:
      return mobility::gm_generate(cfg.field, cfg.gauss_markov_config(), cfg.n_nodes, cfg.duration, rng);
    case MobilityModel::manhattan:
      return mobility::manhattan_generate(cfg.field, cfg.manhattan_config(), cfg.n_nodes, cfg.duration,
                                          rng);
    case MobilityModel::external_trace: {
      std::ifstream in(cfg.trace_file);
      if (!in) throw std::runtime_error("cannot open trace file " + cfg.trace_file);
      std::stringstream ss;
      ss << in.rdbuf();
      auto trace = import_ns2_trace(ss.str(), cfg.field, cfg.duration);
      if (trace.node_count() != cfg.n_nodes) {
        throw std::invalid_argument("trace file has " + std::to_string(trace.node_count()) +
                                    " nodes, config expects " + std::to_string(cfg.n_nodes));
      }
      return trace;
    }
  }
  throw std::logic_error("build_trace: unknown model");
}

RunResult run_scenario(const ScenarioConfig& cfg, const RunHooks& hooks) {
  cfg.validate();
  const mobility::MobilityTrace trace = build_trace(cfg);

  Network net(trace, cfg.radio, cfg.dsdv, cfg.seed);
  if (hooks.event_log != nullptr) net.scheduler().set_event_log(hooks.event_log);
  if (hooks.packet_log != nullptr) net.ledger().set_log(hooks.packet_log);
  if (hooks.table_dump != nullptr) net.schedule_table_dumps(hooks.table_dump_times, *hooks.table_dump);

  sim::RngStream traffic_rng(cfg.seed, sim::StreamId::traffic);
  const traffic::CbrConfig cbr = cfg.cbr_config();
  const auto pairs = traffic::generate_pairs(cfg.n_nodes, cbr, traffic_rng);
  const auto offsets = traffic::draw_start_offsets(pairs.size(), cbr, traffic_rng);
  net.add_traffic(traffic::schedule_cbr(pairs, offsets, cbr, cfg.duration), cbr.packet_size);
  net.start_protocol();

  RunResult result;
  result.events = net.run(cfg.duration);
  result.config = cfg;
  result.config_hash = config_hash(cfg);
  result.stats = metrics::summarize(net.ledger());
  result.frames = net.radio().counters();
  result.routing_invariant_violations = net.invariant_violations();
  return result;
}

}  // namespace manet::harness
