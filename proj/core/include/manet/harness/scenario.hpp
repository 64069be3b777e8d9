#pragma once

#include <cstdint>
#include <iosfwd>
#include <numbers>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "manet/dsdv/routing_table.hpp"
#include "manet/metrics/metrics.hpp"
#include "manet/mobility/gauss_markov.hpp"
#include "manet/mobility/manhattan.hpp"
#include "manet/mobility/random_waypoint.hpp"
#include "manet/mobility/rpgm.hpp"
#include "manet/mobility/trace.hpp"
#include "manet/radio/radio.hpp"
#include "manet/sim/scheduler.hpp"
#include "manet/traffic/cbr.hpp"

namespace manet::harness {

enum class MobilityModel { random_waypoint, rpgm, gauss_markov, manhattan, external_trace };

/// Canonical names: rwp, rpgm, gauss_markov, manhattan, trace.
std::string_view to_string(MobilityModel model);
std::optional<MobilityModel> parse_model(std::string_view name);

/// The four synthetic models, in reporting order.
inline constexpr MobilityModel kSyntheticModels[] = {
    MobilityModel::random_waypoint, MobilityModel::rpgm, MobilityModel::gauss_markov,
    MobilityModel::manhattan};

struct RpgmParams {
  std::size_t group_count = 10;
  double sdr = 0.1;
  double adr = 0.1;
  double max_angle = std::numbers::pi;
  double member_spread = 50.0;
  double update_interval = 1.0;
};

struct GaussMarkovParams {
  double alpha = 0.75;
  double mean_speed_ratio = 0.5;   ///< mean speed as a fraction of v_max
  double sigma_speed_ratio = 0.25; ///< speed std. dev. as a fraction of v_max
  double sigma_direction = std::numbers::pi / 8.0;
  double update_interval = 1.0;
};

struct ManhattanParams {
  std::size_t horizontal_streets = 6;
  std::size_t vertical_streets = 6;
  double min_headway = 5.0;
  double update_interval = 1.0;
  double accel_ratio = 0.5;
};

/// One cell of the evaluation grid. Defaults are the 100-node, 500x500 m,
/// 100 s setup with a 10 s pause.
struct ScenarioConfig {
  MobilityModel model = MobilityModel::random_waypoint;
  std::size_t n_nodes = 100;
  mobility::Field field{500.0, 500.0, 25.0};
  double duration = 100.0;
  double pause = 10.0;
  double v_max = 5.0;
  double load = 4.0;  ///< packets/s per source-destination pair
  std::size_t pair_count = 10;
  std::size_t packet_size = 350;
  RpgmParams rpgm;
  GaussMarkovParams gauss_markov;
  ManhattanParams manhattan;
  radio::RadioConfig radio;
  dsdv::DsdvConfig dsdv;
  /// NS-2 movement file, used when model == external_trace.
  std::string trace_file;
  std::uint64_t seed = 1;

  /// Throws std::invalid_argument naming the offending field.
  void validate() const;

  [[nodiscard]] mobility::RwpConfig rwp_config() const;
  [[nodiscard]] mobility::RpgmConfig rpgm_config() const;
  [[nodiscard]] mobility::GaussMarkovConfig gauss_markov_config() const;
  [[nodiscard]] mobility::ManhattanConfig manhattan_config() const;
  [[nodiscard]] traffic::CbrConfig cbr_config() const;
};

/// Canonical JSON (sorted keys) of every field.
std::string to_json(const ScenarioConfig& cfg);
/// Overlays the keys present in `json` onto `cfg`. Unknown keys are errors.
void apply_json(ScenarioConfig& cfg, std::string_view json);
ScenarioConfig load_config_file(const std::string& path, ScenarioConfig base = {});

/// 16 hex digits of FNV-1a over the canonical JSON.
std::string config_hash(const ScenarioConfig& cfg);

struct RunResult {
  ScenarioConfig config;
  std::string config_hash;
  metrics::DeliveryStats stats;
  radio::FrameCounters frames;
  sim::RunStats events;
  std::uint64_t routing_invariant_violations = 0;
};

/// Optional observation streams for a run.
struct RunHooks {
  std::ostream* event_log = nullptr;
  std::ostream* packet_log = nullptr;
  std::ostream* table_dump = nullptr;
  std::vector<SimTime> table_dump_times;
};

/// Mobility trace of a scenario, drawn from the scenario's mobility stream.
mobility::MobilityTrace build_trace(const ScenarioConfig& cfg);

/// Trace -> engine run with radio, DSDV and CBR traffic -> metrics.
/// Deterministic in the config (seed included).
RunResult run_scenario(const ScenarioConfig& cfg, const RunHooks& hooks = {});

}  // namespace manet::harness
