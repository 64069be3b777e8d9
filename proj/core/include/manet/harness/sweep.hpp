#pragma once

#include <cstddef>
#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "manet/harness/scenario.hpp"

namespace manet::harness {

/// The evaluation grid: models x speeds x loads x seeds. Every other
/// parameter comes from `base`.
struct SweepSpec {
  std::vector<MobilityModel> models{std::begin(kSyntheticModels), std::end(kSyntheticModels)};
  std::vector<double> speeds{5, 10, 15, 20, 25};
  std::vector<double> loads{4, 8, 12, 16};
  std::size_t seeds_per_cell = 3;
  /// Seeds used are first_seed .. first_seed + seeds_per_cell - 1, the same
  /// set for every (model, speed, load).
  std::uint64_t first_seed = 1;
  ScenarioConfig base;

  void validate() const;
  [[nodiscard]] std::size_t run_count() const {
    return models.size() * speeds.size() * loads.size() * seeds_per_cell;
  }
};

struct CellKey {
  MobilityModel model = MobilityModel::random_waypoint;
  double speed = 0.0;
  double load = 0.0;
  std::uint64_t seed = 0;

  auto operator<=>(const CellKey&) const = default;
};

ScenarioConfig cell_config(const SweepSpec& spec, const CellKey& key);

struct CellOutcome {
  CellKey key;
  std::string config_hash;
  std::optional<metrics::DeliveryStats> stats;
  std::string error;  ///< set iff stats is empty
  double wall_seconds = 0.0;
};

struct SweepOptions {
  std::size_t threads = 1;
  /// Execute cells in a permuted order (results are sorted regardless).
  std::optional<std::uint64_t> shuffle_seed;
  std::function<void(const CellOutcome&, std::size_t done, std::size_t total)> progress;
};

struct SweepResult {
  std::vector<CellOutcome> cells;  ///< sorted by (model, speed, load, seed)
  [[nodiscard]] std::size_t failures() const;
};

SweepResult run_sweep(const SweepSpec& spec, const SweepOptions& options = {});

inline constexpr std::string_view kCsvHeader =
    "model,speed,load,seed,originated,delivered,pdf,avg_delay_s,drops_noroute,drops_queue,"
    "drops_ttl,config_hash";

/// Cell rows for every successful cell, then one seed-averaged row per
/// (model, speed, load) with seed "mean" and an empty config_hash. Averaged
/// counts and metrics are arithmetic means over the successful seeds;
/// avg_delay_s is empty when any of them had no delivered packet.
std::string sweep_csv(const SweepResult& result);

/// One line per failed cell: `model,speed,load,seed,config_hash,"error"`.
std::string sweep_errors_csv(const SweepResult& result);

/// A parsed CSV row; numeric fields keep their original text.
struct CsvRow {
  std::string model;
  std::string speed;
  std::string load;
  std::string seed;
  std::string originated;
  std::string delivered;
  std::string pdf;
  std::string avg_delay_s;
  std::string drops_noroute;
  std::string drops_queue;
  std::string drops_ttl;
  std::string config_hash;

  [[nodiscard]] bool is_mean() const { return seed == "mean"; }
};

/// Throws std::invalid_argument with the line number on malformed input.
std::vector<CsvRow> parse_sweep_csv(std::string_view text);

std::string format_double(double v);

}  // namespace manet::harness
