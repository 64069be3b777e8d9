#include "manet/harness/sweep.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cstdio>
#include <map>
#include <mutex>
#include <numeric>
#include <sstream>
#include <stdexcept>
#include <thread>

namespace manet::harness {

void SweepSpec::validate() const {
  if (models.empty() || speeds.empty() || loads.empty() || seeds_per_cell == 0) {
    throw std::invalid_argument("SweepSpec: every axis must be non-empty");
  }
  for (double s : speeds) {
    if (!(s > 0.0)) throw std::invalid_argument("SweepSpec: speeds must be > 0");
  }
  for (double l : loads) {
    if (!(l > 0.0)) throw std::invalid_argument("SweepSpec: loads must be > 0");
  }
}

ScenarioConfig cell_config(const SweepSpec& spec, const CellKey& key) {
  ScenarioConfig cfg = spec.base;
  cfg.model = key.model;
  cfg.v_max = key.speed;
  cfg.load = key.load;
  cfg.seed = key.seed;
  return cfg;
}

std::size_t SweepResult::failures() const {
  return static_cast<std::size_t>(
      std::count_if(cells.begin(), cells.end(), [](const CellOutcome& c) { return !c.stats; }));
}

SweepResult run_sweep(const SweepSpec& spec, const SweepOptions& options) {
  spec.validate();
  std::vector<CellKey> keys;
  keys.reserve(spec.run_count());
  for (auto m : spec.models) {
    for (double s : spec.speeds) {
      for (double l : spec.loads) {
        for (std::size_t k = 0; k < spec.seeds_per_cell; ++k) keys.push_back({m, s, l, spec.first_seed + k});
      }
    }
  }
  std::sort(keys.begin(), keys.end());
  keys.erase(std::unique(keys.begin(), keys.end()), keys.end());

  std::vector<std::size_t> order(keys.size());
  std::iota(order.begin(), order.end(), 0);
  if (options.shuffle_seed) {
    sim::RngStream rng(*options.shuffle_seed, sim::StreamId::traffic);
    for (std::size_t i = order.size(); i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  }

  SweepResult result;
  result.cells.resize(keys.size());
  std::atomic<std::size_t> next{0};
  std::size_t done = 0;
  std::mutex progress_mutex;

  auto worker = [&] {
    for (std::size_t i = next++; i < order.size(); i = next++) {
      const std::size_t idx = order[i];
      CellOutcome& out = result.cells[idx];
      out.key = keys[idx];
      const auto t0 = std::chrono::steady_clock::now();
      try {
        const ScenarioConfig cfg = cell_config(spec, out.key);
        out.config_hash = config_hash(cfg);
        out.stats = run_scenario(cfg).stats;
      } catch (const std::exception& e) {
        out.stats.reset();
        out.error = e.what();
      }
      out.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
      if (options.progress) {
        std::lock_guard lock(progress_mutex);
        options.progress(out, ++done, order.size());
      }
    }
  };

  const std::size_t threads = std::max<std::size_t>(1, std::min(options.threads, keys.size()));
  if (threads == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (std::size_t t = 0; t < threads; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  return result;
}

std::string format_double(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string format_axis(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%g", v);
  if (std::strtod(buf, nullptr) != v) return format_double(v);
  return buf;
}

std::string csv_quote(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += (c == '\n') ? ' ' : c;
  }
  return out + "\"";
}

}  // namespace

std::string sweep_csv(const SweepResult& result) {
  std::string out(kCsvHeader);
  out += '\n';
  std::map<std::tuple<MobilityModel, double, double>, std::vector<const metrics::DeliveryStats*>> groups;
  for (const auto& c : result.cells) {
    if (!c.stats) continue;
    const auto& s = *c.stats;
    out += std::string(to_string(c.key.model)) + ',' + format_axis(c.key.speed) + ',' +
           format_axis(c.key.load) + ',' + std::to_string(c.key.seed) + ',' +
           std::to_string(s.originated) + ',' + std::to_string(s.delivered) + ',' +
           format_double(s.pdf) + ',' + (s.avg_delay ? format_double(*s.avg_delay) : "") + ',' +
           std::to_string(s.drops.no_route) + ',' + std::to_string(s.drops.queue) + ',' +
           std::to_string(s.drops.ttl) + ',' + c.config_hash + '\n';
    groups[{c.key.model, c.key.speed, c.key.load}].push_back(&s);
  }
  for (const auto& [key, stats] : groups) {
    const double n = static_cast<double>(stats.size());
    auto mean = [&](auto field) {
      double sum = 0.0;
      for (const auto* s : stats) sum += field(*s);
      return sum / n;
    };
    const bool delay_defined =
        std::all_of(stats.begin(), stats.end(), [](const auto* s) { return s->avg_delay.has_value(); });
    out += std::string(to_string(std::get<0>(key))) + ',' + format_axis(std::get<1>(key)) + ',' +
           format_axis(std::get<2>(key)) + ",mean," +
           format_double(mean([](const auto& s) { return double(s.originated); })) + ',' +
           format_double(mean([](const auto& s) { return double(s.delivered); })) + ',' +
           format_double(mean([](const auto& s) { return s.pdf; })) + ',' +
           (delay_defined ? format_double(mean([](const auto& s) { return *s.avg_delay; })) : "") + ',' +
           format_double(mean([](const auto& s) { return double(s.drops.no_route); })) + ',' +
           format_double(mean([](const auto& s) { return double(s.drops.queue); })) + ',' +
           format_double(mean([](const auto& s) { return double(s.drops.ttl); })) + ",\n";
  }
  return out;
}

std::string sweep_errors_csv(const SweepResult& result) {
  std::string out = "model,speed,load,seed,config_hash,error\n";
  for (const auto& c : result.cells) {
    if (c.stats) continue;
    out += std::string(to_string(c.key.model)) + ',' + format_axis(c.key.speed) + ',' +
           format_axis(c.key.load) + ',' + std::to_string(c.key.seed) + ',' + c.config_hash + ',' +
           csv_quote(c.error) + '\n';
  }
  return out;
}

std::vector<CsvRow> parse_sweep_csv(std::string_view text) {
  std::istringstream in{std::string(text)};
  std::string line;
  std::size_t line_no = 0;
  std::vector<CsvRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line_no == 1) {
      if (line != kCsvHeader) throw std::invalid_argument("sweep csv: line 1: unexpected header");
      continue;
    }
    if (line.empty()) continue;
    std::vector<std::string> f;
    std::size_t start = 0;
    while (true) {
      const auto comma = line.find(',', start);
      f.push_back(line.substr(start, comma - start));
      if (comma == std::string::npos) break;
      start = comma + 1;
    }
    if (f.size() != 12) {
      throw std::invalid_argument("sweep csv: line " + std::to_string(line_no) + ": expected 12 fields, got " +
                                  std::to_string(f.size()));
    }
    rows.push_back({f[0], f[1], f[2], f[3], f[4], f[5], f[6], f[7], f[8], f[9], f[10], f[11]});
  }
  if (line_no == 0) throw std::invalid_argument("sweep csv: empty input");
  return rows;
}

}  // namespace manet::harness
