#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "manet/harness/ns2_trace.hpp"
#include "manet/harness/plot_data.hpp"
#include "manet/harness/scenario.hpp"
#include "manet/harness/sweep.hpp"

namespace fs = std::filesystem;
using namespace manet;
using namespace manet::harness;

namespace {

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

// Scenario flags, named after the config keys; nested keys use dots.
struct ScenarioFlags {
  ScenarioConfig cfg;
  std::string model = "rwp";
  std::string config_file;

  void add_to(CLI::App* app, bool with_axes = true) {
    app->add_option("--config", config_file, "JSON scenario file; its keys win over flags")
        ->check(CLI::ExistingFile);
    if (with_axes) {
      app->add_option("--model", model, "rwp | rpgm | gauss_markov | manhattan | trace")->capture_default_str();
      app->add_option("--v_max", cfg.v_max, "maximum node speed, m/s")->capture_default_str();
      app->add_option("--load", cfg.load, "packets/s per source-destination pair")->capture_default_str();
      app->add_option("--seed", cfg.seed)->capture_default_str();
    }
    app->add_option("--n_nodes", cfg.n_nodes)->capture_default_str();
    app->add_option("--field.width", cfg.field.width)->capture_default_str();
    app->add_option("--field.height", cfg.field.height)->capture_default_str();
    app->add_option("--field.edge_margin", cfg.field.edge_margin)->capture_default_str();
    app->add_option("--duration", cfg.duration, "simulated seconds")->capture_default_str();
    app->add_option("--pause", cfg.pause, "pause time, s")->capture_default_str();
    app->add_option("--pair_count", cfg.pair_count)->capture_default_str();
    app->add_option("--packet_size", cfg.packet_size, "bytes")->capture_default_str();
    app->add_option("--trace_file", cfg.trace_file, "NS-2 movement file for --model trace");
    app->add_option("--rpgm.group_count", cfg.rpgm.group_count)->capture_default_str();
    app->add_option("--rpgm.sdr", cfg.rpgm.sdr)->capture_default_str();
    app->add_option("--rpgm.adr", cfg.rpgm.adr)->capture_default_str();
    app->add_option("--rpgm.max_angle", cfg.rpgm.max_angle)->capture_default_str();
    app->add_option("--rpgm.member_spread", cfg.rpgm.member_spread)->capture_default_str();
    app->add_option("--rpgm.update_interval", cfg.rpgm.update_interval)->capture_default_str();
    app->add_option("--gauss_markov.alpha", cfg.gauss_markov.alpha)->capture_default_str();
    app->add_option("--gauss_markov.mean_speed_ratio", cfg.gauss_markov.mean_speed_ratio)->capture_default_str();
    app->add_option("--gauss_markov.sigma_speed_ratio", cfg.gauss_markov.sigma_speed_ratio)->capture_default_str();
    app->add_option("--gauss_markov.sigma_direction", cfg.gauss_markov.sigma_direction)->capture_default_str();
    app->add_option("--gauss_markov.update_interval", cfg.gauss_markov.update_interval)->capture_default_str();
    app->add_option("--manhattan.horizontal_streets", cfg.manhattan.horizontal_streets)->capture_default_str();
    app->add_option("--manhattan.vertical_streets", cfg.manhattan.vertical_streets)->capture_default_str();
    app->add_option("--manhattan.min_headway", cfg.manhattan.min_headway)->capture_default_str();
    app->add_option("--manhattan.update_interval", cfg.manhattan.update_interval)->capture_default_str();
    app->add_option("--manhattan.accel_ratio", cfg.manhattan.accel_ratio)->capture_default_str();
    app->add_option("--radio.range", cfg.radio.range, "m")->capture_default_str();
    app->add_option("--radio.bandwidth", cfg.radio.bandwidth, "bits/s")->capture_default_str();
    app->add_option("--radio.queue_capacity", cfg.radio.queue_capacity)->capture_default_str();
    app->add_option("--radio.processing_delay", cfg.radio.processing_delay, "s")->capture_default_str();
    app->add_option("--dsdv.periodic_interval", cfg.dsdv.periodic_interval)->capture_default_str();
    app->add_option("--dsdv.jitter", cfg.dsdv.jitter)->capture_default_str();
    app->add_option("--dsdv.pending_packet_buffer", cfg.dsdv.pending_packet_buffer)->capture_default_str();
    app->add_option("--dsdv.pending_timeout", cfg.dsdv.pending_timeout)->capture_default_str();
    app->add_option("--dsdv.ttl", cfg.dsdv.ttl)->capture_default_str();
  }

  ScenarioConfig resolve() const {
    ScenarioConfig out = cfg;
    auto m = parse_model(model);
    if (!m) throw std::invalid_argument("unknown model '" + model + "'");
    out.model = *m;
    if (!config_file.empty()) out = load_config_file(config_file, out);
    return out;
  }
};

std::vector<double> parse_list(const std::string& csv) {
  std::vector<double> out;
  std::stringstream ss(csv);
  for (std::string tok; std::getline(ss, tok, ',');) {
    std::size_t used = 0;
    out.push_back(std::stod(tok, &used));
    if (used != tok.size()) throw std::invalid_argument("bad number '" + tok + "'");
  }
  return out;
}

std::string stats_row(const RunResult& r) {
  SweepResult one;
  one.cells.push_back({{r.config.model, r.config.v_max, r.config.load, r.config.seed}, r.config_hash, r.stats, {}, 0.0});
  std::string csv = sweep_csv(one);
  // Drop the seed-averaged line of a one-cell result.
  csv.erase(csv.rfind('\n', csv.size() - 2) + 1);
  return csv;
}

nlohmann::json result_json(const RunResult& r) {
  nlohmann::json j;
  j["config"] = nlohmann::json::parse(to_json(r.config));
  j["config_hash"] = r.config_hash;
  j["originated"] = r.stats.originated;
  j["delivered"] = r.stats.delivered;
  j["in_flight"] = r.stats.in_flight;
  j["drops"] = {{"no_route", r.stats.drops.no_route}, {"queue", r.stats.drops.queue}, {"ttl", r.stats.drops.ttl}};
  j["pdf"] = r.stats.pdf;
  j["avg_delay_s"] = r.stats.avg_delay ? nlohmann::json(*r.stats.avg_delay) : nlohmann::json(nullptr);
  j["frames"] = {{"transmitted", r.frames.transmitted},
                 {"delivered", r.frames.delivered},
                 {"dropped_no_link", r.frames.dropped_no_link},
                 {"dropped_queue_full", r.frames.dropped_queue_full},
                 {"in_flight", r.frames.in_flight()}};
  j["events"] = r.events.dispatched;
  j["routing_invariant_violations"] = r.routing_invariant_violations;
  return j;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Deterministic MANET simulator: DSDV over four mobility models"};
  app.require_subcommand(1);

  // simulate
  auto* sim_cmd = app.add_subcommand("simulate", "run one scenario cell");
  ScenarioFlags sim_flags;
  sim_flags.add_to(sim_cmd);
  std::string event_log, packet_log, table_dump;
  std::vector<double> dump_at;
  bool as_json = false;
  sim_cmd->add_option("--event-log", event_log, "write every dispatched event");
  sim_cmd->add_option("--packet-log", packet_log, "write packet send/receive/drop lines");
  sim_cmd->add_option("--table-dump", table_dump, "write routing tables at --dump-at instants");
  sim_cmd->add_option("--dump-at", dump_at, "table dump instants, s");
  sim_cmd->add_flag("--json", as_json, "print the full result as JSON instead of a CSV row");

  // sweep
  auto* sweep_cmd = app.add_subcommand("sweep", "run the models x speeds x loads x seeds grid");
  ScenarioFlags sweep_flags;
  sweep_flags.add_to(sweep_cmd, false);
  std::string models_arg = "rwp,rpgm,gauss_markov,manhattan";
  std::string speeds_arg = "5,10,15,20,25";
  std::string loads_arg = "4,8,12,16";
  std::size_t seeds = 3;
  std::uint64_t first_seed = 1;
  std::size_t threads = 1;
  std::string sweep_out, errors_out;
  bool quiet = false;
  sweep_cmd->add_option("--models", models_arg)->capture_default_str();
  sweep_cmd->add_option("--speeds", speeds_arg, "v_max values")->capture_default_str();
  sweep_cmd->add_option("--loads", loads_arg, "pkt/s per pair")->capture_default_str();
  sweep_cmd->add_option("--seeds", seeds, "seeds per cell")->capture_default_str();
  sweep_cmd->add_option("--first_seed", first_seed)->capture_default_str();
  sweep_cmd->add_option("--threads", threads)->capture_default_str();
  sweep_cmd->add_option("-o,--out", sweep_out, "CSV output (default stdout)");
  sweep_cmd->add_option("--errors", errors_out, "CSV of failed cells");
  sweep_cmd->add_flag("-q,--quiet", quiet, "no progress on stderr");

  // trace
  auto* trace_cmd = app.add_subcommand("trace", "mobility trace tools");
  trace_cmd->require_subcommand(1);
  auto* gen_cmd = trace_cmd->add_subcommand("gen", "generate a trace (native JSON)");
  ScenarioFlags gen_flags;
  gen_flags.add_to(gen_cmd);
  std::string gen_out;
  bool gen_ns2 = false;
  gen_cmd->add_option("-o,--out", gen_out, "output file (default stdout)");
  gen_cmd->add_flag("--ns2", gen_ns2, "write the NS-2 movement script instead");

  auto* export_cmd = trace_cmd->add_subcommand("export", "native JSON trace -> NS-2 movement script");
  std::string export_in, export_out;
  export_cmd->add_option("input", export_in, "trace JSON")->required()->check(CLI::ExistingFile);
  export_cmd->add_option("-o,--out", export_out);

  auto* import_cmd = trace_cmd->add_subcommand("import", "NS-2 movement script -> native JSON trace");
  std::string import_in, import_out;
  std::optional<double> import_width, import_height, import_duration;
  import_cmd->add_option("input", import_in, "NS-2 file")->required()->check(CLI::ExistingFile);
  import_cmd->add_option("-o,--out", import_out);
  import_cmd->add_option("--field.width", import_width, "default: bounding box");
  import_cmd->add_option("--field.height", import_height, "default: bounding box");
  import_cmd->add_option("--duration", import_duration, "default: last arrival");

  // plotdata
  auto* plot_cmd = app.add_subcommand("plotdata", "sweep CSV -> per-figure tab-separated files");
  std::string plot_in, plot_dir = "plots";
  plot_cmd->add_option("input", plot_in, "sweep CSV")->required()->check(CLI::ExistingFile);
  plot_cmd->add_option("-d,--dir", plot_dir)->capture_default_str();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sim_cmd) {
      const ScenarioConfig cfg = sim_flags.resolve();
      std::ofstream ev, pk, td;
      RunHooks hooks;
      if (!event_log.empty()) {
        ev.open(event_log);
        hooks.event_log = &ev;
      }
      if (!packet_log.empty()) {
        pk.open(packet_log);
        hooks.packet_log = &pk;
      }
      if (!table_dump.empty()) {
        td.open(table_dump);
        hooks.table_dump = &td;
        hooks.table_dump_times = dump_at.empty() ? std::vector<double>{cfg.duration} : dump_at;
      }
      const RunResult r = run_scenario(cfg, hooks);
      if (as_json) {
        std::cout << result_json(r).dump(2) << "\n";
      } else {
        std::cout << stats_row(r);
      }
      return 0;
    }

    if (*sweep_cmd) {
      SweepSpec spec;
      spec.base = sweep_flags.resolve();
      spec.models.clear();
      std::stringstream ss(models_arg);
      for (std::string tok; std::getline(ss, tok, ',');) {
        auto m = parse_model(tok);
        if (!m) throw std::invalid_argument("unknown model '" + tok + "'");
        spec.models.push_back(*m);
      }
      spec.speeds = parse_list(speeds_arg);
      spec.loads = parse_list(loads_arg);
      spec.seeds_per_cell = seeds;
      spec.first_seed = first_seed;
      SweepOptions opts;
      opts.threads = threads;
      if (!quiet) {
        opts.progress = [](const CellOutcome& c, std::size_t done, std::size_t total) {
          std::fprintf(stderr, "[%zu/%zu] %s v=%g load=%g seed=%llu %s (%.2fs)\n", done, total,
                       std::string(to_string(c.key.model)).c_str(), c.key.speed, c.key.load,
                       static_cast<unsigned long long>(c.key.seed),
                       c.stats ? "ok" : ("FAILED: " + c.error).c_str(), c.wall_seconds);
        };
      }
      const SweepResult result = run_sweep(spec, opts);
      write_output(sweep_out, sweep_csv(result));
      if (result.failures() > 0) {
        if (!errors_out.empty()) write_output(errors_out, sweep_errors_csv(result));
        else std::cerr << sweep_errors_csv(result);
        return 1;
      }
      return 0;
    }

    if (*gen_cmd) {
      const auto trace = build_trace(gen_flags.resolve());
      write_output(gen_out, gen_ns2 ? export_ns2_trace(trace) : trace_to_json(trace));
      return 0;
    }
    if (*export_cmd) {
      write_output(export_out, export_ns2_trace(trace_from_json(read_file(export_in))));
      return 0;
    }
    if (*import_cmd) {
      std::optional<mobility::Field> field;
      if (import_width || import_height) {
        if (!import_width || !import_height) throw std::invalid_argument("give both --field.width and --field.height");
        field = mobility::Field{*import_width, *import_height, 0.0};
      }
      write_output(import_out, trace_to_json(import_ns2_trace(read_file(import_in), field, import_duration)));
      return 0;
    }
    if (*plot_cmd) {
      const auto plots = emit_plot_data(parse_sweep_csv(read_file(plot_in)));
      fs::create_directories(plot_dir);
      for (const auto& f : plots.files) write_output((fs::path(plot_dir) / f.name).string(), f.content);
      if (!plots.gaps.empty()) {
        std::cerr << gap_report(plots.gaps);
        return 1;
      }
      return 0;
    }
  } catch (const std::exception& e) {
    std::cerr << "manetsim: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
