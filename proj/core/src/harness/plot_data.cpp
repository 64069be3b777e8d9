#include "manet/harness/plot_data.hpp"

#include <algorithm>
#include <cstdlib>
#include <map>
#include <set>
#include <stdexcept>

namespace manet::harness {

namespace {

double num(const std::string& s) { return std::strtod(s.c_str(), nullptr); }

struct ByValue {
  bool operator()(const std::string& a, const std::string& b) const {
    const double x = num(a);
    const double y = num(b);
    return x != y ? x < y : a < b;
  }
};

int model_rank(const std::string& name) {
  auto m = parse_model(name);
  return m ? static_cast<int>(*m) : 100;
}

}  // namespace

PlotData emit_plot_data(const std::vector<CsvRow>& rows) {
  std::vector<std::string> models;
  std::set<std::string, ByValue> speeds;
  std::set<std::string, ByValue> loads;
  std::map<std::tuple<std::string, std::string, std::string>, const CsvRow*> cells;
  for (const auto& r : rows) {
    if (!r.is_mean()) continue;
    if (std::find(models.begin(), models.end(), r.model) == models.end()) models.push_back(r.model);
    speeds.insert(r.speed);
    loads.insert(r.load);
    cells[{r.model, r.speed, r.load}] = &r;
  }
  if (cells.empty()) throw std::invalid_argument("plot data: no seed-averaged rows");
  std::stable_sort(models.begin(), models.end(),
                   [](const auto& a, const auto& b) { return model_rank(a) < model_rank(b); });

  PlotData out;
  for (const auto& m : models) {
    for (const auto& s : speeds) {
      for (const auto& l : loads) {
        if (!cells.count({m, s, l})) out.gaps.push_back({m, s, l});
      }
    }
  }

  auto header = [&](std::string x) {
    for (const auto& m : models) x += "\t" + m;
    return x + "\n";
  };
  const struct {
    const char* name;
    const char* label;
    std::string CsvRow::*field;
  } metrics_[] = {{"pdf", "packet delivery fraction", &CsvRow::pdf},
                  {"delay", "average end-to-end delay (s)", &CsvRow::avg_delay_s}};

  for (const auto& metric : metrics_) {
    for (const auto& l : loads) {
      PlotFile f{std::string(metric.name) + "_load" + l + ".tsv", {}};
      f.content = "# " + std::string(metric.label) + " vs speed, load " + l + " pkt/s\n";
      f.content += header("speed");
      for (const auto& s : speeds) {
        f.content += s;
        for (const auto& m : models) {
          auto it = cells.find({m, s, l});
          const std::string v = it == cells.end() ? "" : it->second->*metric.field;
          f.content += "\t" + (v.empty() ? std::string("NA") : v);
        }
        f.content += "\n";
      }
      out.files.push_back(std::move(f));
    }
  }

  // Load-vs-average over speeds, the summary figures.
  double best = -1.0;
  for (const auto& metric : metrics_) {
    const bool is_delay = std::string(metric.name) == "delay";
    PlotFile f{std::string("summary_") + metric.name + ".tsv", {}};
    f.content = "# speed-averaged " + std::string(metric.label) + " vs load\n";
    if (is_delay) f.content += "# y-scale: log\n";
    std::string body = header("load");
    std::map<std::string, std::vector<double>> per_model;
    for (const auto& l : loads) {
      body += l;
      for (const auto& m : models) {
        std::map<double, metrics::SpeedCell> by_speed;
        bool complete = true;
        for (const auto& s : speeds) {
          auto it = cells.find({m, s, l});
          if (it == cells.end()) {
            complete = false;
            break;
          }
          metrics::SpeedCell c;
          c.pdf = num(it->second->pdf);
          if (!it->second->avg_delay_s.empty()) c.avg_delay = num(it->second->avg_delay_s);
          by_speed[num(s)] = c;
        }
        std::string v = "NA";
        if (complete) {
          std::vector<double> xs;
          for (const auto& s : speeds) xs.push_back(num(s));
          const auto avg = metrics::aggregate_over_speeds(by_speed, xs);
          if (!is_delay) {
            v = format_double(avg.pdf);
            per_model[m].push_back(avg.pdf);
          } else if (avg.avg_delay) {
            v = format_double(*avg.avg_delay);
          }
        }
        body += "\t" + v;
      }
      body += "\n";
    }
    if (!is_delay) {
      for (const auto& m : models) {
        const auto& v = per_model[m];
        if (v.size() != loads.size()) continue;
        double mean = 0.0;
        for (double x : v) mean += x;
        mean /= static_cast<double>(v.size());
        if (mean > best) {
          best = mean;
          out.best_model = m;
        }
      }
    }
    out.files.push_back({f.name, f.content + body});
  }
  for (auto& f : out.files) {
    if (f.name.rfind("summary_", 0) == 0 && !out.best_model.empty()) {
      f.content.insert(f.content.find('\n') + 1, "# best model: " + out.best_model + "\n");
    }
  }
  return out;
}

std::string gap_report(const std::vector<PlotGap>& gaps) {
  std::string out;
  for (const auto& g : gaps) {
    out += "missing cell: model=" + g.model + " speed=" + g.speed + " load=" + g.load + "\n";
  }
  return out;
}

}  // namespace manet::harness
