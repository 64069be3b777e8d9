#pragma once

#include <string>
#include <vector>

#include "manet/harness/sweep.hpp"

namespace manet::harness {

struct PlotFile {
  std::string name;     ///< e.g. "pdf_load4.tsv"
  std::string content;  ///< tab-separated, `#` comment lines first
};

struct PlotGap {
  std::string model;
  std::string speed;
  std::string load;
};

struct PlotData {
  std::vector<PlotFile> files;
  std::vector<PlotGap> gaps;
  std::string best_model;  ///< highest mean PDF over all loads
};

/// Per load and metric: x = speed, one column per model, from the
/// seed-averaged rows (values copied verbatim). Plus one load-vs-average file
/// per metric, averaged over speeds; the delay file asks for a log y axis.
/// Missing (model, speed, load) cells are written as "NA" and listed in gaps.
PlotData emit_plot_data(const std::vector<CsvRow>& rows);

std::string gap_report(const std::vector<PlotGap>& gaps);

}  // namespace manet::harness
