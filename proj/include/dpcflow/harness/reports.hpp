#pragma once

#include <string>

#include "dpcflow/harness/experiment.hpp"

namespace dpcflow::harness {

/// Write the per-step trace, the run summary and the plot-data series for a
/// completed run. All three files are deterministic for a fixed config and
/// seed; wall-clock timings go to the separate metrics stream only.
///   <base>_trace.csv    k, y*, r*, u*, u_cloud*, d_hat*, delays, bounds
///   <base>_summary.csv  one row of aggregate figures
///   <base>_plot.csv     long-format series (series, x, y)
///   <base>_metrics.csv  workflow round metrics (includes measured wall time)
void emit_reports(const RunRecord& rec, const std::string& dir,
                  const std::string& base);

std::string trace_csv(const RunRecord& rec);
std::string summary_csv(const RunRecord& rec);
std::string plotdata_csv(const RunRecord& rec);
std::string metrics_csv(const RunRecord& rec);

}  // namespace dpcflow::harness
