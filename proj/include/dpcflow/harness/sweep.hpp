#pragma once

#include <vector>

#include "dpcflow/harness/experiment.hpp"

namespace dpcflow::harness {

struct SweepRow {
  int keep_count = 0;
  bool with_dob = false;
  double rmse = 0.0;
  bool diverged = false;
  long long modeled_bytes = 0;       // task-to-task payload over the run
  double measured_compute_ms = 0.0;  // summed wall time of cloud numerics
  double modeled_cloud_us_mean = 0.0;
  double eps2 = 0.0, eps3 = 0.0, eps4 = 0.0;
};

struct SweepReport {
  std::vector<SweepRow> rows;
  double native_rmse = 0.0;  // rank-only centralized baseline on the same seed
  bool native_diverged = false;
};

/// One workflow run per retained-singular-value count, plus the centralized
/// baseline. The base config must use a workflow method; each run swaps in a
/// fixed-count truncation policy with the requested keep count.
SweepReport sweep_truncation(const ExperimentConfig& base,
                             const std::vector<int>& keep_counts);

std::string sweep_csv(const SweepReport& report);

}  // namespace dpcflow::harness
