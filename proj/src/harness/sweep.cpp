#include "dpcflow/harness/sweep.hpp"

#include <sstream>
#include <stdexcept>

namespace dpcflow::harness {

SweepReport sweep_truncation(const ExperimentConfig& base,
                             const std::vector<int>& keep_counts) {
  if (base.method != Method::Workflow && base.method != Method::WorkflowDob) {
    throw std::invalid_argument("sweep_truncation: base method must be a workflow method");
  }
  SweepReport report;
  for (int keep : keep_counts) {
    ExperimentConfig cfg = base;
    cfg.truncation = "fixed";
    cfg.keep_count = keep;
    const RunRecord rec = run_experiment(cfg);
    SweepRow row;
    row.keep_count = keep;
    row.with_dob = cfg.method == Method::WorkflowDob;
    row.rmse = rec.summary.rmse;
    row.diverged = rec.summary.diverged;
    row.modeled_bytes = rec.summary.total_bytes;
    row.measured_compute_ms = rec.summary.measured_compute_ms;
    row.modeled_cloud_us_mean = rec.summary.mean_compute_us;
    row.eps2 = rec.summary.eps2_last;
    row.eps3 = rec.summary.eps3_last;
    row.eps4 = rec.summary.eps4_last;
    report.rows.push_back(row);
  }
  ExperimentConfig nat = base;
  nat.method = Method::Native;
  nat.truncation = "rank_only";
  const RunRecord rec = run_experiment(nat);
  report.native_rmse = rec.summary.rmse;
  report.native_diverged = rec.summary.diverged;
  return report;
}

std::string sweep_csv(const SweepReport& report) {
  std::ostringstream out;
  out.precision(12);
  out << "keep,with_dob,rmse,diverged,modeled_bytes,measured_compute_ms,"
         "modeled_cloud_us_mean,eps2,eps3,eps4\n";
  for (const SweepRow& r : report.rows) {
    out << r.keep_count << ',' << (r.with_dob ? 1 : 0) << ',' << r.rmse << ','
        << (r.diverged ? 1 : 0) << ',' << r.modeled_bytes << ','
        << r.measured_compute_ms << ',' << r.modeled_cloud_us_mean << ','
        << r.eps2 << ',' << r.eps3 << ',' << r.eps4 << '\n';
  }
  out << "native,,"  << report.native_rmse << ',' << (report.native_diverged ? 1 : 0)
      << ",,,,,,\n";
  return out.str();
}

}  // namespace dpcflow::harness
