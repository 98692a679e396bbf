#pragma once

#include <Eigen/Dense>
#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "dpcflow/harness/config.hpp"
#include "dpcflow/plants/lti.hpp"
#include "dpcflow/workflow/engine.hpp"

namespace dpcflow::harness {

/// One deterministic step of the run: virtual-clock delays, edge decisions,
/// measured output. Wall-clock timings never appear here.
struct TraceRow {
  long long k = 0;
  double t_us = 0.0;
  Eigen::VectorXd y, r, u_applied, u_cloud, d_hat;
  double delay_up_us = 0.0;
  double delay_compute_us = 0.0;
  double delay_down_us = 0.0;
  double delay_total_us = 0.0;  // of the packet used this step
  long long packet_data_time = -1;
  bool held = false;
  double eps2 = 0.0, eps3 = 0.0, eps4 = 0.0;
};

struct RunSummary {
  long long steps = 0;
  long long warmup_steps = 0;
  bool diverged = false;
  double rmse = 0.0;
  double overshoot = 0.0;
  double mean_total_delay_us = 0.0;
  double max_total_delay_us = 0.0;
  double mean_compute_us = 0.0;  // modeled cloud compute per round
  double max_compute_us = 0.0;
  long long total_bytes = 0;  // task-to-task traffic, workflow methods only
  long long held_steps = 0;
  double eps2_last = 0.0, eps3_last = 0.0, eps4_last = 0.0;
  double measured_wall_ms = 0.0;       // not written to deterministic reports
  double measured_compute_ms = 0.0;    // summed wall time of cloud-side numerics
};

struct RunRecord {
  ExperimentConfig cfg;
  std::vector<TraceRow> rows;
  RunSummary summary;
  std::vector<wf::RoundMetrics> round_metrics;  // workflow methods only
  std::vector<std::string> extra_names;         // plant-specific plot series
  std::vector<std::vector<double>> extras;      // one row per trace row
};

/// A plant bound to the experiment: simulator, warm-up controller, reference,
/// observer gain and the mapping from the DPC control input to the plant
/// input vector.
struct PlantRig {
  std::shared_ptr<plants::PlantSim> sim;
  int input_dim = 0;   // as seen by the controller
  int output_dim = 0;
  std::function<Eigen::VectorXd(const Eigen::VectorXd& u_ctrl)> plant_input;
  std::function<Eigen::VectorXd(const Eigen::VectorXd& y, long long step)> warmup;
  std::function<Eigen::VectorXd(long long k)> reference_now;  // during DPC
  Eigen::MatrixXd dob_gain;  // input_dim x output_dim
  std::vector<std::string> extra_names;
  std::function<std::vector<double>(const Eigen::VectorXd& u_ctrl, double dt)> extras;
};

PlantRig build_rig(const ExperimentConfig& cfg);

/// Execute the full scheme: warm-up data collection, topology switch, and the
/// per-step loop of cloud round, packet delivery on the virtual clock, edge
/// compensation, plant step and Hankel update.
RunRecord run_experiment(const ExperimentConfig& cfg);

}  // namespace dpcflow::harness
