#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dpcflow/linalg/svd.hpp"
#include "dpcflow/workflow/fabric.hpp"

namespace dpcflow::harness {

enum class Method { Native, NativeDelayComp, Workflow, WorkflowDob };

Method method_from_string(const std::string& s);
std::string method_name(Method m);

/// Flat key = value experiment description. Every field is addressable from
/// the config file; unknown keys are rejected.
struct ExperimentConfig {
  // Plant and method selection.
  std::string plant = "ball_beam";  // ball_beam | vehicle | power_network | random_lti
  Method method = Method::WorkflowDob;

  // Controller scale and tuning.
  int n_horizon = 30;
  int j_cols = 1500;
  double lambda = 0.031;
  std::string truncation = "relative";  // relative | fixed | rank_only
  double epsilon1 = 1e-15;
  int keep_count = 1;
  double observer_gain = 50.0;
  double control_period_s = 0.02;
  int duration_steps = 500;
  int mpt = 4;
  int fold_into_export = -1;  // -1: default folding
  std::uint64_t seed = 1;
  double warmup_dither = 1e-3;
  double measurement_noise = 1e-5;  // uniform sensor noise on measured outputs
  double divergence_guard = 1e6;
  bool trace_bounds = false;
  int bounds_every = 50;
  // true: packets later than the actuation deadline are held/stale (real-time
  // loop); false: the plant waits for each round (non-real-time evaluation).
  bool realtime = true;

  // Fabric cost model and virtual compute rate.
  double fabric_base_latency_us = 500.0;
  double fabric_bandwidth_bps = 1.25e9;
  double fabric_serialize_bps = 2.0e9;
  double fabric_deserialize_bps = 2.0e9;
  double compute_rate_flops = 5.0e10;
  bool fabric_real_sleep = false;  // demo mode: workers really sleep edge costs

  // Ball-beam example.
  double bb_reference_warmup = 0.2;
  double bb_reference_dpc = 0.1;
  double pid_kp = 9.0;
  double pid_ki = 3.0;
  double pid_kd = 7.5;

  // Vehicle example.
  double vehicle_speed_kmh = 30.0;
  double vehicle_wheelbase = 0.5;
  double vehicle_curvature = 0.024;
  double lqr_q_scale = 20.0;
  double lqr_r_scale = 1.0;

  // Power network example.
  std::string power_edge_file = "data/ieee39_edges.txt";
  double power_inertia = 1.0;
  double power_damping = 0.5;
  double power_reference = 0.2;

  // Random LTI fixture.
  int random_dim = 4;

  std::string output_dir;

  linalg::TruncationPolicy policy() const;
  wf::FabricCosts fabric() const;
  void validate() const;
};

/// Parse a config file of `key = value` lines ('#' starts a comment).
ExperimentConfig parse_config_file(const std::string& path);

/// Apply one `key=value` assignment; throws on unknown keys or bad values.
void apply_setting(ExperimentConfig& cfg, const std::string& key,
                   const std::string& value);

std::vector<std::pair<std::string, std::string>> config_entries(
    const ExperimentConfig& cfg);

}  // namespace dpcflow::harness
