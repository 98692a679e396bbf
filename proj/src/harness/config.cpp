#include "dpcflow/harness/config.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dpcflow::harness {

Method method_from_string(const std::string& s) {
  if (s == "native") return Method::Native;
  if (s == "native_delay_comp") return Method::NativeDelayComp;
  if (s == "workflow") return Method::Workflow;
  if (s == "workflow_dob") return Method::WorkflowDob;
  throw std::invalid_argument("unknown method: " + s);
}

std::string method_name(Method m) {
  switch (m) {
    case Method::Native: return "native";
    case Method::NativeDelayComp: return "native_delay_comp";
    case Method::Workflow: return "workflow";
    case Method::WorkflowDob: return "workflow_dob";
  }
  return "?";
}

linalg::TruncationPolicy ExperimentConfig::policy() const {
  if (truncation == "relative") return linalg::TruncationPolicy::relative(epsilon1);
  if (truncation == "fixed") return linalg::TruncationPolicy::fixed(keep_count);
  if (truncation == "rank_only") return linalg::TruncationPolicy::rank_only();
  throw std::invalid_argument("unknown truncation mode: " + truncation);
}

wf::FabricCosts ExperimentConfig::fabric() const {
  wf::FabricCosts c;
  c.base_latency_us = fabric_base_latency_us;
  c.bandwidth_bytes_per_s = fabric_bandwidth_bps / 8.0;
  c.serialize_bytes_per_s = fabric_serialize_bps / 8.0;
  c.deserialize_bytes_per_s = fabric_deserialize_bps / 8.0;
  return c;
}

void ExperimentConfig::validate() const {
  if (n_horizon < 1 || j_cols < 1) throw std::invalid_argument("config: bad N or j");
  if (control_period_s <= 0.0) throw std::invalid_argument("config: period must be > 0");
  if (duration_steps < 0) throw std::invalid_argument("config: bad duration");
  if (mpt < 1) throw std::invalid_argument("config: mpt must be >= 1");
  if (compute_rate_flops <= 0.0) throw std::invalid_argument("config: bad compute rate");
  (void)policy();
  fabric().validate();
  (void)method_name(method);
}

namespace {

template <typename T>
T parse_num(const std::string& v) {
  std::istringstream in(v);
  T out;
  if (!(in >> out)) throw std::invalid_argument("bad numeric value: " + v);
  std::string rest;
  if (in >> rest) throw std::invalid_argument("trailing junk in value: " + v);
  return out;
}

bool parse_bool(const std::string& v) {
  if (v == "1" || v == "true" || v == "on") return true;
  if (v == "0" || v == "false" || v == "off") return false;
  throw std::invalid_argument("bad boolean value: " + v);
}

std::string trim(const std::string& s) {
  const auto a = s.find_first_not_of(" \t\r");
  if (a == std::string::npos) return "";
  const auto b = s.find_last_not_of(" \t\r");
  return s.substr(a, b - a + 1);
}

}  // namespace

void apply_setting(ExperimentConfig& cfg, const std::string& key,
                   const std::string& value) {
  if (key == "plant") cfg.plant = value;
  else if (key == "method") cfg.method = method_from_string(value);
  else if (key == "n_horizon") cfg.n_horizon = parse_num<int>(value);
  else if (key == "j_cols") cfg.j_cols = parse_num<int>(value);
  else if (key == "lambda") cfg.lambda = parse_num<double>(value);
  else if (key == "truncation") cfg.truncation = value;
  else if (key == "epsilon1") cfg.epsilon1 = parse_num<double>(value);
  else if (key == "keep_count") cfg.keep_count = parse_num<int>(value);
  else if (key == "observer_gain") cfg.observer_gain = parse_num<double>(value);
  else if (key == "control_period_s") cfg.control_period_s = parse_num<double>(value);
  else if (key == "duration_steps") cfg.duration_steps = parse_num<int>(value);
  else if (key == "mpt") cfg.mpt = parse_num<int>(value);
  else if (key == "fold_into_export") cfg.fold_into_export = parse_num<int>(value);
  else if (key == "seed") cfg.seed = parse_num<std::uint64_t>(value);
  else if (key == "warmup_dither") cfg.warmup_dither = parse_num<double>(value);
  else if (key == "measurement_noise") cfg.measurement_noise = parse_num<double>(value);
  else if (key == "divergence_guard") cfg.divergence_guard = parse_num<double>(value);
  else if (key == "trace_bounds") cfg.trace_bounds = parse_bool(value);
  else if (key == "bounds_every") cfg.bounds_every = parse_num<int>(value);
  else if (key == "realtime") cfg.realtime = parse_bool(value);
  else if (key == "fabric.base_latency_us") cfg.fabric_base_latency_us = parse_num<double>(value);
  else if (key == "fabric.bandwidth_bps") cfg.fabric_bandwidth_bps = parse_num<double>(value);
  else if (key == "fabric.serialize_bps") cfg.fabric_serialize_bps = parse_num<double>(value);
  else if (key == "fabric.deserialize_bps") cfg.fabric_deserialize_bps = parse_num<double>(value);
  else if (key == "fabric.compute_rate_flops") cfg.compute_rate_flops = parse_num<double>(value);
  else if (key == "fabric.real_sleep") cfg.fabric_real_sleep = parse_bool(value);
  else if (key == "ball_beam.reference_warmup") cfg.bb_reference_warmup = parse_num<double>(value);
  else if (key == "ball_beam.reference_dpc") cfg.bb_reference_dpc = parse_num<double>(value);
  else if (key == "pid.kp") cfg.pid_kp = parse_num<double>(value);
  else if (key == "pid.ki") cfg.pid_ki = parse_num<double>(value);
  else if (key == "pid.kd") cfg.pid_kd = parse_num<double>(value);
  else if (key == "vehicle.speed_kmh") cfg.vehicle_speed_kmh = parse_num<double>(value);
  else if (key == "vehicle.wheelbase") cfg.vehicle_wheelbase = parse_num<double>(value);
  else if (key == "vehicle.curvature") cfg.vehicle_curvature = parse_num<double>(value);
  else if (key == "lqr.q_scale") cfg.lqr_q_scale = parse_num<double>(value);
  else if (key == "lqr.r_scale") cfg.lqr_r_scale = parse_num<double>(value);
  else if (key == "power.edge_file") cfg.power_edge_file = value;
  else if (key == "power.inertia") cfg.power_inertia = parse_num<double>(value);
  else if (key == "power.damping") cfg.power_damping = parse_num<double>(value);
  else if (key == "power.reference") cfg.power_reference = parse_num<double>(value);
  else if (key == "random.dim") cfg.random_dim = parse_num<int>(value);
  else if (key == "output_dir") cfg.output_dir = value;
  else throw std::invalid_argument("unknown config key: " + key);
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open config file: " + path);
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) +
                               ": expected key = value");
    }
    try {
      apply_setting(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
    } catch (const std::exception& e) {
      throw std::runtime_error(path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  cfg.validate();
  return cfg;
}

std::vector<std::pair<std::string, std::string>> config_entries(
    const ExperimentConfig& cfg) {
  auto num = [](double v) {
    std::ostringstream out;
    out.precision(17);
    out << v;
    return out.str();
  };
  return {
      {"plant", cfg.plant},
      {"method", method_name(cfg.method)},
      {"n_horizon", std::to_string(cfg.n_horizon)},
      {"j_cols", std::to_string(cfg.j_cols)},
      {"lambda", num(cfg.lambda)},
      {"truncation", cfg.truncation},
      {"epsilon1", num(cfg.epsilon1)},
      {"keep_count", std::to_string(cfg.keep_count)},
      {"observer_gain", num(cfg.observer_gain)},
      {"control_period_s", num(cfg.control_period_s)},
      {"duration_steps", std::to_string(cfg.duration_steps)},
      {"mpt", std::to_string(cfg.mpt)},
      {"seed", std::to_string(cfg.seed)},
  };
}

}  // namespace dpcflow::harness
