#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>
#include <memory>
#include <string>
#include <thread>
#include <vector>

#include "dpcflow/dpc/cloud_law.hpp"
#include "dpcflow/linalg/svd.hpp"
#include "dpcflow/workflow/dag.hpp"
#include "dpcflow/workflow/fabric.hpp"

namespace dpcflow::wf {

struct SwitchRefusedError : std::runtime_error {
  SwitchRefusedError(long long remaining_)
      : std::runtime_error("topology switch refused: " + std::to_string(remaining_) +
                           " warm-up samples remaining"),
        remaining(remaining_) {}
  long long remaining;
};

struct InitializationError : std::runtime_error {
  InitializationError(int task_id_, const std::string& what_)
      : std::runtime_error(what_), task_id(task_id_) {}
  int task_id;
};

struct WorkerError : std::runtime_error {
  WorkerError(int task_id_, const std::string& what_)
      : std::runtime_error("task_" + std::to_string(task_id_) + ": " + what_),
        task_id(task_id_) {}
  int task_id;
};

struct EngineOptions {
  linalg::TruncationPolicy policy;
  FabricCosts costs;
  int n_horizon = 0;
  int j_cols = 0;
  int input_dim = 0;
  int output_dim = 0;
  double lambda = 1.0;
  double compute_rate_flops = 5e10;  // virtual flops/second for modeled compute
  double barrier_deadline_s = 10.0;
  // Wall-clock demo mode: workers really sleep for each edge's modeled cost
  // instead of only charging it to the virtual clock.
  bool real_sleep = false;
  std::string address_space = "local";
  // Warm-up pre-controller run by the router (image A, data-preparation role).
  std::function<Eigen::VectorXd(const Eigen::VectorXd& y, long long step)> warmup_control;

  // Test hooks.
  std::uint64_t jitter_seed = 0;
  double send_jitter_max_us = 0.0;  // random sleep before each send
  int fault_unready_task = -1;      // worker never posts ready
  int fault_unregistered_task = -1; // worker never registers its address
  int fault_fail_task = -1;         // worker throws during this round
  long long fault_fail_round = -1;
};

struct RoundTaskMetrics {
  int task_id = 0;
  double compute_us_measured = 0.0;
  double modeled_flops = 0.0;
  double modeled_compute_us = 0.0;
  double serialize_us = 0.0;  // modeled handling cost of bytes sent (ser+deser)
  double transfer_us = 0.0;   // modeled wire time + base latency of bytes sent
  long long bytes_out = 0;
};

struct EdgeBytes {
  int from = 0;
  int to = 0;
  long long bytes = 0;
};

struct RoundMetrics {
  std::int64_t round = 0;
  std::vector<RoundTaskMetrics> tasks;
  std::vector<EdgeBytes> edges;
  double modeled_path_us = 0.0;        // critical path through the DAG
  double path_compute_us = 0.0;        // compute share of the critical path
  double path_noncompute_us = 0.0;     // serialize/transfer/deserialize share
  double total_noncompute_us = 0.0;    // cost model summed over every edge
  long long total_bytes = 0;           // all task-to-task traffic this round
  long long uplink_bytes = 0;          // sample message into the router
  long long downlink_bytes = 0;        // packet message out of the export
};

/// In-process simulation of the containerised workflow: one concurrent worker
/// per task connected by point-to-point channels, a key-value registry for
/// initialization, a pyramid ready/start barrier, and warm-up/DPC topology
/// switching. Values are exchanged as length-prefixed binary frames so the
/// cost model can account serialize/transfer/deserialize per edge.
class WorkflowEngine {
 public:
  enum class Mode { WarmUp, Dpc };

  WorkflowEngine(WorkflowDag dag, EngineOptions opt);
  ~WorkflowEngine();

  WorkflowEngine(const WorkflowEngine&) = delete;
  WorkflowEngine& operator=(const WorkflowEngine&) = delete;

  /// Twelve-step container initialization: DAG into the registry, workers
  /// resolve names to addresses and open their channels.
  void initialize_workers();

  /// Pyramid barrier: wait for every worker's `ready`, then broadcast `start`.
  void start();

  /// Router's pre-controller output for the current measurement.
  Eigen::VectorXd warmup_control(const Eigen::VectorXd& y, long long step);

  /// Stream one completed sample pair (u(t), y(t+1)) to every Hankel slice.
  void feed_pair(const Eigen::VectorXd& u, const Eigen::VectorXd& y);

  /// Refused with the outstanding sample count until the buffers hold
  /// 2N + j - 1 pairs.
  void switch_topology(Mode mode);
  Mode mode() const { return mode_; }

  std::pair<dpc::CloudPacket, RoundMetrics> execute_round(
      const Eigen::VectorXd& u_prev, const Eigen::VectorXd& y_now,
      const Eigen::VectorXd& r_f, std::int64_t data_time);

  long long samples_buffered() const { return samples_; }
  long long samples_required() const {
    return 2LL * opt_.n_horizon + opt_.j_cols - 1;
  }

  const WorkflowDag& dag() const { return dag_; }
  const MessageLog& log() const { return log_; }
  const Registry& registry() const { return registry_; }
  /// Logical channel graph (from-address, to-address), for topology checks.
  std::vector<std::pair<std::string, std::string>> channel_edges() const;

  void shutdown();

 private:
  struct Collector;
  void worker_main(int task_id);
  void throw_pending_error();
  RoundMetrics assemble_metrics(std::int64_t round, long long uplink_bytes,
                                long long downlink_bytes);

  WorkflowDag dag_;
  EngineOptions opt_;
  Registry registry_;
  MessageLog log_;
  ChannelHub hub_;
  std::unique_ptr<PyramidBarrier> barrier_;
  std::shared_ptr<Channel> to_router_;
  std::shared_ptr<Channel> results_;
  std::unique_ptr<Collector> collector_;
  std::vector<std::thread> threads_;
  Mode mode_ = Mode::WarmUp;
  long long samples_ = 0;
  std::int64_t round_ = 0;
  bool started_ = false;
  bool shut_down_ = false;
};

}  // namespace dpcflow::wf
