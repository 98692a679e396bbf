#pragma once

#include <Eigen/Dense>
#include <deque>

#include "dpcflow/dpc/cloud_law.hpp"

namespace dpcflow::edge {

using dpc::CloudPacket;

/// Edge-side history: the last N applied inputs u(k-N..k-1) and measured
/// outputs y(k-N+1..k).
class EdgeBuffer {
 public:
  EdgeBuffer() = default;
  EdgeBuffer(int n_horizon, int input_dim, int output_dim);

  void push_input(const Eigen::VectorXd& u);
  void push_output(const Eigen::VectorXd& y);
  bool warm() const;
  int n_horizon() const { return n_; }

  /// Inputs stacked oldest-first, m*N.
  Eigen::VectorXd stacked_inputs() const;
  /// Outputs stacked oldest-first, l*N.
  Eigen::VectorXd stacked_outputs() const;

 private:
  int n_ = 0, m_ = 0, l_ = 0;
  std::deque<Eigen::VectorXd> u_hist_, y_hist_;
};

/// Disturbance observer d_hat(k) = P(k) + L*y(k) over the nominal one-step
/// predictor assembled from the cloud packet's first block-rows. The runtime
/// update is the measurement form: the previous step's prediction of y(k) is
/// cached at commit time, so the estimate is the gain times the innovation.
struct DobState {
  Eigen::MatrixXd gain;   // m x l observer gain L
  Eigen::VectorXd p_aux;  // auxiliary vector P(k)
  Eigen::VectorXd d_hat;  // current disturbance estimate
  bool active = false;    // false until the idle window k <= N has passed
  bool have_pred = false;
  Eigen::VectorXd y_pred;  // cached nominal prediction of y(k)
  // Previous-step packet rows, kept for the verbatim measurement form.
  Eigen::MatrixXd prev_a_row, prev_b_row, prev_b_hat;
  Eigen::VectorXd prev_u_cloud;
  long long frozen_steps = 0;  // steps skipped because the gain was unstable
};

DobState make_dob(const Eigen::MatrixXd& gain, int input_dim, int output_dim);

/// Result of checking an observer gain against the current b_hat:
/// H = -L * b_hat must be a contraction for the error dynamics to be UUB.
struct GainVerdict {
  bool stable = false;
  double spectral_radius = 0.0;
  double delta = 0.0;  // lambda_min(Q) / lambda_max(P), in (0, 1]
  Eigen::MatrixXd p;   // solves H^T P H - P = -Q when stable
};

GainVerdict verify_observer_gain(const Eigen::MatrixXd& gain_l,
                                 const Eigen::MatrixXd& b_hat,
                                 const Eigen::MatrixXd& q);

/// Estimate the input disturbance at step k from the measured output. Returns
/// zero while inactive; freezes the previous estimate (and counts it) when
/// the gain is unstable against the packet's current b_hat.
Eigen::VectorXd dob_update(DobState& state, const EdgeBuffer& buf,
                           const CloudPacket& pkt, const Eigen::VectorXd& y_now);

/// Cache the nominal prediction of y(k+1) from the packet applied at step k.
/// Call after y(k) was pushed to the buffer and before u(k) is pushed.
void dob_commit(DobState& state, const EdgeBuffer& buf, const CloudPacket& pkt,
                const Eigen::VectorXd& u_applied);

/// u(k) = u_cloud(k) - d_hat(k) once the idle window k <= N has passed.
Eigen::VectorXd composite_control(const CloudPacket& pkt,
                                  const Eigen::VectorXd& d_hat, long long k,
                                  int n_horizon);

/// Pick the block of the predicted sequence matching the packet's age:
/// index = floor(total_delay / period), clamped to the last block.
Eigen::VectorXd delay_compensator_select(const Eigen::VectorXd& sequence,
                                         int input_dim, double total_delay,
                                         double period);

}  // namespace dpcflow::edge
