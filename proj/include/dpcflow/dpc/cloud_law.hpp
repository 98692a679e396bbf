#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <functional>

#include "dpcflow/dpc/hankel.hpp"
#include "dpcflow/linalg/svd.hpp"

namespace dpcflow::dpc {

/// Coefficient matrices of one controller update: [L_w L_u] = Y_f * V_p^+,
/// plus the first block-rows the edge compensator needs.
struct CloudParams {
  Eigen::MatrixXd l_w;        // l*N x (l+m)*N
  Eigen::MatrixXd l_u;        // l*N x m*N
  Eigen::MatrixXd a_hat_row;  // first l rows of l_w
  Eigen::MatrixXd b_hat_row;  // first l rows of l_u
  int retained_rank = 0;
  bool degenerate = false;
};

/// Per-step output of the cloud side, shipped to the edge node.
struct CloudPacket {
  Eigen::VectorXd u_cloud;     // first block of the predicted sequence
  Eigen::VectorXd u_sequence;  // full m*N predicted control sequence
  Eigen::MatrixXd a_hat_row;   // l x (l+m)*N
  Eigen::MatrixXd b_hat_row;   // l x m*N
  Eigen::MatrixXd b_hat;       // l x m, first block of b_hat_row
  int retained_rank = 0;
  bool degenerate = false;
  std::int64_t data_time = 0;       // step index of the sensed data used
  double sensed_sent_at_us = 0.0;   // edge sent the sensed data (virtual clock)
  double sent_at_us = 0.0;          // cloud finished and sent the packet
  double received_at_us = 0.0;      // edge received the packet

  double total_delay_us() const { return received_at_us - sensed_sent_at_us; }
};

/// Produces (possibly pre-truncated) factors of V_p; the dense reference path
/// and the distributed path are both expressed as providers.
using FactorizationProvider =
    std::function<linalg::SvdFactors(const Eigen::MatrixXd& v_p)>;

FactorizationProvider dense_provider();
FactorizationProvider workflow_provider(int col, linalg::TruncationPolicy policy);

/// [L_w L_u] = Y_f * V_p^+ with V_p^+ taken from the policy-truncated factors
/// the provider returns. A degenerate spectrum yields a flagged result with
/// retained_rank 1.
CloudParams compute_cloud_params(const HankelSet& h,
                                 const linalg::TruncationPolicy& policy,
                                 const FactorizationProvider& provider);

/// Unconstrained predictive control law
///   u_f(k) = (lambda*I + L_u^T L_u)^-1 L_u^T (r_f - L_w w_p(k)),
/// solved as an SPD system. lambda is clamped below at 1e-12.
Eigen::VectorXd control_sequence(const CloudParams& params,
                                 const Eigen::VectorXd& w_p_now,
                                 const Eigen::VectorXd& r_f, double lambda);

/// Assemble the packet for the edge from one controller update.
CloudPacket make_cloud_packet(const CloudParams& params,
                              const Eigen::VectorXd& u_sequence, int input_dim,
                              std::int64_t data_time);

}  // namespace dpcflow::dpc
