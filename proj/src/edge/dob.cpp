#include "dpcflow/edge/dob.hpp"

#include <stdexcept>

#include "dpcflow/linalg/lyapunov.hpp"

namespace dpcflow::edge {

EdgeBuffer::EdgeBuffer(int n_horizon, int input_dim, int output_dim)
    : n_(n_horizon), m_(input_dim), l_(output_dim) {
  if (n_horizon < 1) throw std::invalid_argument("EdgeBuffer: N must be >= 1");
}

void EdgeBuffer::push_input(const Eigen::VectorXd& u) {
  if (u.size() != m_) throw std::invalid_argument("EdgeBuffer: bad input size");
  u_hist_.push_back(u);
  if (static_cast<int>(u_hist_.size()) > n_) u_hist_.pop_front();
}

void EdgeBuffer::push_output(const Eigen::VectorXd& y) {
  if (y.size() != l_) throw std::invalid_argument("EdgeBuffer: bad output size");
  y_hist_.push_back(y);
  if (static_cast<int>(y_hist_.size()) > n_) y_hist_.pop_front();
}

bool EdgeBuffer::warm() const {
  return static_cast<int>(u_hist_.size()) == n_ &&
         static_cast<int>(y_hist_.size()) == n_;
}

Eigen::VectorXd EdgeBuffer::stacked_inputs() const {
  Eigen::VectorXd v(m_ * static_cast<int>(u_hist_.size()));
  for (size_t i = 0; i < u_hist_.size(); ++i) v.segment(i * m_, m_) = u_hist_[i];
  return v;
}

Eigen::VectorXd EdgeBuffer::stacked_outputs() const {
  Eigen::VectorXd v(l_ * static_cast<int>(y_hist_.size()));
  for (size_t i = 0; i < y_hist_.size(); ++i) v.segment(i * l_, l_) = y_hist_[i];
  return v;
}

DobState make_dob(const Eigen::MatrixXd& gain, int input_dim, int output_dim) {
  if (gain.rows() != input_dim || gain.cols() != output_dim) {
    throw std::invalid_argument("make_dob: gain must be input_dim x output_dim");
  }
  DobState s;
  s.gain = gain;
  s.p_aux = Eigen::VectorXd::Zero(input_dim);
  s.d_hat = Eigen::VectorXd::Zero(input_dim);
  return s;
}

GainVerdict verify_observer_gain(const Eigen::MatrixXd& gain_l,
                                 const Eigen::MatrixXd& b_hat,
                                 const Eigen::MatrixXd& q) {
  GainVerdict v;
  const Eigen::MatrixXd h = -gain_l * b_hat;
  v.spectral_radius = linalg::spectral_radius(h);
  if (v.spectral_radius >= 1.0) {
    v.stable = false;
    return v;
  }
  v.p = linalg::solve_discrete_lyapunov(h, q);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> pe(v.p);
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> qe(q);
  v.delta = qe.eigenvalues().minCoeff() / pe.eigenvalues().maxCoeff();
  v.stable = true;
  return v;
}

Eigen::VectorXd dob_update(DobState& state, const EdgeBuffer& buf,
                           const CloudPacket& pkt, const Eigen::VectorXd& y_now) {
  const int m = static_cast<int>(state.gain.rows());
  if (!state.active || !state.have_pred || !buf.warm()) {
    state.d_hat = Eigen::VectorXd::Zero(m);
    return state.d_hat;
  }
  const Eigen::MatrixXd h = -state.gain * pkt.b_hat;
  if (linalg::spectral_radius(h) >= 1.0) {
    state.frozen_steps++;  // keep the previous estimate for this step
    return state.d_hat;
  }
  state.p_aux = -state.gain * state.y_pred;
  state.d_hat = state.p_aux + state.gain * y_now;
  return state.d_hat;
}

void dob_commit(DobState& state, const EdgeBuffer& buf, const CloudPacket& pkt,
                const Eigen::VectorXd& u_applied) {
  if (!buf.warm()) return;
  // The first block-row of L_w spans the whole regressor [y window; u window]:
  // its leading l*N columns are the a_i coefficients, the trailing m*N the
  // b_i ones. Only the first block of L_u's row (b_hat) enters, multiplying
  // the applied input; adding b_hat*d_hat keeps the auxiliary-form update
  // exact whether or not the compensation was applied.
  const Eigen::VectorXd y_win = buf.stacked_outputs();
  const Eigen::VectorXd u_win = buf.stacked_inputs();
  if (pkt.a_hat_row.cols() != y_win.size() + u_win.size()) {
    throw std::invalid_argument("dob_commit: packet row width does not match the buffer");
  }
  Eigen::VectorXd w(y_win.size() + u_win.size());
  w << y_win, u_win;
  state.y_pred = pkt.a_hat_row * w + pkt.b_hat * (u_applied + state.d_hat);
  state.prev_a_row = pkt.a_hat_row;
  state.prev_b_row = pkt.b_hat_row;
  state.prev_b_hat = pkt.b_hat;
  state.prev_u_cloud = pkt.u_cloud;
  state.have_pred = true;
}

Eigen::VectorXd composite_control(const CloudPacket& pkt,
                                  const Eigen::VectorXd& d_hat, long long k,
                                  int n_horizon) {
  if (k <= n_horizon) return pkt.u_cloud;
  return pkt.u_cloud - d_hat;
}

Eigen::VectorXd delay_compensator_select(const Eigen::VectorXd& sequence,
                                         int input_dim, double total_delay,
                                         double period) {
  if (period <= 0.0) throw std::invalid_argument("delay_compensator_select: period must be > 0");
  if (input_dim < 1 || sequence.size() % input_dim != 0) {
    throw std::invalid_argument("delay_compensator_select: bad sequence shape");
  }
  const long long blocks = sequence.size() / input_dim;
  long long index = static_cast<long long>(std::floor(total_delay / period));
  index = std::max(0LL, std::min(index, blocks - 1));
  return sequence.segment(index * input_dim, input_dim);
}

}  // namespace dpcflow::edge
