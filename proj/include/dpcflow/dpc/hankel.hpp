#pragma once

#include <Eigen/Dense>
#include <deque>
#include <stdexcept>
#include <vector>

namespace dpcflow::dpc {

struct NeedsMoreDataError : std::runtime_error {
  NeedsMoreDataError(long long required_, long long have_)
      : std::runtime_error("hankel: need " + std::to_string(required_) +
                           " samples, have " + std::to_string(have_)),
        required(required_),
        have(have_) {}
  long long required;
  long long have;
};

/// Sliding window of (input, next output) sample pairs. Pair i holds u(i)
/// and y(i+1); outputs are indexed from 1 so a window of 2N+j-1 pairs covers
/// u(0..2N+j-2) and y(1..2N+j-1).
class SampleWindow {
 public:
  SampleWindow() = default;
  SampleWindow(int capacity, int input_dim, int output_dim);

  void push(const Eigen::VectorXd& u, const Eigen::VectorXd& y);
  bool full() const { return static_cast<int>(pairs_.size()) == capacity_; }
  int size() const { return static_cast<int>(pairs_.size()); }
  int capacity() const { return capacity_; }
  int input_dim() const { return input_dim_; }
  int output_dim() const { return output_dim_; }

  const Eigen::VectorXd& input(int i) const { return pairs_[i].first; }
  const Eigen::VectorXd& output(int i) const { return pairs_[i].second; }

 private:
  int capacity_ = 0;
  int input_dim_ = 0;
  int output_dim_ = 0;
  std::deque<std::pair<Eigen::VectorXd, Eigen::VectorXd>> pairs_;
};

/// Block Hankel slice [Y_p; U_p; U_f] restricted to columns [c0, c1) of the
/// full window, materialized from the samples the slice spans.
Eigen::MatrixXd build_vp_slice(const SampleWindow& w, int n_horizon, int j_cols,
                               int c0, int c1);

/// Y_f over the active window, l*N x j.
Eigen::MatrixXd build_y_f(const SampleWindow& w, int n_horizon, int j_cols);

/// Current regressor w_p(k) = [y(k-N+1..k); u(k-N..k-1)] over the newest
/// samples of the window.
Eigen::VectorXd latest_w_p(const SampleWindow& w, int n_horizon);

/// The sliding data matrices of one controller instance: U_p, U_f, Y_p, Y_f
/// over N block rows and j columns, maintained over a ring of the last
/// 2N + j - 1 sample pairs.
class HankelSet {
 public:
  HankelSet() = default;

  /// Build from raw sequences; inputs[i] = u(i), outputs[i] = y(i+1). Uses
  /// the most recent 2N + j - 1 pairs; throws NeedsMoreDataError when short.
  static HankelSet build(const std::vector<Eigen::VectorXd>& inputs,
                         const std::vector<Eigen::VectorXd>& outputs,
                         int n_horizon, int j_cols);

  /// Advance the window one step with the newest pair (u(k-1), y(k)).
  void slide(const Eigen::VectorXd& u_new, const Eigen::VectorXd& y_new);

  int n_horizon() const { return n_; }
  int j_cols() const { return j_; }
  int input_dim() const { return m_; }
  int output_dim() const { return l_; }
  const SampleWindow& window() const { return window_; }

  const Eigen::MatrixXd& u_p() const { return u_p_; }
  const Eigen::MatrixXd& u_f() const { return u_f_; }
  const Eigen::MatrixXd& y_p() const { return y_p_; }
  const Eigen::MatrixXd& y_f() const { return y_f_; }

  /// [Y_p; U_p], (l+m)N x j.
  Eigen::MatrixXd w_p() const;
  /// [W_p; U_f], (l+2m)N x j.
  Eigen::MatrixXd v_p() const;
  /// Current regressor w_p(k) = [y(k-N+1..k); u(k-N..k-1)] as one column.
  Eigen::VectorXd w_p_now() const;

 private:
  void rebuild();

  int n_ = 0, j_ = 0, m_ = 0, l_ = 0;
  SampleWindow window_;
  Eigen::MatrixXd u_p_, u_f_, y_p_, y_f_;
};

}  // namespace dpcflow::dpc
