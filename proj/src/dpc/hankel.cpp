#include "dpcflow/dpc/hankel.hpp"

namespace dpcflow::dpc {

SampleWindow::SampleWindow(int capacity, int input_dim, int output_dim)
    : capacity_(capacity), input_dim_(input_dim), output_dim_(output_dim) {
  if (capacity < 1) throw std::invalid_argument("SampleWindow: capacity must be >= 1");
}

void SampleWindow::push(const Eigen::VectorXd& u, const Eigen::VectorXd& y) {
  if (u.size() != input_dim_ || y.size() != output_dim_) {
    throw std::invalid_argument("SampleWindow: sample dimension mismatch");
  }
  pairs_.emplace_back(u, y);
  if (static_cast<int>(pairs_.size()) > capacity_) pairs_.pop_front();
}

Eigen::MatrixXd build_vp_slice(const SampleWindow& w, int n_horizon, int j_cols,
                               int c0, int c1) {
  const int need = 2 * n_horizon + j_cols - 1;
  if (w.size() < need) throw NeedsMoreDataError(need, w.size());
  if (c0 < 0 || c1 > j_cols || c0 >= c1) {
    throw std::invalid_argument("build_vp_slice: bad column range");
  }
  const int m = w.input_dim();
  const int l = w.output_dim();
  const int n = n_horizon;
  const int base = w.size() - need;  // oldest pair of the active window
  const int width = c1 - c0;

  Eigen::MatrixXd vp((l + 2 * m) * n, width);
  for (int c = 0; c < width; ++c) {
    const int col = c0 + c;
    for (int r = 0; r < n; ++r) {
      // Column col, block row r: y(col+r+1), u(col+r), u(N+col+r).
      vp.block(r * l, c, l, 1) = w.output(base + col + r);
      vp.block(l * n + r * m, c, m, 1) = w.input(base + col + r);
      vp.block((l + m) * n + r * m, c, m, 1) = w.input(base + n + col + r);
    }
  }
  return vp;
}

Eigen::MatrixXd build_y_f(const SampleWindow& w, int n_horizon, int j_cols) {
  const int need = 2 * n_horizon + j_cols - 1;
  if (w.size() < need) throw NeedsMoreDataError(need, w.size());
  const int l = w.output_dim();
  const int base = w.size() - need;
  Eigen::MatrixXd yf(l * n_horizon, j_cols);
  for (int c = 0; c < j_cols; ++c) {
    for (int r = 0; r < n_horizon; ++r) {
      yf.block(r * l, c, l, 1) = w.output(base + n_horizon + c + r);
    }
  }
  return yf;
}

Eigen::VectorXd latest_w_p(const SampleWindow& w, int n_horizon) {
  if (w.size() < n_horizon) throw NeedsMoreDataError(n_horizon, w.size());
  const int m = w.input_dim();
  const int l = w.output_dim();
  const int last = w.size() - 1;
  Eigen::VectorXd wp((l + m) * n_horizon);
  for (int r = 0; r < n_horizon; ++r) {
    wp.segment(r * l, l) = w.output(last - n_horizon + 1 + r);
    wp.segment(l * n_horizon + r * m, m) = w.input(last - n_horizon + 1 + r);
  }
  return wp;
}

HankelSet HankelSet::build(const std::vector<Eigen::VectorXd>& inputs,
                           const std::vector<Eigen::VectorXd>& outputs,
                           int n_horizon, int j_cols) {
  if (n_horizon < 1 || j_cols < 1) {
    throw std::invalid_argument("HankelSet: N and j must be >= 1");
  }
  if (inputs.size() != outputs.size()) {
    throw std::invalid_argument("HankelSet: input/output sample counts differ");
  }
  const long long need = 2LL * n_horizon + j_cols - 1;
  if (static_cast<long long>(inputs.size()) < need) {
    throw NeedsMoreDataError(need, static_cast<long long>(inputs.size()));
  }
  HankelSet h;
  h.n_ = n_horizon;
  h.j_ = j_cols;
  h.m_ = static_cast<int>(inputs.front().size());
  h.l_ = static_cast<int>(outputs.front().size());
  h.window_ = SampleWindow(static_cast<int>(need), h.m_, h.l_);
  const size_t start = inputs.size() - static_cast<size_t>(need);
  for (size_t i = start; i < inputs.size(); ++i) {
    h.window_.push(inputs[i], outputs[i]);
  }
  h.rebuild();
  return h;
}

void HankelSet::slide(const Eigen::VectorXd& u_new, const Eigen::VectorXd& y_new) {
  window_.push(u_new, y_new);
  rebuild();
}

void HankelSet::rebuild() {
  u_p_.resize(n_ * m_, j_);
  u_f_.resize(n_ * m_, j_);
  y_p_.resize(n_ * l_, j_);
  y_f_.resize(n_ * l_, j_);
  for (int c = 0; c < j_; ++c) {
    for (int r = 0; r < n_; ++r) {
      u_p_.block(r * m_, c, m_, 1) = window_.input(c + r);
      u_f_.block(r * m_, c, m_, 1) = window_.input(n_ + c + r);
      // Outputs are stored one step ahead of inputs: pair i carries y(i+1),
      // so Y_p(r, c) = y(r + c + 1) comes from pair r + c.
      y_p_.block(r * l_, c, l_, 1) = window_.output(c + r);
      y_f_.block(r * l_, c, l_, 1) = window_.output(n_ + c + r);
    }
  }
}

Eigen::MatrixXd HankelSet::w_p() const {
  Eigen::MatrixXd wp((l_ + m_) * n_, j_);
  wp.topRows(l_ * n_) = y_p_;
  wp.bottomRows(m_ * n_) = u_p_;
  return wp;
}

Eigen::MatrixXd HankelSet::v_p() const {
  Eigen::MatrixXd vp((l_ + 2 * m_) * n_, j_);
  vp.topRows(l_ * n_) = y_p_;
  vp.middleRows(l_ * n_, m_ * n_) = u_p_;
  vp.bottomRows(m_ * n_) = u_f_;
  return vp;
}

Eigen::VectorXd HankelSet::w_p_now() const {
  Eigen::VectorXd wp((l_ + m_) * n_);
  const int last = window_.size() - 1;
  for (int r = 0; r < n_; ++r) {
    wp.segment(r * l_, l_) = window_.output(last - n_ + 1 + r);
    wp.segment(l_ * n_ + r * m_, m_) = window_.input(last - n_ + 1 + r);
  }
  return wp;
}

}  // namespace dpcflow::dpc
