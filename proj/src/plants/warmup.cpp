#include "dpcflow/plants/warmup.hpp"

#include <stdexcept>

namespace dpcflow::plants {

PidWarmup::PidWarmup(PidGains gains, double dt, double reference,
                     double dither_amp, std::uint64_t seed)
    : gains_(gains), dt_(dt), reference_(reference), dither_(dither_amp, seed) {
  if (dt <= 0.0) throw std::invalid_argument("PidWarmup: dt must be positive");
}

Eigen::VectorXd PidWarmup::operator()(const Eigen::VectorXd& y) {
  const double e = reference_ - y(0);
  integral_ += e;
  const double u = gains_.kp * e + gains_.ki * dt_ * integral_ +
                   gains_.kd * (e - e_prev_) / dt_;
  e_prev_ = e;
  return Eigen::VectorXd::Constant(1, u) + dither_.sample(1);
}

Eigen::MatrixXd lqr_gain(const LtiModel& m, const Eigen::MatrixXd& q,
                         const Eigen::MatrixXd& r) {
  m.validate();
  if (!m.is_discrete) throw std::invalid_argument("lqr_gain: model must be discrete");
  if (q.rows() != m.n_states() || r.rows() != m.n_inputs()) {
    throw std::invalid_argument("lqr_gain: weight dimension mismatch");
  }
  const Eigen::MatrixXd& a = m.a;
  const Eigen::MatrixXd& b = m.b;
  Eigen::MatrixXd p = q;
  for (int it = 0; it < 100000; ++it) {
    const Eigen::MatrixXd btp = b.transpose() * p;
    const Eigen::MatrixXd gain_term =
        (r + btp * b).ldlt().solve(btp * a);
    Eigen::MatrixXd next =
        q + a.transpose() * p * a - a.transpose() * p * b * gain_term;
    next = 0.5 * (next + next.transpose().eval());
    const double delta = (next - p).norm();
    p = std::move(next);
    if (!p.allFinite()) throw std::runtime_error("lqr_gain: iteration diverged");
    if (delta < 1e-10) {
      const Eigen::MatrixXd btp2 = b.transpose() * p;
      return (r + btp2 * b).ldlt().solve(btp2 * a);
    }
  }
  throw std::runtime_error("lqr_gain: no convergence after 100000 iterations");
}

LqrWarmup::LqrWarmup(Eigen::MatrixXd k, double dither_amp, std::uint64_t seed)
    : k_(std::move(k)), dither_(dither_amp, seed) {}

Eigen::VectorXd LqrWarmup::operator()(const Eigen::VectorXd& x) {
  if (x.size() != k_.cols()) throw std::invalid_argument("LqrWarmup: bad state size");
  return -k_ * x + dither_.sample(static_cast<int>(k_.rows()));
}

}  // namespace dpcflow::plants
