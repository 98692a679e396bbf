#pragma once

#include <Eigen/Dense>
#include <cstdint>
#include <random>

#include "dpcflow/plants/lti.hpp"

namespace dpcflow::plants {

/// Uniform excitation noise added to warm-up controls so the collected data
/// is persistently exciting.
class Dither {
 public:
  Dither(double amplitude, std::uint64_t seed)
      : amplitude_(amplitude), rng_(seed), dist_(-1.0, 1.0) {}

  Eigen::VectorXd sample(int dim) {
    Eigen::VectorXd d(dim);
    for (int i = 0; i < dim; ++i) d(i) = amplitude_ * dist_(rng_);
    return d;
  }

 private:
  double amplitude_;
  std::mt19937_64 rng_;
  std::uniform_real_distribution<double> dist_;
};

struct PidGains {
  double kp = 0.0;
  double ki = 0.0;
  double kd = 0.0;
};

/// Discrete positional PID on the first output:
///   u = kp*e + ki*dt*sum(e) + kd*(e - e_prev)/dt  (+ dither).
class PidWarmup {
 public:
  PidWarmup(PidGains gains, double dt, double reference, double dither_amp,
            std::uint64_t seed);

  Eigen::VectorXd operator()(const Eigen::VectorXd& y);
  void set_reference(double r) { reference_ = r; }

 private:
  PidGains gains_;
  double dt_;
  double reference_;
  double integral_ = 0.0;
  double e_prev_ = 0.0;
  Dither dither_;
};

/// Steady-state discrete LQR gain by backward Riccati iteration, stopping at
/// ||dP|| < 1e-10. Throws after 100000 iterations without convergence.
Eigen::MatrixXd lqr_gain(const LtiModel& discrete_model, const Eigen::MatrixXd& q,
                         const Eigen::MatrixXd& r);

/// u = -K x + dither over the measured state (these plants expose full state).
class LqrWarmup {
 public:
  LqrWarmup(Eigen::MatrixXd k, double dither_amp, std::uint64_t seed);

  Eigen::VectorXd operator()(const Eigen::VectorXd& x);

 private:
  Eigen::MatrixXd k_;
  Dither dither_;
};

}  // namespace dpcflow::plants
