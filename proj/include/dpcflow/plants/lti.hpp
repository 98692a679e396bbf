#pragma once

#include <Eigen/Dense>
#include <cstdint>

namespace dpcflow::plants {

/// State-space model x' = A x + B u, y = C x + D u. Continuous until
/// discretize_zoh stamps it with a sample period.
struct LtiModel {
  Eigen::MatrixXd a, b, c, d;
  double dt = 0.0;
  bool is_discrete = false;

  int n_states() const { return static_cast<int>(a.rows()); }
  int n_inputs() const { return static_cast<int>(b.cols()); }
  int n_outputs() const { return static_cast<int>(c.rows()); }
  void validate() const;
};

/// Zero-order-hold discretization through the augmented matrix exponential
/// exp([[A, B], [0, 0]] * dt), evaluated by scaling-and-squaring with a
/// series tolerance of 1e-12.
LtiModel discretize_zoh(const LtiModel& m, double dt);

/// Matrix exponential by scaling-and-squaring Taylor series.
Eigen::MatrixXd expm(const Eigen::MatrixXd& a);

/// Random discrete-time model with unit-variance entries, A rescaled to
/// spectral radius 0.9, C = I, D = 0.
LtiModel random_discrete_model(int n_states, int n_inputs, std::uint64_t seed);

/// Steps a discrete model while tracking its state.
class PlantSim {
 public:
  PlantSim() = default;
  PlantSim(LtiModel model, Eigen::VectorXd x0);

  /// Output before applying this step's input.
  Eigen::VectorXd output() const;
  /// Advance one period with input u; returns the next output.
  Eigen::VectorXd step(const Eigen::VectorXd& u);

  const Eigen::VectorXd& state() const { return x_; }
  const LtiModel& model() const { return model_; }

 private:
  LtiModel model_;
  Eigen::VectorXd x_;
};

}  // namespace dpcflow::plants
