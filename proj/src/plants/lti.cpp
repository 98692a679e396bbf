#include "dpcflow/plants/lti.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace dpcflow::plants {

void LtiModel::validate() const {
  if (a.rows() != a.cols()) throw std::invalid_argument("LtiModel: A must be square");
  if (b.rows() != a.rows()) throw std::invalid_argument("LtiModel: B row mismatch");
  if (c.cols() != a.cols()) throw std::invalid_argument("LtiModel: C column mismatch");
  if (d.rows() != c.rows() || d.cols() != b.cols()) {
    throw std::invalid_argument("LtiModel: D shape mismatch");
  }
}

Eigen::MatrixXd expm(const Eigen::MatrixXd& a) {
  if (a.rows() != a.cols()) throw std::invalid_argument("expm: matrix must be square");
  if (!a.allFinite()) throw std::invalid_argument("expm: non-finite entries");
  const Eigen::Index n = a.rows();

  const double norm = a.cwiseAbs().rowwise().sum().maxCoeff();  // inf-norm
  int squarings = 0;
  if (norm > 0.5) {
    squarings = static_cast<int>(std::ceil(std::log2(norm / 0.5)));
  }
  const Eigen::MatrixXd t = a / std::pow(2.0, squarings);

  Eigen::MatrixXd result = Eigen::MatrixXd::Identity(n, n);
  Eigen::MatrixXd term = Eigen::MatrixXd::Identity(n, n);
  for (int k = 1; k <= 40; ++k) {
    term = (term * t) / static_cast<double>(k);
    result += term;
    if (term.norm() <= 1e-16 * result.norm()) break;
  }
  for (int i = 0; i < squarings; ++i) result = result * result;
  return result;
}

LtiModel discretize_zoh(const LtiModel& m, double dt) {
  m.validate();
  if (m.is_discrete) throw std::invalid_argument("discretize_zoh: model already discrete");
  if (dt <= 0.0) throw std::invalid_argument("discretize_zoh: dt must be positive");

  const int n = m.n_states();
  const int p = m.n_inputs();
  Eigen::MatrixXd aug = Eigen::MatrixXd::Zero(n + p, n + p);
  aug.topLeftCorner(n, n) = m.a * dt;
  aug.topRightCorner(n, p) = m.b * dt;
  const Eigen::MatrixXd e = expm(aug);

  LtiModel out = m;
  out.a = e.topLeftCorner(n, n);
  out.b = e.topRightCorner(n, p);
  out.dt = dt;
  out.is_discrete = true;
  return out;
}

LtiModel random_discrete_model(int n_states, int n_inputs, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  auto fill = [&](Eigen::MatrixXd& m) {
    for (Eigen::Index i = 0; i < m.rows(); ++i)
      for (Eigen::Index j = 0; j < m.cols(); ++j) m(i, j) = gauss(rng);
  };
  LtiModel m;
  m.a.resize(n_states, n_states);
  m.b.resize(n_states, n_inputs);
  fill(m.a);
  fill(m.b);
  const double rho = m.a.eigenvalues().cwiseAbs().maxCoeff();
  if (rho > 0.0) m.a *= 0.9 / rho;
  m.c = Eigen::MatrixXd::Identity(n_states, n_states);
  m.d = Eigen::MatrixXd::Zero(n_states, n_inputs);
  m.is_discrete = true;
  m.dt = 1.0;
  return m;
}

PlantSim::PlantSim(LtiModel model, Eigen::VectorXd x0)
    : model_(std::move(model)), x_(std::move(x0)) {
  model_.validate();
  if (!model_.is_discrete) throw std::invalid_argument("PlantSim: model must be discrete");
  if (x_.size() != model_.n_states()) throw std::invalid_argument("PlantSim: bad x0 size");
}

Eigen::VectorXd PlantSim::output() const { return model_.c * x_; }

Eigen::VectorXd PlantSim::step(const Eigen::VectorXd& u) {
  if (u.size() != model_.n_inputs()) throw std::invalid_argument("PlantSim: bad input size");
  x_ = model_.a * x_ + model_.b * u;
  return model_.c * x_ + model_.d * u;
}

}  // namespace dpcflow::plants
