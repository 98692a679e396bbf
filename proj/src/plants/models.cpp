#include "dpcflow/plants/models.hpp"

#include <algorithm>
#include <fstream>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace dpcflow::plants {

LtiModel ball_beam_model(const BallBeamParams& p) {
  const double inertia_term = p.ball_inertia / (p.ball_radius * p.ball_radius);
  const double coupling = p.ball_mass * p.gear_radius * p.gravity /
                          (p.beam_length * (inertia_term + p.ball_mass));
  LtiModel m;
  m.a = Eigen::MatrixXd::Zero(4, 4);
  m.a(0, 1) = 1.0;
  m.a(1, 2) = -coupling;
  m.a(2, 3) = 1.0;
  m.b = Eigen::MatrixXd::Zero(4, 1);
  m.b(3, 0) = 1.0;
  m.c = Eigen::MatrixXd::Zero(1, 4);
  m.c(0, 0) = 1.0;
  m.d = Eigen::MatrixXd::Zero(1, 1);
  return m;
}

LtiModel ball_beam_servo_model(const BallBeamParams& p) {
  const double inertia_term = p.ball_inertia / (p.ball_radius * p.ball_radius);
  const double coupling = p.ball_mass * p.gear_radius * p.gravity /
                          (p.beam_length * (inertia_term + p.ball_mass));
  LtiModel m;
  m.a = Eigen::MatrixXd::Zero(2, 2);
  m.a(0, 1) = 1.0;
  m.b = Eigen::MatrixXd::Zero(2, 1);
  m.b(1, 0) = coupling;
  m.c = Eigen::MatrixXd::Zero(1, 2);
  m.c(0, 0) = 1.0;
  m.d = Eigen::MatrixXd::Zero(1, 1);
  return m;
}

LtiModel vehicle_error_model(const VehicleParams& p) {
  if (p.speed <= 0.0) throw std::invalid_argument("vehicle_error_model: speed must be > 0");
  LtiModel m;
  m.a = Eigen::MatrixXd::Zero(2, 2);
  m.a(1, 0) = p.speed;
  m.b = Eigen::MatrixXd::Zero(2, 2);
  m.b(0, 0) = p.speed / p.wheelbase;   // steering channel
  m.b(0, 1) = -p.speed / p.wheelbase;  // curvature feedforward channel
  m.c = Eigen::MatrixXd::Identity(2, 2);
  m.d = Eigen::MatrixXd::Zero(2, 2);
  return m;
}

PowerNetParams load_power_edge_list(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("load_power_edge_list: cannot open " + path);
  PowerNetParams p;
  std::string line;
  while (std::getline(in, line)) {
    const auto hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::istringstream ls(line);
    int i = 0, j = 0;
    double w = 1.0;
    if (!(ls >> i >> j)) continue;
    ls >> w;
    if (i < 1 || j < 1 || i == j) {
      throw std::runtime_error("load_power_edge_list: bad edge " + line);
    }
    p.edges.emplace_back(i - 1, j - 1, w);
    p.n_buses = std::max({p.n_buses, i, j});
  }
  if (p.edges.empty()) throw std::runtime_error("load_power_edge_list: no edges in " + path);
  return p;
}

std::vector<int> pick_generator_buses(const PowerNetParams& p, int count) {
  std::vector<int> degree(p.n_buses, 0);
  for (const auto& [i, j, w] : p.edges) {
    (void)w;
    degree[i]++;
    degree[j]++;
  }
  std::vector<int> order(p.n_buses);
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return degree[a] > degree[b]; });
  order.resize(std::min<size_t>(count, order.size()));
  std::sort(order.begin(), order.end());
  return order;
}

LtiModel power_network_model(const PowerNetParams& p) {
  const int n = p.n_buses;
  if (n < 1) throw std::invalid_argument("power_network_model: no buses");

  Eigen::MatrixXd lap = Eigen::MatrixXd::Zero(n, n);
  std::vector<std::vector<int>> adj(n);
  for (const auto& [i, j, w] : p.edges) {
    if (i >= n || j >= n) throw std::invalid_argument("power_network_model: edge out of range");
    lap(i, i) += w;
    lap(j, j) += w;
    lap(i, j) -= w;
    lap(j, i) -= w;
    adj[i].push_back(j);
    adj[j].push_back(i);
  }

  if (n > 1) {  // connectivity check
    std::vector<char> seen(n, 0);
    std::vector<int> stack{0};
    seen[0] = 1;
    int reached = 1;
    while (!stack.empty()) {
      const int v = stack.back();
      stack.pop_back();
      for (int w : adj[v]) {
        if (!seen[w]) {
          seen[w] = 1;
          reached++;
          stack.push_back(w);
        }
      }
    }
    if (reached != n) throw std::runtime_error("power_network_model: graph is disconnected");
  }

  std::vector<int> gens = p.generator_buses;
  if (gens.empty()) gens = pick_generator_buses(p, std::min(10, n));
  for (int g : gens) {
    if (g < 0 || g >= n) throw std::invalid_argument("power_network_model: bad generator bus");
  }

  const double m_inv = 1.0 / p.inertia;
  LtiModel m;
  m.a = Eigen::MatrixXd::Zero(2 * n, 2 * n);
  m.a.topRightCorner(n, n) = Eigen::MatrixXd::Identity(n, n);
  m.a.bottomLeftCorner(n, n) = -m_inv * lap;
  m.a.bottomRightCorner(n, n) =
      -p.damping * m_inv * Eigen::MatrixXd::Identity(n, n);

  const int ng = static_cast<int>(gens.size());
  m.b = Eigen::MatrixXd::Zero(2 * n, ng);
  m.c = Eigen::MatrixXd::Zero(ng, 2 * n);
  for (int gi = 0; gi < ng; ++gi) {
    m.b(n + gens[gi], gi) = m_inv;
    m.c(gi, gens[gi]) = 1.0;
  }
  m.d = Eigen::MatrixXd::Zero(ng, ng);
  return m;
}

}  // namespace dpcflow::plants
