#pragma once

#include <string>
#include <tuple>
#include <vector>

#include "dpcflow/plants/lti.hpp"

namespace dpcflow::plants {

/// Ball-and-beam rig constants (gear-driven beam, ball rolling on it).
struct BallBeamParams {
  double beam_length = 0.4;      // m
  double gear_radius = 0.04;     // m
  double ball_radius = 0.015;    // m
  double ball_inertia = 9.9e-6;  // kg m^2
  double ball_mass = 0.11;       // kg
  double gravity = 9.81;         // m/s^2
};

/// Continuous 4-state model, states [position, velocity, gear angle,
/// gear rate], input gear-angle acceleration channel, output ball position.
LtiModel ball_beam_model(const BallBeamParams& p);

/// Servo-commanded realization: the gear angle itself is the input (the rig's
/// motor tracks a commanded angle), leaving a double integrator from angle to
/// ball position. This is the loop a PID with the usual positive gains can
/// stabilize; angle sign chosen so a positive command accelerates the ball
/// in the positive direction.
LtiModel ball_beam_servo_model(const BallBeamParams& p);

/// Kinematic lateral-error model of a front-steered vehicle.
struct VehicleParams {
  double speed = 8.3333333333333339;  // m/s (30 km/h)
  double wheelbase = 0.5;             // m
  double curvature = 0.024;           // 1/m, reference path

  /// Feedforward steering that exactly cancels the path curvature.
  double feedforward_u2() const { return wheelbase * curvature; }
};

/// Continuous 2-state model over [e_phi, e_d]; inputs [steer, feedforward],
/// both states measured.
LtiModel vehicle_error_model(const VehicleParams& p);

struct PowerNetParams {
  int n_buses = 0;
  std::vector<std::tuple<int, int, double>> edges;  // (i, j, susceptance weight)
  double inertia = 1.0;                             // m_i
  double damping = 0.5;                             // d_i
  std::vector<int> generator_buses;  // empty: pick the 10 highest-degree buses
};

/// Parse an `i j weight` edge list (1-based bus ids, '#' comments).
PowerNetParams load_power_edge_list(const std::string& path);

/// Linearized swing-equation network: states [theta; theta_dot], inputs are
/// mechanical power at the generator buses, outputs their phase angles.
/// Throws on a disconnected graph.
LtiModel power_network_model(const PowerNetParams& p);

std::vector<int> pick_generator_buses(const PowerNetParams& p, int count);

}  // namespace dpcflow::plants
