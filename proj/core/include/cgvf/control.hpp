#pragma once

#include <Eigen/Dense>

#include "cgvf/field.hpp"

namespace cgvf {

/// Dubins-car-like aircraft: planar position at constant airspeed, commanded
/// climb rate and yaw rate, plus the virtual coordinate w.
struct DubinsState {
  Eigen::Vector3d p = Eigen::Vector3d::Zero();
  double theta = 0.0;  // wrapped to (-pi, pi]
  double w = 0.0;

  /// Generalized coordinate (p_1, p_2, p_3, w) seen by the field.
  Eigen::VectorXd generalized() const;
};

struct ControlOutput {
  double u_theta = 0.0;
  double u_z = 0.0;
  double w_dot = 0.0;
  double sigma = 0.0;
  double theta_dot_d = 0.0;
  bool saturated = false;
  /// Saturated while sigma had the wrong sign for the active limit.
  bool saturation_condition_violated = false;
};

/// d/dt (p_1, p_2, p_3, theta, w).
using DubinsDerivative = Eigen::Matrix<double, 5, 1>;

/// Wraps to (-pi, pi]; -pi maps to +pi.
double wrap_angle(double a);

/// Clamp to [a, b].
double saturate(double x, double a, double b);

/// sigma in (-pi, pi] directed from chi_p_hat to h: h^T E chi_p_hat = sin(sigma)
/// with E = [[0, -1], [1, 0]]. Inputs are normalized internally; zero vectors throw.
double signed_angle(const Eigen::Vector2d& h, const Eigen::Vector2d& chi_p);

/// Orientation rate of chi_p: -(chi_p_hat)^T E chi_p_dot / |chi_p|.
double feedforward_rate(const Eigen::Vector2d& chi_p, const Eigen::Vector2d& chi_p_dot,
                        double gamma = kDefaultGamma);

/// Planar field rate along the actual motion: first two rows of the field
/// Jacobian times the generalized velocity (p_dot_1, p_dot_2, p_dot_3, w_dot).
Eigen::Vector2d planar_field_rate(const FieldJacobian& jac,
                                  const Eigen::Ref<const Eigen::VectorXd>& xi_dot);

/// Yaw/climb/virtual-coordinate commands for field value `chi` (4 entries) and
/// its planar rate `chi_p_dot`.
ControlOutput dubins_control(const DubinsState& state, const Eigen::Ref<const Eigen::VectorXd>& chi,
                             const Eigen::Vector2d& chi_p_dot, const GainSet& gains,
                             int robot = -1);

/// Climb rate and w rate only (they do not depend on the yaw command).
struct VerticalRates {
  double u_z;
  double w_dot;
};
VerticalRates vertical_rates(const Eigen::Ref<const Eigen::VectorXd>& chi, const GainSet& gains,
                             int robot = -1);

DubinsDerivative dubins_derivative(const DubinsState& state, const ControlOutput& control,
                                   double v);

}  // namespace cgvf
