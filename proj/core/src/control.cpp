#include "cgvf/control.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "cgvf/error.hpp"

namespace cgvf {

namespace {

// h^T E c with E = [[0, -1], [1, 0]].
double cross_e(const Eigen::Vector2d& h, const Eigen::Vector2d& c) {
  return h[1] * c[0] - h[0] * c[1];
}

}  // namespace

Eigen::VectorXd DubinsState::generalized() const {
  Eigen::VectorXd xi(4);
  xi << p[0], p[1], p[2], w;
  return xi;
}

double wrap_angle(double a) {
  double r = std::remainder(a, 2.0 * std::numbers::pi);
  if (r <= -std::numbers::pi) r += 2.0 * std::numbers::pi;
  return r;
}

double saturate(double x, double a, double b) { return std::clamp(x, a, b); }

double signed_angle(const Eigen::Vector2d& h, const Eigen::Vector2d& chi_p) {
  const double nh = h.norm();
  const double nc = chi_p.norm();
  if (nh == 0.0 || nc == 0.0) throw Error("signed_angle: zero-length input");
  const Eigen::Vector2d hu = h / nh;
  const Eigen::Vector2d cu = chi_p / nc;
  const double sigma = std::atan2(cross_e(hu, cu), hu.dot(cu));
  return sigma <= -std::numbers::pi ? std::numbers::pi : sigma;
}

double feedforward_rate(const Eigen::Vector2d& chi_p, const Eigen::Vector2d& chi_p_dot,
                        double gamma) {
  const double sq = chi_p.squaredNorm();
  if (!(sq > gamma)) throw PlanarDegeneracy(-1, sq, "feedforward_rate");
  const double norm = std::sqrt(sq);
  const Eigen::Vector2d hat = chi_p / norm;
  // -(hat)^T E chi_p_dot = -(hat_0 * (-d_1) + hat_1 * d_0)
  return -(hat[1] * chi_p_dot[0] - hat[0] * chi_p_dot[1]) / norm;
}

Eigen::Vector2d planar_field_rate(const FieldJacobian& jac,
                                  const Eigen::Ref<const Eigen::VectorXd>& xi_dot) {
  return jac.wrt_state.topRows(2) * xi_dot;
}

VerticalRates vertical_rates(const Eigen::Ref<const Eigen::VectorXd>& chi, const GainSet& gains,
                             int robot) {
  if (chi.size() != 4) throw Error("Dubins control needs a 3D path (4-entry field)");
  const Eigen::VectorXd scaled = partial_normalize(chi, gains.v, gains.gamma, robot);
  return {scaled[2], scaled[3]};
}

ControlOutput dubins_control(const DubinsState& state, const Eigen::Ref<const Eigen::VectorXd>& chi,
                             const Eigen::Vector2d& chi_p_dot, const GainSet& gains, int robot) {
  const auto vr = vertical_rates(chi, gains, robot);
  const Eigen::Vector2d chi_p(chi[0], chi[1]);
  const Eigen::Vector2d chi_hat = chi_p.normalized();
  const Eigen::Vector2d h(std::cos(state.theta), std::sin(state.theta));

  ControlOutput out;
  out.u_z = vr.u_z;
  out.w_dot = vr.w_dot;
  out.sigma = signed_angle(h, chi_p);
  out.theta_dot_d = feedforward_rate(chi_p, chi_p_dot, gains.gamma);
  const double raw = out.theta_dot_d - gains.k_theta * cross_e(h, chi_hat);
  out.u_theta = saturate(raw, gains.sat_lo, gains.sat_hi);
  const bool upper = raw > gains.sat_hi;
  const bool lower = raw < gains.sat_lo;
  out.saturated = upper || lower;
  out.saturation_condition_violated =
      (upper && !(out.sigma >= 0.0 && out.sigma < std::numbers::pi)) ||
      (lower && !(out.sigma <= 0.0));
  return out;
}

DubinsDerivative dubins_derivative(const DubinsState& state, const ControlOutput& control,
                                   double v) {
  DubinsDerivative d;
  d << v * std::cos(state.theta), v * std::sin(state.theta), control.u_z, control.u_theta,
      control.w_dot;
  return d;
}

}  // namespace cgvf
