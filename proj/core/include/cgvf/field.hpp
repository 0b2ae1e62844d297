#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

#include "cgvf/paths.hpp"

namespace cgvf {

/// Generalized coordinate xi = (x_1..x_n, w).
struct GeneralizedState {
  Eigen::VectorXd position;
  double w = 0.0;

  Eigen::VectorXd stacked() const;
  static GeneralizedState from_stacked(const Eigen::Ref<const Eigen::VectorXd>& xi);
};

inline constexpr double kDefaultGamma = 1e-6;

struct GainSet {
  Eigen::VectorXd k;      // per-coordinate path gains, all > 0
  double k_c = 1.0;       // coordination weight
  double v = 1.0;         // constant airspeed (Dubins mode)
  double k_theta = 1.0;   // heading gain
  double sat_lo = -1.0;   // yaw-rate limits, sat_lo < 0 < sat_hi
  double sat_hi = 1.0;
  double gamma = kDefaultGamma;  // planar degeneracy threshold
  double R = 1.0;         // safety radius

  /// Human-readable violations with the gains.* key that failed; empty if valid.
  std::vector<std::string> violations() const;
  /// Throws ScenarioError on any violation.
  void validate() const;

  bool operator==(const GainSet& o) const;
};

/// Surface-function gradients as rows: grad phi_j = e_j - f'_j(w) e_{n+1}.
Eigen::MatrixXd surface_gradients(const ParametricPath& path, double w);

/// Path-following field: entries j <= n are (-1)^n f'_j - k_j phi_j and the last
/// entry is (-1)^n + sum_l k_l phi_l f'_l.
Eigen::VectorXd pf_field(const ParametricPath& path, const GainSet& gains,
                         const Eigen::Ref<const Eigen::VectorXd>& xi);

/// Propagation term of the general field, i.e. the wedge product of the surface
/// gradients, computed by cofactor expansion of the symbolic determinant whose
/// first row holds the unit vectors. Only n in {2, 3}.
Eigen::VectorXd wedge_oracle(const ParametricPath& path,
                             const Eigen::Ref<const Eigen::VectorXd>& xi);

/// pf_field + k_c * (0, ..., 0, c_i).
Eigen::VectorXd combined_field(const ParametricPath& path, const GainSet& gains,
                               const Eigen::Ref<const Eigen::VectorXd>& xi, double c_i);

/// v * chi / |(chi_1, chi_2)|. Throws PlanarDegeneracy when chi_1^2 + chi_2^2 <= gamma.
Eigen::VectorXd partial_normalize(const Eigen::Ref<const Eigen::VectorXd>& chi, double v,
                                  double gamma, int robot = -1);

/// Analytic Jacobian of combined_field for robot i.
struct FieldJacobian {
  Eigen::MatrixXd wrt_state;      // (n+1) x (n+1), d chi / d xi_i
  Eigen::MatrixXd wrt_neighbors;  // (n+1) x |N_i|, d chi / d w_j in neighbor order
};

/// `degree` is |N_i|. With `freeze_coordination` the coordination term is
/// treated as a constant and neither its w_i nor w_j partials are included.
FieldJacobian field_jacobian(const ParametricPath& path, const GainSet& gains,
                             const Eigen::Ref<const Eigen::VectorXd>& xi, int degree,
                             bool freeze_coordination = false);

}  // namespace cgvf
