#pragma once

#include <Eigen/Dense>

#include <span>
#include <vector>

namespace cgvf {

/// B = 1 / (|p_i - p_j|^2 - R^2) and its gradient with respect to p_i.
struct BarrierPair {
  int i = -1;
  int j = -1;
  double B = 0.0;
  Eigen::VectorXd grad;
};

/// Throws CollisionState when |p_i - p_j| <= R.
BarrierPair barrier(const Eigen::Ref<const Eigen::VectorXd>& p_i,
                    const Eigen::Ref<const Eigen::VectorXd>& p_j, double R, int i = -1,
                    int j = -1);

/// Another robot as seen by robot i: its position and nominal physical velocity.
struct Neighbor {
  int id = -1;
  Eigen::VectorXd position;
  Eigen::VectorXd velocity;
};

/// One linear constraint a^T u <= b on the correction.
struct HalfSpace {
  Eigen::VectorXd a;
  double b = 0.0;
};

struct SafetyCorrection {
  Eigen::VectorXd u;               // n + 1 entries; the w entry is always 0
  std::vector<int> active;         // indices into the constraint list
  Eigen::VectorXd multipliers;     // one per active constraint, >= 0
  std::vector<HalfSpace> constraints;
};

/// The barrier rate condition dB_ij/dt <= 1/B_ij, written as a^T u <= b on the
/// correction u to robot i's physical velocity.
HalfSpace barrier_constraint(const Eigen::Ref<const Eigen::VectorXd>& p_i,
                             const Eigen::Ref<const Eigen::VectorXd>& nominal_velocity,
                             const Neighbor& other, double R);

/// min |u|^2 subject to a_k^T u <= b_k, by enumerating candidate active sets
/// of increasing size. Throws InfeasibleQp if no KKT point exists.
SafetyCorrection solve_min_norm_qp(std::vector<HalfSpace> constraints, int dim);

/// Minimum-norm correction of the nominal field of robot i so that every
/// barrier rate constraint holds against the others' nominal motion. `nominal`
/// has n + 1 entries; only the first n are corrected. When the nominal field
/// already satisfies every constraint the returned u is exactly zero.
SafetyCorrection safe_correction(const Eigen::Ref<const Eigen::VectorXd>& nominal,
                                 const Eigen::Ref<const Eigen::VectorXd>& p_i,
                                 std::span<const Neighbor> others, double R);

/// Max of stationarity, primal infeasibility, dual infeasibility and
/// complementarity residuals.
double kkt_residual(const SafetyCorrection& sol);

}  // namespace cgvf
