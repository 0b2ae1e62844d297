#pragma once

// Reference computations that check the library through independent routes:
// finite differences, dense stacked-matrix forms, brute-force search. Nothing
// here calls the code path it is used to check.

#include <Eigen/Dense>

#include <functional>
#include <iosfwd>
#include <string>
#include <vector>

#include "cgvf/paths.hpp"
#include "cgvf/safety.hpp"
#include "cgvf/sim.hpp"

namespace cgvf::oracle {

/// Central difference of f at x with step h.
double central_difference(const std::function<double(double)>& f, double x, double h);

/// Central-difference f'(w) and f''(w) from ParametricPath::evaluate only.
Eigen::VectorXd fd_path_derivative(const ParametricPath& path, double w, double h = 1e-5);
Eigen::VectorXd fd_path_second_derivative(const ParametricPath& path, double w, double h = 1e-4);

/// Closed-form f' for the n = 3 figure-eight, written out by hand.
Eigen::Vector3d bent_infinity_derivative(double w);

/// c = -L (w - w*) with L = D D^T built from the edge list.
Eigen::VectorXd stacked_coordination(const CommGraph& g, const Eigen::VectorXd& w_star,
                                     const Eigen::VectorXd& w);

/// Dense graph matrices built directly from the edge list.
Eigen::MatrixXd incidence_from_edges(int n_nodes, const std::vector<Edge>& edges);

/// Finite-difference Jacobian of `fn` at x (central, step h).
Eigen::MatrixXd fd_jacobian(const std::function<Eigen::VectorXd(const Eigen::VectorXd&)>& fn,
                            const Eigen::VectorXd& x, double h = 1e-6);

/// Stacked error dynamics in block-matrix form for integrator mode:
///   Phi_dot  = -K Phi - F F^T K Phi - k_c F c
///   wt_dot   = (-1)^n 1 + F^T K Phi - k_c L wt
/// with F = blockdiag(f'_1, ..., f'_N) and K = blockdiag(K_1, ..., K_N).
struct ErrorDynamics {
  Eigen::VectorXd phi_dot;
  Eigen::VectorXd w_tilde_dot;
};
ErrorDynamics error_dynamics(const Scenario& sc, const Eigen::VectorXd& state);

/// -|Phi|^2 - |F^T Phi - k_c L wt|^2 (K = I).
double lyapunov_rate_k1(const Scenario& sc, const Eigen::VectorXd& state);

/// Brute-force minimum-norm u on a square grid of half-width `extent` with
/// `cells` points per axis, for 2-dimensional constraints a^T u <= b.
Eigen::Vector2d grid_min_norm(const std::vector<HalfSpace>& constraints, double extent, int cells);

/// Minimum-norm solution via enumerating every subset of constraints (any size),
/// solving the equality-constrained problem, and keeping the best feasible one.
Eigen::VectorXd exhaustive_min_norm(const std::vector<HalfSpace>& constraints, int dim);

/// Rotation rate of the normalized planar field estimated from two samples.
double fd_rotation_rate(const Eigen::Vector2d& before, const Eigen::Vector2d& after, double dt);

/// Names accepted by run_check.
std::vector<std::string> check_names();

/// Runs a named oracle check, printing its values to `out`. Returns pass/fail.
/// Throws cgvf::Error for an unknown name.
bool run_check(const std::string& name, std::ostream& out);

}  // namespace cgvf::oracle
