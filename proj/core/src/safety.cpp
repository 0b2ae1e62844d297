#include "cgvf/safety.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <string>

#include "cgvf/error.hpp"

namespace cgvf {

namespace {

constexpr double kFeasTol = 1e-12;
constexpr double kDualTol = -1e-12;
constexpr int kMaxConstraints = 24;

double constraint_slack(const HalfSpace& h, const Eigen::VectorXd& u) {
  return h.b - h.a.dot(u);
}

}  // namespace

BarrierPair barrier(const Eigen::Ref<const Eigen::VectorXd>& p_i,
                    const Eigen::Ref<const Eigen::VectorXd>& p_j, double R, int i, int j) {
  const Eigen::VectorXd diff = p_i - p_j;
  const double gap = diff.squaredNorm() - R * R;
  if (!(gap > 0.0))
    throw CollisionState("robots " + std::to_string(i) + " and " + std::to_string(j) +
                         " within safety radius (|d|^2 - R^2 = " + std::to_string(gap) + ")");
  BarrierPair out;
  out.i = i;
  out.j = j;
  out.B = 1.0 / gap;
  out.grad = -2.0 * out.B * out.B * diff;
  return out;
}

HalfSpace barrier_constraint(const Eigen::Ref<const Eigen::VectorXd>& p_i,
                             const Eigen::Ref<const Eigen::VectorXd>& nominal_velocity,
                             const Neighbor& other, double R) {
  const BarrierPair bp = barrier(p_i, other.position, R, -1, other.id);
  // dB/dt = grad . (v_i + u) - grad . v_j   (grad wrt p_j is -grad)
  const double nominal_rate = bp.grad.dot(nominal_velocity - other.velocity);
  return {bp.grad, 1.0 / bp.B - nominal_rate};
}

SafetyCorrection solve_min_norm_qp(std::vector<HalfSpace> constraints, int dim) {
  if (static_cast<int>(constraints.size()) > kMaxConstraints)
    throw InfeasibleQp("too many barrier constraints for active-set enumeration");
  SafetyCorrection sol;
  sol.u = Eigen::VectorXd::Zero(dim);
  sol.constraints = std::move(constraints);
  const auto& cons = sol.constraints;
  const int m = static_cast<int>(cons.size());

  auto feasible = [&](const Eigen::VectorXd& u) {
    for (const auto& h : cons)
      if (constraint_slack(h, u) < -kFeasTol * std::max(1.0, std::abs(h.b))) return false;
    return true;
  };
  if (feasible(sol.u)) return sol;

  // Any feasible KKT point of this strictly convex QP is the optimum, so the
  // first one found wins. Active sets larger than dim are linearly dependent.
  std::vector<int> subset;
  bool found = false;
  std::function<void(int, int)> search = [&](int start, int remaining) {
    if (found) return;
    if (remaining == 0) {
      const int s = static_cast<int>(subset.size());
      Eigen::MatrixXd a(s, dim);
      Eigen::VectorXd b(s);
      for (int r = 0; r < s; ++r) {
        a.row(r) = cons[subset[r]].a.transpose();
        b[r] = cons[subset[r]].b;
      }
      const Eigen::MatrixXd gram = a * a.transpose();
      Eigen::FullPivLU<Eigen::MatrixXd> lu(gram);
      if (lu.rank() < s) return;
      // Stationarity u = -A^T lambda, active rows tight: -A A^T lambda = b.
      const Eigen::VectorXd lambda = lu.solve(-b);
      if ((lambda.array() < kDualTol).any()) return;
      const Eigen::VectorXd u = -a.transpose() * lambda;
      if (!feasible(u)) return;
      sol.u = u;
      sol.active = subset;
      sol.multipliers = lambda.cwiseMax(0.0);
      found = true;
      return;
    }
    for (int k = start; k <= m - remaining && !found; ++k) {
      subset.push_back(k);
      search(k + 1, remaining - 1);
      subset.pop_back();
    }
  };
  for (int size = 1; size <= std::min(m, dim) && !found; ++size) search(0, size);
  if (!found) throw InfeasibleQp("no KKT point for the safety QP");
  return sol;
}

SafetyCorrection safe_correction(const Eigen::Ref<const Eigen::VectorXd>& nominal,
                                 const Eigen::Ref<const Eigen::VectorXd>& p_i,
                                 std::span<const Neighbor> others, double R) {
  const int n = static_cast<int>(p_i.size());
  if (nominal.size() != n + 1) throw Error("nominal field must have n+1 entries");
  std::vector<HalfSpace> cons;
  cons.reserve(others.size());
  const Eigen::VectorXd v_i = nominal.head(n);
  for (const auto& o : others) cons.push_back(barrier_constraint(p_i, v_i, o, R));
  SafetyCorrection physical = solve_min_norm_qp(std::move(cons), n);
  SafetyCorrection out = std::move(physical);
  Eigen::VectorXd u = Eigen::VectorXd::Zero(n + 1);
  u.head(n) = out.u;
  out.u = std::move(u);
  return out;
}

double kkt_residual(const SafetyCorrection& sol) {
  const auto n = sol.constraints.empty() ? sol.u.size() : sol.constraints.front().a.size();
  const Eigen::VectorXd u = sol.u.head(n);
  Eigen::VectorXd stationarity = u;
  for (std::size_t r = 0; r < sol.active.size(); ++r)
    stationarity += sol.multipliers[r] * sol.constraints[sol.active[r]].a;
  double res = stationarity.cwiseAbs().maxCoeff();
  for (const auto& h : sol.constraints) res = std::max(res, -constraint_slack(h, u));
  for (std::size_t r = 0; r < sol.active.size(); ++r) {
    res = std::max(res, -sol.multipliers[r]);
    res = std::max(res,
                   std::abs(sol.multipliers[r] * constraint_slack(sol.constraints[sol.active[r]], u)));
  }
  return std::max(res, 0.0);
}

}  // namespace cgvf
