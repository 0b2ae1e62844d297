#include <gtest/gtest.h>

#include <random>

#include "cgvf/error.hpp"
#include "cgvf/oracles.hpp"
#include "cgvf/safety.hpp"
#include "test_support.hpp"

using namespace cgvf;

TEST(Safety, BarrierValueAndGradient) {
  const Eigen::Vector2d pi(0.0, 0.0), pj(2.0, 1.0);
  const auto b = barrier(pi, pj, 1.0);
  EXPECT_NEAR(b.B, 1.0 / 4.0, 1e-15);
  for (int k = 0; k < 2; ++k) {
    const double fd = oracle::central_difference(
        [&](double x) {
          Eigen::Vector2d p = pi;
          p[k] = x;
          return barrier(p, pj, 1.0).B;
        },
        pi[k], 1e-6);
    EXPECT_NEAR(b.grad[k], fd, 1e-8);
  }
}

TEST(Safety, CollisionStateThrows) {
  EXPECT_THROW(barrier(Eigen::Vector2d(0, 0), Eigen::Vector2d(0.5, 0), 1.0), CollisionState);
  EXPECT_THROW(barrier(Eigen::Vector2d(0, 0), Eigen::Vector2d(1.0, 0), 1.0), CollisionState);
}

TEST(Safety, FeasibleNominalIsUntouched) {
  Neighbor far{1, Eigen::Vector2d(10, 10), Eigen::Vector2d::Zero()};
  const Eigen::Vector3d nominal(1.0, 0.0, 1.0);
  const auto sol = safe_correction(nominal, Eigen::Vector2d::Zero(), {&far, 1}, 1.0);
  EXPECT_EQ(sol.u.size(), 3);
  EXPECT_EQ(sol.u.cwiseAbs().maxCoeff(), 0.0);
  EXPECT_TRUE(sol.active.empty());
}

TEST(Safety, CorrectionNeverTouchesVirtualCoordinate) {
  Neighbor near{1, Eigen::Vector2d(1.2, 0.0), Eigen::Vector2d(-1.0, 0.0)};
  const Eigen::Vector3d nominal(1.0, 0.0, 0.7);
  const auto sol = safe_correction(nominal, Eigen::Vector2d::Zero(), {&near, 1}, 1.0);
  EXPECT_GT(sol.u.head<2>().norm(), 0.0);
  EXPECT_EQ(sol.u[2], 0.0);
  for (const auto& h : sol.constraints) EXPECT_LE(h.a.dot(sol.u.head<2>()), h.b + 1e-10);
}

TEST(Safety, QpMatchesExhaustiveSearch) {
  std::mt19937_64 rng(31);
  int nontrivial = 0;
  for (int trial = 0; trial < 300; ++trial) {
    const int dim = 2 + trial % 2;
    const int m = 1 + trial % 4;
    std::vector<HalfSpace> cs;
    // Constraints built around a known feasible point keep the problem feasible.
    const Eigen::VectorXd x0 = test::random_vector(rng, dim, -2, 2);
    for (int k = 0; k < m; ++k) {
      HalfSpace h{test::random_vector(rng, dim, -1, 1), 0.0};
      h.b = h.a.dot(x0) + std::uniform_real_distribution<double>(0.0, 0.5)(rng);
      cs.push_back(h);
    }
    const auto sol = solve_min_norm_qp(cs, dim);
    const Eigen::VectorXd ref = oracle::exhaustive_min_norm(cs, dim);
    EXPECT_LT((sol.u - ref).norm(), 1e-8) << "trial " << trial;
    EXPECT_LT(kkt_residual(sol), 1e-8);
    nontrivial += !sol.active.empty();
  }
  EXPECT_GT(nontrivial, 100);
}

TEST(Safety, QpMinimality) {
  std::mt19937_64 rng(32);
  std::vector<HalfSpace> cs{{Eigen::Vector2d(-1.0, -0.2), -1.0}, {Eigen::Vector2d(-0.3, -1.0), -0.8}};
  const auto sol = solve_min_norm_qp(cs, 2);
  for (int k = 0; k < 20000; ++k) {
    const Eigen::VectorXd u = test::random_vector(rng, 2, -3, 3);
    bool feasible = true;
    for (const auto& h : cs) feasible = feasible && h.a.dot(u) <= h.b;
    if (feasible) EXPECT_GE(u.norm(), sol.u.norm() - 1e-12);
  }
}

TEST(Safety, InfeasibleQpThrows) {
  std::vector<HalfSpace> cs{{Eigen::Vector2d(1, 0), -1.0}, {Eigen::Vector2d(-1, 0), -1.0}};
  EXPECT_THROW(solve_min_norm_qp(cs, 2), InfeasibleQp);
}

TEST(Safety, GridSearchAgreesInTheHeadOnCase) {
  EXPECT_TRUE(oracle::run_check("qp-grid", std::cout));
}
