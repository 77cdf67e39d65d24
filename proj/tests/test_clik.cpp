// Copyright 2026 The lfdq Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     https://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include <cmath>
#include <numbers>
#include <random>

#include "doctest.h"
#include "fixtures.hpp"
#include "lfdq/clik.hpp"
#include "lfdq/error.hpp"
#include "oracles.hpp"

namespace lfdq {
namespace {

Jacobian RandomJacobian(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  Jacobian j;
  for (int r = 0; r < 6; ++r)
    for (int c = 0; c < kNumJoints; ++c) j(r, c) = n(rng);
  return j;
}

TEST_CASE("sr inverse") {
  Jacobian j = Jacobian::Zero();
  j.leftCols<6>().setIdentity();
  SUBCASE("padded identity") {
    const SrInverse inv = ComputeSrInverse(j, 0.0);
    CHECK((inv.topRows<6>() - Matrix6d::Identity()).norm() < 1e-15);
    CHECK(inv.row(6).norm() < 1e-15);
  }
  SUBCASE("unit damping halves the identity") {
    const SrInverse inv = ComputeSrInverse(j, 1.0);
    CHECK((inv.topRows<6>() - 0.5 * Matrix6d::Identity()).norm() < 1e-15);
  }
  SUBCASE("undamped matches the svd pseudoinverse") {
    std::mt19937_64 rng(11);
    for (int i = 0; i < 100; ++i) {
      const Jacobian r = RandomJacobian(rng);
      const Eigen::MatrixXd oracle = oracle::SvdPseudoInverse(r);
      CHECK((ComputeSrInverse(r, 0.0) - oracle).cwiseAbs().maxCoeff() < 1e-10);
    }
  }
  SUBCASE("continuous in damping") {
    std::mt19937_64 rng(12);
    for (int i = 0; i < 20; ++i) {
      const Jacobian r = RandomJacobian(rng);
      for (double lam : {0.0, 0.01, 0.05, 0.5}) {
        CHECK((ComputeSrInverse(r, lam) - ComputeSrInverse(r, lam + 1e-9)).norm() < 1e-6);
      }
    }
  }
  SUBCASE("errors") {
    Jacobian rank_deficient = j;
    rank_deficient.row(5).setZero();
    CHECK_THROWS_AS(ComputeSrInverse(rank_deficient, 0.0), Error);
    CHECK_NOTHROW(ComputeSrInverse(rank_deficient, 0.05));
    CHECK_THROWS_AS(ComputeSrInverse(j, -1.0), Error);
  }
}

TEST_CASE("null projector") {
  std::mt19937_64 rng(13);
  for (int i = 0; i < 100; ++i) {
    const Jacobian r = RandomJacobian(rng);
    const NullProjector p = ComputeNullProjector(r);
    CHECK((r * p).norm() <= 1e-8);
    CHECK((p * p - p).cwiseAbs().maxCoeff() <= 1e-10);
    CHECK(std::abs(p.trace() - 1.0) <= 1e-8);
    CHECK((p - p.transpose()).cwiseAbs().maxCoeff() <= 1e-10);
  }
  // Also on the arm itself.
  const KinematicChain chain = ReferenceChain();
  for (int i = 0; i < 50; ++i) {
    const Jacobian jac = ComputeJacobian(chain, oracle::RandomConfig(chain, rng));
    CHECK((jac * ComputeNullProjector(jac)).norm() <= 1e-8);
  }
}

Demonstration EndingAt(const Eigen::Vector3d& p) {
  Demonstration d;
  StatePoint s;
  s.x = p;
  d.cart_traj = {StatePoint{}, s};
  return d;
}

TEST_CASE("closest demonstration") {
  const Eigen::Vector3d target(0.5, 0.0, 0.2);
  DemoSet set;
  CHECK_THROWS_AS(ClosestDemonstration(set, target), Error);
  set.demos.push_back(EndingAt(target + Eigen::Vector3d(0.1, 0, 0)));
  CHECK(ClosestDemonstrationIndex(set, target) == 0);
  set.demos.push_back(EndingAt(target + Eigen::Vector3d(0, 0.01, 0)));
  CHECK(ClosestDemonstrationIndex(set, target) == 1);
  set.demos.push_back(EndingAt(target + Eigen::Vector3d(0, -0.01, 0)));
  CHECK(ClosestDemonstrationIndex(set, target) == 1);
  CHECK(&ClosestDemonstration(set, target) == &set.demos[1]);
}

TEST_CASE("clik step") {
  const KinematicChain chain = ReferenceChain();
  const ClikParams params;
  std::mt19937_64 rng(14);
  for (int i = 0; i < 30; ++i) {
    const JointVector q = oracle::RandomConfig(chain, rng);
    const Pose here = ForwardKinematics(chain, q);
    CHECK(ClikStep(chain, q, here, Twist::Zero(), q, params).norm() < 1e-12);

    Pose desired = here;
    desired.position += Eigen::Vector3d(0.01, -0.02, 0.005);
    const Jacobian jac = ComputeJacobian(chain, q);
    Twist e = Twist::Zero();
    e.head<3>() = desired.position - here.position;
    // Damped inverse written out directly.
    const Eigen::MatrixXd jd = jac;
    const Eigen::MatrixXd gram =
        jd * jd.transpose() + params.damping * params.damping * Eigen::MatrixXd::Identity(6, 6);
    const Eigen::VectorXd expected = jd.transpose() * gram.inverse() * (params.kp * e);
    CHECK((ClikStep(chain, q, desired, Twist::Zero(), q, params) - expected).norm() < 1e-10);

    // Posture pull contributes nothing to task velocity.
    const JointVector q_ref = oracle::RandomConfig(chain, rng);
    const JointVector with = ClikStep(chain, q, desired, Twist::Zero(), q_ref, params);
    const JointVector without = ClikStep(chain, q, desired, Twist::Zero(), q, params);
    CHECK((jac * (with - without)).norm() < 1e-8);
  }
  ClikParams bad;
  bad.kp(0, 1) = 1.0;
  CHECK_THROWS_AS(bad.Validate(), Error);
  bad = ClikParams{};
  bad.kp(2, 2) = -1.0;
  CHECK_THROWS_AS(bad.Validate(), Error);
  bad = ClikParams{};
  bad.dt = 0.0;
  CHECK_THROWS_AS(bad.Validate(), Error);
}

TEST_CASE("tracking") {
  const KinematicChain chain = ReferenceChain();
  const ClikParams params;
  const JointVector q0 = chain.start_config;
  const Pose start = ForwardKinematics(chain, q0);

  SUBCASE("stationary") {
    std::vector<StatePoint> still(50);
    for (int k = 0; k < 50; ++k) {
      still[k].t = k * params.dt;
      still[k].x = start.position;
      still[k].orientation = start.orientation;
    }
    const JointTrajectory out = TrackTrajectory(chain, q0, still, {}, params);
    CHECK(out.feasible);
    CHECK(out.final_position_error < 1e-6);
    for (const auto& q : out.q) CHECK((q - q0).norm() < 1e-6);
  }
  SUBCASE("straight twenty centimetre reach") {
    const auto path = fixture::StraightReach(start, Eigen::Vector3d(0.12, 0.1, 0.12).normalized() * 0.2, 100, params.dt);
    const JointTrajectory out = TrackTrajectory(chain, q0, path, {}, params);
    CHECK(out.feasible);
    CHECK(out.final_position_error <= 2e-3);
    CHECK(out.q.size() == path.size());
    for (const auto& q : out.q) CHECK(LimitMargin(chain, q).minCoeff() >= params.limit_margin_min);
  }
  SUBCASE("random reachable reaches converge") {
    std::mt19937_64 rng(15);
    int checked = 0;
    for (int i = 0; i < 20; ++i) {
      const JointVector goal = fixture::NearbyGoal(chain, q0, 0.4, rng);
      const auto path = fixture::JointSpaceReach(chain, q0, goal, 100, params.dt);
      const JointTrajectory out = TrackTrajectory(chain, q0, path, {}, params);
      CHECK(out.feasible);
      CHECK(out.final_position_error <= 2e-3);
      CHECK(out.final_orientation_error <= std::numbers::pi / 180.0);
      ++checked;
    }
    CHECK(checked == 20);
  }
  SUBCASE("unreachable target diverges") {
    const auto path = fixture::StraightReach(start, Eigen::Vector3d(2.0, 0.0, 0.0), 100, params.dt);
    const JointTrajectory out = TrackTrajectory(chain, q0, path, {}, params);
    CHECK_FALSE(out.feasible);
    CHECK(out.failure == TrackingFailure::kDivergence);
  }
  SUBCASE("step error shrinks monotonically") {
    Pose desired = start;
    desired.position += Eigen::Vector3d(0.02, -0.03, 0.01);
    std::vector<StatePoint> hold(40);
    for (int k = 0; k < 40; ++k) {
      hold[k].t = k * params.dt;
      hold[k].x = desired.position;
      hold[k].orientation = desired.orientation;
    }
    const JointTrajectory out = TrackTrajectory(chain, q0, hold, {}, params);
    double prev = std::numeric_limits<double>::infinity();
    for (const auto& q : out.q) {
      const double err = TaskError(desired, ForwardKinematics(chain, q)).norm();
      CHECK(err <= prev + 1e-12);
      prev = err;
    }
    CHECK(prev < 1e-6);
  }
  SUBCASE("deterministic and policy length checked") {
    std::mt19937_64 rng(16);
    const auto path = fixture::JointSpaceReach(chain, q0, fixture::NearbyGoal(chain, q0, 0.4, rng), 60, params.dt);
    const std::vector<JointVector> policy(path.size(), chain.Midrange());
    const JointTrajectory a = TrackTrajectory(chain, q0, path, policy, params);
    const JointTrajectory b = TrackTrajectory(chain, q0, path, policy, params);
    REQUIRE(a.q.size() == b.q.size());
    for (std::size_t k = 0; k < a.q.size(); ++k) CHECK(a.q[k] == b.q[k]);
    const std::vector<JointVector> short_policy(3, q0);
    CHECK_THROWS_AS(TrackTrajectory(chain, q0, path, short_policy, params), Error);
    CHECK_THROWS_AS(TrackTrajectory(chain, q0, {path[0]}, {}, params), Error);
  }
  SUBCASE("limit retries pull toward midrange") {
    // A tight margin forces every attempt; all must be used and reported.
    ClikParams tight = params;
    tight.limit_margin_min = 10.0;
    tight.max_retries = 3;
    std::vector<StatePoint> still(10);
    for (int k = 0; k < 10; ++k) {
      still[k].t = k * params.dt;
      still[k].x = start.position;
      still[k].orientation = start.orientation;
    }
    const JointTrajectory out = TrackTrajectory(chain, q0, still, {}, tight);
    CHECK_FALSE(out.feasible);
    CHECK(out.failure == TrackingFailure::kLimits);
    CHECK(out.attempts == 4);
  }
}

}  // namespace
}  // namespace lfdq
