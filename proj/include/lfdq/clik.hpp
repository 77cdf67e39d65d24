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

#ifndef LFDQ_CLIK_HPP_
#define LFDQ_CLIK_HPP_

#include <optional>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lfdq/demonstrations.hpp"
#include "lfdq/kinematics.hpp"

namespace lfdq {

using Matrix6d = Eigen::Matrix<double, 6, 6>;
using SrInverse = Eigen::Matrix<double, kNumJoints, 6>;
using NullProjector = Eigen::Matrix<double, kNumJoints, kNumJoints>;

struct ClikParams {
  double damping = 0.05;                           // lambda of the SR inverse
  Matrix6d kp = 10.0 * Matrix6d::Identity();       // 1/s
  double dt = 0.05;                                // s per Cartesian sample
  double null_gain = 1.0;                          // 1/s
  double limit_margin_min = 0.05;                  // rad
  int max_retries = 5;
  double final_tolerance = 0.005;                  // m

  // Throws Error(kInvalidArgument) if kp is not symmetric positive definite,
  // dt <= 0 or damping < 0.
  void Validate() const;
};

enum class TrackingFailure { kNone, kLimits, kDivergence };

const char* TrackingFailureName(TrackingFailure reason);

struct JointTrajectory {
  std::vector<double> phase;
  std::vector<JointVector> q;
  std::vector<JointVector> qdot;
  bool feasible = false;
  TrackingFailure failure = TrackingFailure::kNone;
  int attempts = 0;
  double final_position_error = 0.0;
  double final_orientation_error = 0.0;
};

// Damped least-squares inverse J^T (J J^T + lambda^2 I)^-1.
// Throws Error(kSingularSystem) when lambda == 0 and J J^T is singular.
SrInverse ComputeSrInverse(const Jacobian& jac, double damping);

// I - J^T (J J^T)^-1 J, with a 1e-12 ridge when J J^T is singular.
NullProjector ComputeNullProjector(const Jacobian& jac);

// Demonstration whose final tool position is nearest to `target`; ties go to
// the lowest index. Throws Error(kEmptySet) on an empty set.
int ClosestDemonstrationIndex(const DemoSet& set, const Eigen::Vector3d& target);
const Demonstration& ClosestDemonstration(const DemoSet& set, const Eigen::Vector3d& target);

// 6-vector task error: position difference, then orientation axis-angle.
Twist TaskError(const Pose& desired, const Pose& current);

// One CLIK velocity command: J*(xdot_d + kp e) + (I - J^+ J) null_gain (q_ref - q).
JointVector ClikStep(const KinematicChain& chain, const JointVector& q, const Pose& desired,
                     const Twist& desired_velocity, const JointVector& q_ref,
                     const ClikParams& params);

// Desired twist between two consecutive Cartesian samples.
Twist FiniteDifferenceTwist(const StatePoint& from, const StatePoint& to, double dt);

// Euler-integrates ClikStep along `cart_traj`, one control step per sample.
// `policy` holds the phase-matched null-space references (same length as
// `cart_traj`); when empty the start configuration is used. Limit violations
// trigger a full re-run with a stronger, midrange-attracting null policy.
JointTrajectory TrackTrajectory(const KinematicChain& chain, const JointVector& q0,
                                const std::vector<StatePoint>& cart_traj,
                                const std::vector<JointVector>& policy, const ClikParams& params);

}  // namespace lfdq

#endif  // LFDQ_CLIK_HPP_
