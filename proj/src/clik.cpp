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

#include "lfdq/clik.hpp"

#include <cmath>
#include <limits>

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>

#include "lfdq/error.hpp"

namespace lfdq {

void ClikParams::Validate() const {
  if (!(dt > 0.0)) throw Error(ErrorCode::kInvalidArgument, "dt must be positive");
  if (!(damping >= 0.0)) throw Error(ErrorCode::kInvalidArgument, "damping must be >= 0");
  if (!kp.isApprox(kp.transpose(), 1e-12)) {
    throw Error(ErrorCode::kInvalidArgument, "kp must be symmetric");
  }
  Eigen::SelfAdjointEigenSolver<Matrix6d> eig(kp);
  if (eig.eigenvalues().minCoeff() <= 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "kp must be positive definite");
  }
  if (max_retries < 0) throw Error(ErrorCode::kInvalidArgument, "max_retries must be >= 0");
}

const char* TrackingFailureName(TrackingFailure reason) {
  switch (reason) {
    case TrackingFailure::kNone: return "none";
    case TrackingFailure::kLimits: return "limits";
    case TrackingFailure::kDivergence: return "divergence";
  }
  return "unknown";
}

SrInverse ComputeSrInverse(const Jacobian& jac, double damping) {
  if (damping < 0.0) throw Error(ErrorCode::kInvalidArgument, "damping must be >= 0");
  Matrix6d gram = jac * jac.transpose();
  gram.diagonal().array() += damping * damping;
  Eigen::LDLT<Matrix6d> ldlt(gram);
  if (damping == 0.0) {
    Eigen::SelfAdjointEigenSolver<Matrix6d> eig(gram, Eigen::EigenvaluesOnly);
    const double max_ev = std::max(eig.eigenvalues().maxCoeff(), 1.0);
    if (eig.eigenvalues().minCoeff() <= 1e-14 * max_ev) {
      throw Error(ErrorCode::kSingularSystem, "J J^T is singular and damping is zero");
    }
  }
  return ldlt.solve(jac).transpose();
}

NullProjector ComputeNullProjector(const Jacobian& jac) {
  Matrix6d gram = jac * jac.transpose();
  Eigen::LLT<Matrix6d> llt(gram);
  if (llt.info() != Eigen::Success) {
    gram.diagonal().array() += 1e-12;
    llt.compute(gram);
  }
  const Eigen::Matrix<double, kNumJoints, 6> pinv = llt.solve(jac).transpose();
  return NullProjector::Identity() - pinv * jac;
}

int ClosestDemonstrationIndex(const DemoSet& set, const Eigen::Vector3d& target) {
  if (set.demos.empty()) throw Error(ErrorCode::kEmptySet, "no demonstrations");
  int best = -1;
  double best_dist = std::numeric_limits<double>::infinity();
  for (std::size_t i = 0; i < set.demos.size(); ++i) {
    const auto& cart = set.demos[i].cart_traj;
    if (cart.empty()) continue;
    const double d = (cart.back().x - target).norm();
    if (d < best_dist) {
      best_dist = d;
      best = static_cast<int>(i);
    }
  }
  if (best < 0) throw Error(ErrorCode::kEmptySet, "demonstrations carry no samples");
  return best;
}

const Demonstration& ClosestDemonstration(const DemoSet& set, const Eigen::Vector3d& target) {
  return set.demos[ClosestDemonstrationIndex(set, target)];
}

Twist TaskError(const Pose& desired, const Pose& current) {
  Twist e;
  e.head<3>() = desired.position - current.position;
  e.tail<3>() = OrientationError(desired.orientation, current.orientation);
  return e;
}

namespace {

JointVector StepWithState(const KinematicState& state, const JointVector& q, const Pose& desired,
                          const Twist& desired_velocity, const JointVector& q_ref,
                          double null_gain, const ClikParams& params) {
  const Twist e = TaskError(desired, state.tool);
  const SrInverse j_star = ComputeSrInverse(state.jacobian, params.damping);
  const NullProjector null = ComputeNullProjector(state.jacobian);
  return j_star * (desired_velocity + params.kp * e) + null * (null_gain * (q_ref - q));
}

}  // namespace

JointVector ClikStep(const KinematicChain& chain, const JointVector& q, const Pose& desired,
                     const Twist& desired_velocity, const JointVector& q_ref,
                     const ClikParams& params) {
  return StepWithState(ComputeKinematicState(chain, q), q, desired, desired_velocity, q_ref,
                       params.null_gain, params);
}

Twist FiniteDifferenceTwist(const StatePoint& from, const StatePoint& to, double dt) {
  Twist v;
  v.head<3>() = (to.x - from.x) / dt;
  v.tail<3>() = OrientationError(to.orientation, from.orientation) / dt;
  return v;
}

JointTrajectory TrackTrajectory(const KinematicChain& chain, const JointVector& q0,
                                const std::vector<StatePoint>& cart_traj,
                                const std::vector<JointVector>& policy, const ClikParams& params) {
  params.Validate();
  const std::size_t n = cart_traj.size();
  if (n < 2) throw Error(ErrorCode::kInvalidArgument, "trajectory needs at least two samples");
  if (!policy.empty() && policy.size() != n) {
    throw Error(ErrorCode::kLengthMismatch, "policy length differs from trajectory length");
  }
  const JointVector mid = chain.Midrange();

  std::vector<JointVector> refs(n, q0);
  if (!policy.empty()) refs = policy;

  JointTrajectory out;
  double gain = params.null_gain;
  for (int attempt = 0; attempt <= params.max_retries; ++attempt) {
    if (attempt > 0) {
      gain *= 2.0;
      for (auto& r : refs) r = 0.5 * (r + mid);
    }
    JointTrajectory run;
    run.phase.reserve(n);
    run.q.reserve(n);
    run.qdot.reserve(n);
    JointVector q = q0;
    double min_margin = LimitMargin(chain, q).minCoeff();
    for (std::size_t k = 0; k + 1 < n; ++k) {
      const KinematicState state = ComputeKinematicState(chain, q);
      const Pose desired{cart_traj[k].x, cart_traj[k].orientation};
      const Twist ff = FiniteDifferenceTwist(cart_traj[k], cart_traj[k + 1], params.dt);
      const JointVector qdot = StepWithState(state, q, desired, ff, refs[k], gain, params);
      run.phase.push_back(cart_traj[k].t);
      run.q.push_back(q);
      run.qdot.push_back(qdot);
      q += params.dt * qdot;
      for (int j = 0; j < kNumJoints; ++j) {
        q(j) = std::clamp(q(j), chain.limits[j].lower, chain.limits[j].upper);
      }
      min_margin = std::min(min_margin, LimitMargin(chain, q).minCoeff());
    }
    run.phase.push_back(cart_traj.back().t);
    run.q.push_back(q);
    run.qdot.push_back(JointVector::Zero());
    const Pose final_pose = ForwardKinematics(chain, q);
    run.final_position_error = (final_pose.position - cart_traj.back().x).norm();
    run.final_orientation_error =
        OrientationDistance(cart_traj.back().orientation, final_pose.orientation);
    run.attempts = attempt + 1;

    const bool limits_ok = min_margin >= params.limit_margin_min;
    const bool converged = run.final_position_error <= params.final_tolerance;
    run.feasible = limits_ok && converged;
    run.failure = converged ? (limits_ok ? TrackingFailure::kNone : TrackingFailure::kLimits)
                            : TrackingFailure::kDivergence;
    out = std::move(run);
    if (limits_ok) break;
  }
  return out;
}

}  // namespace lfdq
