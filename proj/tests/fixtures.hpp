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


#ifndef LFDQ_TESTS_FIXTURES_HPP_
#define LFDQ_TESTS_FIXTURES_HPP_

#include <random>
#include <vector>

#include "lfdq/demonstrations.hpp"
#include "lfdq/kinematics.hpp"

namespace lfdq::fixture {

inline double MinJerk(double s) { return s * s * s * (10.0 - 15.0 * s + 6.0 * s * s); }

// Cartesian path traced by a min-jerk joint-space move; reachable by construction.
inline std::vector<StatePoint> JointSpaceReach(const KinematicChain& chain, const JointVector& from,
                                               const JointVector& to, int samples, double dt) {
  std::vector<JointSample> js;
  for (int k = 0; k < samples; ++k) {
    const double w = MinJerk(k / double(samples - 1));
    js.push_back({k * dt, (1.0 - w) * from + w * to});
  }
  return DeriveStates(chain, js);
}

// Straight line in position at constant orientation.
inline std::vector<StatePoint> StraightReach(const Pose& start, const Eigen::Vector3d& offset,
                                             int samples, double dt) {
  std::vector<StatePoint> out;
  for (int k = 0; k < samples; ++k) {
    StatePoint p;
    p.t = k * dt;
    p.x = start.position + MinJerk(k / double(samples - 1)) * offset;
    p.orientation = start.orientation;
    out.push_back(p);
  }
  return out;
}

// Random goal configuration near q that keeps every joint clear of its limits.
inline JointVector NearbyGoal(const KinematicChain& chain, const JointVector& q, double spread,
                              std::mt19937_64& rng) {
  std::uniform_real_distribution<double> u(-spread, spread);
  JointVector g;
  for (int j = 0; j < kNumJoints; ++j) {
    const double lo = chain.limits[j].lower + 0.2, hi = chain.limits[j].upper - 0.2;
    g(j) = std::clamp(q(j) + u(rng), lo, hi);
  }
  return g;
}

}  // namespace lfdq::fixture

#endif  // LFDQ_TESTS_FIXTURES_HPP_
