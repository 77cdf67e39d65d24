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

#ifndef LFDQ_TPGMM_HPP_
#define LFDQ_TPGMM_HPP_

#include <cstdint>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "lfdq/demonstrations.hpp"
#include "lfdq/geometry.hpp"

namespace lfdq {

inline constexpr int kStateDim = 8;

using StateVector = Eigen::Matrix<double, kStateDim, 1>;
using StateMatrix = Eigen::Matrix<double, kStateDim, kStateDim>;

// Task parameter (A, b) acting on the state (t, x, quaternion). A is block
// diagonal: 1 for time, a rotation for position and the quaternion
// left-multiplication operator for orientation.
struct TaskFrame {
  StateMatrix A = StateMatrix::Identity();
  StateVector b = StateVector::Zero();

  static TaskFrame Identity() { return TaskFrame{}; }
  static TaskFrame FromPose(const Pose& pose);

  // Throws Error(kInvalidArgument) if the blocks are not orthonormal or the
  // time block is not 1.
  void Validate() const;
};

// A^-1 (xi - b).
StateVector ProjectToFrame(const StateVector& xi, const TaskFrame& frame);
// A xi + b.
StateVector UnprojectFromFrame(const StateVector& local, const TaskFrame& frame);

struct TpgmmModel {
  int num_components = 0;
  int num_frames = 0;
  double regularization = 0.0;
  std::vector<double> priors;
  // Indexed [frame][component].
  std::vector<std::vector<StateVector>> means;
  std::vector<std::vector<StateMatrix>> covariances;
  // Role names of the frames, e.g. {"start", "target"}.
  std::vector<std::string> frame_roles;
};

struct GlobalGmm {
  std::vector<double> priors;
  std::vector<StateVector> means;
  std::vector<StateMatrix> covariances;
};

enum class EmInit { kPhaseSlicing, kRandomResponsibilities };

struct EmOptions {
  int num_components = 6;
  double regularization = 1e-6;
  // Stop once the mean per-point log-likelihood gains less than this.
  double tolerance = 1e-6;
  int max_iterations = 200;
  EmInit init = EmInit::kPhaseSlicing;
  // Only consulted by kRandomResponsibilities.
  std::uint64_t seed = 0;
};

struct EmResult {
  TpgmmModel model;
  // Total log-likelihood after every E-step, starting with the initial model.
  std::vector<double> log_likelihood;
  int iterations = 0;
};

// Fits K Gaussians per frame with responsibilities shared across frames.
// `frame_data[j][n]` is point n expressed in frame j; every frame holds the
// same number of points. Throws Error(kDegenerateData) when there are fewer
// distinct points than components.
EmResult FitEm(const std::vector<std::vector<StateVector>>& frame_data, const EmOptions& options);

// Per-component product over frames of N(A mu + b, A Sigma A^T).
// Throws Error(kSingularCovariance) if the precision sum cannot be inverted.
GlobalGmm CombineFrames(const TpgmmModel& model, const std::vector<TaskFrame>& frames);

// Gaussian mixture regression of (x, quaternion) on the time/phase input.
StatePoint GmrQuery(const GlobalGmm& gmm, double phase);

// Combines frames once and queries GMR at `samples` uniform phases in [0, 1].
std::vector<StatePoint> GenerateTrajectory(const TpgmmModel& model,
                                           const std::vector<TaskFrame>& frames, int samples);

// Log density of a multivariate normal; covariance must be positive definite.
double LogGaussianDensity(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                          const Eigen::MatrixXd& covariance);

// Model file ("tpgmm-v1").
std::string ModelToJsonText(const TpgmmModel& model);
TpgmmModel ModelFromJsonText(const std::string& text);
void SaveModel(const TpgmmModel& model, const std::string& path);
TpgmmModel LoadModel(const std::string& path);

}  // namespace lfdq

#endif  // LFDQ_TPGMM_HPP_
