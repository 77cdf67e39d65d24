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

#ifndef LFDQ_TESTS_ORACLES_HPP_
#define LFDQ_TESTS_ORACLES_HPP_

// Reference computations used to check the library. None of these call into
// the code path they are used to verify.

#include <array>
#include <cmath>
#include <random>
#include <vector>

#include <Eigen/Core>
#include <Eigen/Geometry>
#include <Eigen/SVD>

#include "lfdq/kinematics.hpp"

namespace lfdq::oracle {

inline Eigen::Matrix4d RotZ(double a) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m(0, 0) = std::cos(a);
  m(0, 1) = -std::sin(a);
  m(1, 0) = std::sin(a);
  m(1, 1) = std::cos(a);
  return m;
}

inline Eigen::Matrix4d RotX(double a) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m(1, 1) = std::cos(a);
  m(1, 2) = -std::sin(a);
  m(2, 1) = std::sin(a);
  m(2, 2) = std::cos(a);
  return m;
}

inline Eigen::Matrix4d Trans(double x, double y, double z) {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m(0, 3) = x;
  m(1, 3) = y;
  m(2, 3) = z;
  return m;
}

// Homogeneous transforms of every joint origin (entries 0..7) and the tool
// (entry 8), composed from elementary rotations and translations.
inline std::array<Eigen::Matrix4d, 9> ChainedTransforms(const KinematicChain& chain,
                                                       const JointVector& q) {
  std::array<Eigen::Matrix4d, 9> out;
  Eigen::Matrix4d t = Eigen::Matrix4d::Identity();
  out[0] = t;
  for (int i = 0; i < kNumJoints; ++i) {
    const DhRow& r = chain.dh[i];
    t = t * RotZ(q(i) + r.theta0) * Trans(0, 0, r.d) * Trans(r.a, 0, 0) * RotX(r.alpha);
    out[i + 1] = t;
  }
  out[8] = t * Trans(0, 0, chain.tool_offset);
  return out;
}

inline Eigen::MatrixXd SvdPseudoInverse(const Eigen::MatrixXd& m) {
  Eigen::JacobiSVD<Eigen::MatrixXd> svd(m, Eigen::ComputeFullU | Eigen::ComputeFullV);
  const auto& s = svd.singularValues();
  Eigen::MatrixXd sinv = Eigen::MatrixXd::Zero(m.cols(), m.rows());
  for (int i = 0; i < s.size(); ++i) {
    if (s(i) > 1e-12 * s(0)) sinv(i, i) = 1.0 / s(i);
  }
  return svd.matrixV() * sinv * svd.matrixU().transpose();
}

// Plain density of a 2-D normal evaluated from its closed form.
inline double Normal2d(const Eigen::Vector2d& x, const Eigen::Vector2d& mu,
                       const Eigen::Matrix2d& sigma) {
  const double det = sigma(0, 0) * sigma(1, 1) - sigma(0, 1) * sigma(1, 0);
  Eigen::Matrix2d inv;
  inv << sigma(1, 1), -sigma(0, 1), -sigma(1, 0), sigma(0, 0);
  inv /= det;
  const Eigen::Vector2d d = x - mu;
  return std::exp(-0.5 * d.dot(inv * d)) / (2.0 * M_PI * std::sqrt(det));
}

// Sample Pearson correlation written directly from its definition.
inline double PearsonDirect(const std::vector<double>& x, const std::vector<double>& y) {
  const double n = static_cast<double>(x.size());
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    sx += x[i];
    sy += y[i];
  }
  const double mx = sx / n, my = sy / n;
  double cxy = 0, cxx = 0, cyy = 0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    cxy += (x[i] - mx) * (y[i] - my);
    cxx += (x[i] - mx) * (x[i] - mx);
    cyy += (y[i] - my) * (y[i] - my);
  }
  return cxy / std::sqrt(cxx * cyy);
}

// Minimum distance from a point to a solid box, estimated by densely
// sampling the box surface (and reporting zero for interior points).
inline double PointBoxDistanceBySampling(const Eigen::Vector3d& p, const Eigen::Isometry3d& box,
                                         const Eigen::Vector3d& half, int per_edge) {
  const Eigen::Vector3d local = box.inverse() * p;
  if ((local.cwiseAbs() - half).maxCoeff() <= 0.0) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (int axis = 0; axis < 3; ++axis) {
    for (int sign = -1; sign <= 1; sign += 2) {
      const int a = (axis + 1) % 3, b = (axis + 2) % 3;
      for (int i = 0; i <= per_edge; ++i) {
        for (int j = 0; j <= per_edge; ++j) {
          Eigen::Vector3d s;
          s(axis) = sign * half(axis);
          s(a) = -half(a) + 2.0 * half(a) * i / per_edge;
          s(b) = -half(b) + 2.0 * half(b) * j / per_edge;
          best = std::min(best, (s - local).norm());
        }
      }
    }
  }
  return best;
}

inline JointVector RandomConfig(const KinematicChain& chain, std::mt19937_64& rng) {
  JointVector q;
  for (int i = 0; i < kNumJoints; ++i) {
    std::uniform_real_distribution<double> u(chain.limits[i].lower, chain.limits[i].upper);
    q(i) = u(rng);
  }
  return q;
}

}  // namespace lfdq::oracle

#endif  // LFDQ_TESTS_ORACLES_HPP_
