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
#include "lfdq/geometry.hpp"
#include "oracles.hpp"

namespace lfdq {
namespace {

Eigen::Quaterniond RandomQuat(std::mt19937_64& rng) {
  std::normal_distribution<double> n(0.0, 1.0);
  return Eigen::Quaterniond(n(rng), n(rng), n(rng), n(rng)).normalized();
}

Eigen::Vector3d RandomPoint(std::mt19937_64& rng, double scale) {
  std::uniform_real_distribution<double> u(-scale, scale);
  return {u(rng), u(rng), u(rng)};
}

double SegmentSegmentBySampling(const Eigen::Vector3d& p0, const Eigen::Vector3d& p1,
                                const Eigen::Vector3d& q0, const Eigen::Vector3d& q1, int n) {
  double best = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= n; ++i) {
    const Eigen::Vector3d p = p0 + (p1 - p0) * (double(i) / n);
    for (int j = 0; j <= n; ++j) best = std::min(best, (p - (q0 + (q1 - q0) * (double(j) / n))).norm());
  }
  return best;
}

TEST_CASE("quaternion vector form") {
  std::mt19937_64 rng(3);
  for (int i = 0; i < 50; ++i) {
    const Eigen::Quaterniond q = RandomQuat(rng), r = RandomQuat(rng);
    CHECK((QuatToWxyz(WxyzToQuat(QuatToWxyz(q))) - QuatToWxyz(q)).norm() < 1e-15);
    CHECK((QuatLeftMatrix(r) * QuatToWxyz(q) - QuatToWxyz(r * q)).norm() < 1e-12);
    // L(r) of a unit quaternion is orthonormal.
    CHECK((QuatLeftMatrix(r).transpose() * QuatLeftMatrix(r) - Eigen::Matrix4d::Identity()).norm() < 1e-12);
  }
}

TEST_CASE("orientation error") {
  std::mt19937_64 rng(5);
  for (int i = 0; i < 50; ++i) {
    const Eigen::Quaterniond current = RandomQuat(rng);
    CHECK(OrientationError(current, current).norm() < 1e-12);
    const double angle = std::uniform_real_distribution<double>(-3.0, 3.0)(rng);
    const Eigen::Vector3d axis = RandomPoint(rng, 1.0).normalized();
    const Eigen::Quaterniond desired = Eigen::Quaterniond(Eigen::AngleAxisd(angle, axis)) * current;
    CHECK((OrientationError(desired, current) - angle * axis).norm() < 1e-9);
    // q and -q are the same rotation.
    Eigen::Quaterniond flipped = desired;
    flipped.coeffs() = -flipped.coeffs();
    CHECK((OrientationError(flipped, current) - angle * axis).norm() < 1e-9);
    CHECK(OrientationDistance(desired, current) == doctest::Approx(std::abs(angle)).epsilon(1e-9));
  }
}

TEST_CASE("point to segment") {
  const Eigen::Vector3d a(0, 0, 0), b(1, 0, 0);
  CHECK(PointSegmentDistance({0.5, 2, 0}, a, b) == doctest::Approx(2.0));
  CHECK(PointSegmentDistance({-3, 4, 0}, a, b) == doctest::Approx(5.0));
  CHECK(PointSegmentDistance({1, 0, 0}, a, b) == doctest::Approx(0.0));
  CHECK(PointSegmentDistance({0, 1, 0}, a, a) == doctest::Approx(1.0));
}

TEST_CASE("segment to segment against dense sampling") {
  std::mt19937_64 rng(11);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector3d p0 = RandomPoint(rng, 1), p1 = RandomPoint(rng, 1);
    const Eigen::Vector3d q0 = RandomPoint(rng, 1), q1 = RandomPoint(rng, 1);
    const double exact = SegmentSegmentDistance(p0, p1, q0, q1);
    const double sampled = SegmentSegmentBySampling(p0, p1, q0, q1, 400);
    // Sampling can only overestimate, by at most one step.
    CHECK(exact <= sampled + 1e-12);
    CHECK(sampled - exact < 0.02);
  }
  SUBCASE("parallel and degenerate segments") {
    CHECK(SegmentSegmentDistance({0, 0, 0}, {1, 0, 0}, {0.5, 1, 0}, {2, 1, 0}) == doctest::Approx(1.0));
    CHECK(SegmentSegmentDistance({0, 0, 0}, {0, 0, 0}, {1, 0, 0}, {1, 0, 0}) == doctest::Approx(1.0));
    CHECK(SegmentSegmentDistance({-1, 0, 0}, {1, 0, 0}, {0, -1, 0}, {0, 1, 0}) == doctest::Approx(0.0));
  }
}

TEST_CASE("point to box against surface sampling") {
  std::mt19937_64 rng(13);
  const int per_edge = 100;
  for (int i = 0; i < 200; ++i) {
    const Pose box{RandomPoint(rng, 0.5), RandomQuat(rng)};
    const Eigen::Vector3d half = RandomPoint(rng, 0.2).cwiseAbs() + Eigen::Vector3d::Constant(0.02);
    const Eigen::Vector3d p = box.position + RandomPoint(rng, 0.5);
    const double exact = PointBoxDistance(p, box, half);
    const double sampled = oracle::PointBoxDistanceBySampling(p, box.ToIsometry(), half, per_edge);
    // Half the diagonal of one sampling cell bounds the sampling error.
    const double cell = 2.0 * half.maxCoeff() / per_edge;
    CHECK(exact <= sampled + 1e-12);
    CHECK(sampled - exact <= cell * std::sqrt(2.0) / 2.0 + 1e-12);
  }
}

TEST_CASE("segment to box") {
  std::mt19937_64 rng(17);
  const Pose box{Eigen::Vector3d(0.1, -0.2, 0.3),
                 Eigen::Quaterniond(Eigen::AngleAxisd(0.4, Eigen::Vector3d(1, 1, 0).normalized()))};
  const Eigen::Vector3d half(0.1, 0.15, 0.05);
  for (int i = 0; i < 100; ++i) {
    const Eigen::Vector3d a = box.position + RandomPoint(rng, 0.6);
    const Eigen::Vector3d b = box.position + RandomPoint(rng, 0.6);
    double sampled = std::numeric_limits<double>::infinity();
    for (int k = 0; k <= 2000; ++k) sampled = std::min(sampled, PointBoxDistance(a + (b - a) * (k / 2000.0), box, half));
    const double exact = SegmentBoxDistance(a, b, box, half);
    CHECK(exact <= sampled + 1e-9);
    CHECK(sampled - exact < 1e-3);
  }
  // A segment piercing the box is at distance zero even though both ends are outside.
  const Eigen::Vector3d axis = box.orientation * Eigen::Vector3d::UnitX();
  CHECK(SegmentBoxDistance(box.position - axis, box.position + axis, box, half) == doctest::Approx(0.0));
}

}  // namespace
}  // namespace lfdq
