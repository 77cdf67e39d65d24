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

#include "lfdq/kinematics.hpp"

#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "json.hpp"
#include "lfdq/error.hpp"
#include "lfdq/jsonio.hpp"

namespace lfdq {

using nlohmann::json;

double TipBox::Diagonal() const {
  return std::sqrt(width * width + length * length + height * height);
}

void KinematicChain::Validate() const {
  for (int i = 0; i < kNumJoints; ++i) {
    if (!(limits[i].lower < limits[i].upper)) {
      throw Error(ErrorCode::kSchemaViolation,
                  "joint " + std::to_string(i + 1) + ": lower limit must be below upper limit");
    }
    if (!(link_radii[i] > 0.0)) {
      throw Error(ErrorCode::kSchemaViolation,
                  "link " + std::to_string(i + 1) + ": radius must be positive");
    }
  }
  if (!(tip_box.width > 0.0 && tip_box.length > 0.0 && tip_box.height > 0.0)) {
    throw Error(ErrorCode::kSchemaViolation, "tip_box dimensions must be positive");
  }
  if (!start_config.allFinite()) {
    throw Error(ErrorCode::kSchemaViolation, "start_config must be finite");
  }
}

JointVector KinematicChain::Midrange() const {
  JointVector mid;
  for (int i = 0; i < kNumJoints; ++i) mid(i) = 0.5 * (limits[i].lower + limits[i].upper);
  return mid;
}

bool KinematicChain::WithinLimits(const JointVector& q) const {
  return (LimitMargin(*this, q).array() >= 0.0).all();
}

KinematicChain ReferenceChain() {
  constexpr double kHalfPi = std::numbers::pi / 2.0;
  KinematicChain chain;
  // Shoulder pan, shoulder lift, upper-arm roll, elbow flex, forearm roll,
  // wrist flex, wrist roll. At q = 0 the arm is stretched along base +x.
  chain.dh = {{
      {0.1, -kHalfPi, 0.0, 0.0},
      {0.0, -kHalfPi, 0.0, -kHalfPi},
      {0.0, kHalfPi, 0.4, 0.0},
      {0.0, -kHalfPi, 0.0, 0.0},
      {0.0, kHalfPi, 0.321, 0.0},
      {0.0, -kHalfPi, 0.0, 0.0},
      {0.0, 0.0, 0.13, 0.0},
  }};
  chain.limits = {{
      {-2.1, 1.0},
      {-0.5, 1.4},
      {-2.8, 2.8},
      {-2.3, -0.1},
      {-3.1, 3.1},
      {-2.0, 2.0},
      {-3.1, 3.1},
  }};
  chain.link_radii = {0.06, 0.06, 0.06, 0.06, 0.05, 0.05, 0.03};
  chain.tip_box = TipBox{};
  chain.tool_offset = 0.05;
  // Untucked: upper arm down and out to the side, elbow at 90 degrees,
  // gripper pointing up.
  chain.start_config << -0.9, 1.0, 0.0, -1.57, 0.0, -1.0, 0.0;
  return chain;
}

namespace {

template <std::size_t N>
std::array<double, N> ReadFixed(const json& j, const char* what) {
  if (!j.is_array() || j.size() != N) {
    throw Error(ErrorCode::kSchemaViolation,
                std::string(what) + ": expected array of " + std::to_string(N));
  }
  std::array<double, N> out{};
  for (std::size_t i = 0; i < N; ++i) {
    if (!j[i].is_number()) throw Error(ErrorCode::kSchemaViolation, std::string(what) + ": not a number");
    out[i] = j[i].get<double>();
  }
  return out;
}

}  // namespace

KinematicChain ChainFromJsonText(const std::string& text) {
  const json doc = ParseJsonText(text);
  for (const char* key : {"dh", "limits", "link_radii", "tip_box", "start_config"}) {
    RequireKey(doc, key);
  }
  KinematicChain chain;
  const json& dh = doc["dh"];
  if (!dh.is_array() || dh.size() != kNumJoints) {
    throw Error(ErrorCode::kSchemaViolation, "dh: expected 7 rows");
  }
  for (int i = 0; i < kNumJoints; ++i) {
    const auto row = ReadFixed<4>(dh[i], "dh row");
    chain.dh[i] = DhRow{row[0], row[1], row[2], row[3]};
  }
  const json& limits = doc["limits"];
  if (!limits.is_array() || limits.size() != kNumJoints) {
    throw Error(ErrorCode::kSchemaViolation, "limits: expected 7 rows");
  }
  for (int i = 0; i < kNumJoints; ++i) {
    const auto row = ReadFixed<2>(limits[i], "limits row");
    chain.limits[i] = JointLimit{row[0], row[1]};
  }
  chain.link_radii = ReadFixed<kNumJoints>(doc["link_radii"], "link_radii");
  const json& tip = doc["tip_box"];
  RequireKey(tip, "width");
  RequireKey(tip, "length");
  RequireKey(tip, "height");
  chain.tip_box = TipBox{tip["width"].get<double>(), tip["length"].get<double>(),
                         tip["height"].get<double>()};
  chain.tool_offset = doc.value("tool_offset", 0.0);
  const auto start = ReadFixed<kNumJoints>(doc["start_config"], "start_config");
  for (int i = 0; i < kNumJoints; ++i) chain.start_config(i) = start[i];
  chain.Validate();
  return chain;
}

KinematicChain LoadChain(const std::string& path) { return ChainFromJsonText(ReadTextFile(path)); }

std::string ChainToJsonText(const KinematicChain& chain) {
  json doc;
  doc["units"] = {{"length", "meters"}, {"angle", "radians"}};
  doc["dh_convention"] = "standard: Rz(q + theta0) Tz(d) Tx(a) Rx(alpha); rows are [a, alpha, d, theta0]";
  json dh = json::array();
  json limits = json::array();
  for (int i = 0; i < kNumJoints; ++i) {
    dh.push_back({chain.dh[i].a, chain.dh[i].alpha, chain.dh[i].d, chain.dh[i].theta0});
    limits.push_back({chain.limits[i].lower, chain.limits[i].upper});
  }
  doc["dh"] = dh;
  doc["limits"] = limits;
  doc["link_radii"] = chain.link_radii;
  doc["tip_box"] = {{"width", chain.tip_box.width},
                    {"length", chain.tip_box.length},
                    {"height", chain.tip_box.height}};
  doc["tool_offset"] = chain.tool_offset;
  doc["start_config"] = std::vector<double>(chain.start_config.data(),
                                            chain.start_config.data() + kNumJoints);
  return doc.dump(2) + "\n";
}

void SaveChain(const KinematicChain& chain, const std::string& path) {
  WriteTextFile(path, ChainToJsonText(chain));
}

namespace {

Eigen::Isometry3d DhTransform(const DhRow& row, double q) {
  const double theta = q + row.theta0;
  const double ct = std::cos(theta), st = std::sin(theta);
  const double ca = std::cos(row.alpha), sa = std::sin(row.alpha);
  Eigen::Isometry3d t = Eigen::Isometry3d::Identity();
  t.linear() << ct, -st * ca, st * sa,
                st, ct * ca, -ct * sa,
                0.0, sa, ca;
  t.translation() << row.a * ct, row.a * st, row.d;
  return t;
}

}  // namespace

std::array<Eigen::Isometry3d, kNumJoints + 2> FrameTransforms(const KinematicChain& chain,
                                                              const JointVector& q) {
  std::array<Eigen::Isometry3d, kNumJoints + 2> frames;
  frames[0] = Eigen::Isometry3d::Identity();
  for (int i = 0; i < kNumJoints; ++i) {
    frames[i + 1] = frames[i] * DhTransform(chain.dh[i], q(i));
  }
  Eigen::Isometry3d tool = Eigen::Isometry3d::Identity();
  tool.translation().z() = chain.tool_offset;
  frames[kNumJoints + 1] = frames[kNumJoints] * tool;
  return frames;
}

Pose ForwardKinematics(const KinematicChain& chain, const JointVector& q) {
  return Pose::FromIsometry(FrameTransforms(chain, q)[kNumJoints + 1]);
}

KinematicState ComputeKinematicState(const KinematicChain& chain, const JointVector& q) {
  const auto frames = FrameTransforms(chain, q);
  const Eigen::Vector3d tip = frames[kNumJoints + 1].translation();
  KinematicState state;
  state.tool = Pose::FromIsometry(frames[kNumJoints + 1]);
  for (int i = 0; i < kNumJoints; ++i) {
    const Eigen::Vector3d axis = frames[i].linear().col(2);
    const Eigen::Vector3d origin = frames[i].translation();
    state.jacobian.block<3, 1>(0, i) = axis.cross(tip - origin);
    state.jacobian.block<3, 1>(3, i) = axis;
  }
  return state;
}

Jacobian ComputeJacobian(const KinematicChain& chain, const JointVector& q) {
  return ComputeKinematicState(chain, q).jacobian;
}

std::vector<Capsule> LinkCapsules(const KinematicChain& chain, const JointVector& q) {
  const auto frames = FrameTransforms(chain, q);
  std::vector<Capsule> capsules;
  capsules.reserve(kNumJoints + 1);
  for (int i = 0; i < kNumJoints; ++i) {
    capsules.push_back(
        Capsule{frames[i].translation(), frames[i + 1].translation(), chain.link_radii[i]});
  }
  // Tip capsule: axis spans the tip box height, radius covers its cross-section.
  const Eigen::Isometry3d& tool = frames[kNumJoints + 1];
  const Eigen::Vector3d axis = tool.linear().col(2);
  const double half_h = 0.5 * chain.tip_box.height;
  const double radius =
      0.5 * std::hypot(chain.tip_box.width, chain.tip_box.length);
  capsules.push_back(Capsule{tool.translation() - half_h * axis, tool.translation() + half_h * axis,
                             radius});
  return capsules;
}

JointVector LimitMargin(const KinematicChain& chain, const JointVector& q) {
  JointVector margin;
  for (int i = 0; i < kNumJoints; ++i) {
    margin(i) = std::min(q(i) - chain.limits[i].lower, chain.limits[i].upper - q(i));
  }
  return margin;
}

}  // namespace lfdq
