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

#include "lfdq/demonstrations.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <limits>

#include "lfdq/error.hpp"
#include "lfdq/jsonio.hpp"

namespace lfdq {

using nlohmann::json;

Eigen::Matrix<double, 8, 1> StatePoint::ToVector() const {
  Eigen::Matrix<double, 8, 1> v;
  v << t, x, orientation.w(), orientation.x(), orientation.y(), orientation.z();
  return v;
}

StatePoint StatePoint::FromVector(const Eigen::Matrix<double, 8, 1>& v) {
  StatePoint p;
  p.t = v(0);
  p.x = v.segment<3>(1);
  p.orientation = Eigen::Quaterniond(v(4), v(5), v(6), v(7));
  return p;
}

const char* FaceName(FaceId face) { return face == FaceId::kLow ? "low" : "high"; }

FaceId ParseFace(const std::string& name) {
  if (name == "low") return FaceId::kLow;
  if (name == "high") return FaceId::kHigh;
  throw Error(ErrorCode::kUnknownFace, name);
}

std::vector<StatePoint> DeriveStates(const KinematicChain& chain,
                                     const std::vector<JointSample>& joint_traj) {
  std::vector<StatePoint> states;
  states.reserve(joint_traj.size());
  for (std::size_t i = 0; i < joint_traj.size(); ++i) {
    if (i > 0 && !(joint_traj[i].t > joint_traj[i - 1].t)) {
      throw Error(ErrorCode::kNonMonotonicTime,
                  "timestamps must strictly increase (sample " + std::to_string(i) + ")");
    }
    const Pose pose = ForwardKinematics(chain, joint_traj[i].q);
    StatePoint p;
    p.t = joint_traj[i].t;
    p.x = pose.position;
    p.orientation = pose.orientation;
    if (!states.empty() && states.back().orientation.dot(p.orientation) < 0.0) {
      p.orientation.coeffs() = -p.orientation.coeffs();
    }
    states.push_back(p);
  }
  return states;
}

Demonstration MakeDemonstration(const KinematicChain& chain, DemoMeta meta,
                                std::vector<JointSample> joint_traj) {
  Demonstration demo;
  demo.meta = std::move(meta);
  demo.cart_traj = DeriveStates(chain, joint_traj);
  demo.joint_traj = std::move(joint_traj);
  return demo;
}

WarpingPath DynamicTimeWarp(const std::vector<Eigen::Vector3d>& reference,
                            const std::vector<Eigen::Vector3d>& query) {
  const int n = static_cast<int>(reference.size());
  const int m = static_cast<int>(query.size());
  if (n == 0 || m == 0) throw Error(ErrorCode::kEmptyDemonstration, "empty sequence");
  constexpr double kInf = std::numeric_limits<double>::infinity();
  std::vector<double> acc(static_cast<std::size_t>(n) * m, kInf);
  auto at = [&](int i, int j) -> double& { return acc[static_cast<std::size_t>(i) * m + j]; };
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < m; ++j) {
      const double c = (reference[i] - query[j]).norm();
      if (i == 0 && j == 0) {
        at(i, j) = c;
        continue;
      }
      double best = kInf;
      if (i > 0 && j > 0) best = at(i - 1, j - 1);
      if (i > 0) best = std::min(best, at(i - 1, j));
      if (j > 0) best = std::min(best, at(i, j - 1));
      at(i, j) = c + best;
    }
  }
  WarpingPath path;
  path.cost = at(n - 1, m - 1);
  int i = n - 1, j = m - 1;
  path.steps.emplace_back(i, j);
  while (i > 0 || j > 0) {
    if (i == 0) {
      --j;
    } else if (j == 0) {
      --i;
    } else {
      const double diag = at(i - 1, j - 1);
      const double up = at(i - 1, j);
      const double left = at(i, j - 1);
      if (diag <= up && diag <= left) {
        --i;
        --j;
      } else if (up <= left) {
        --i;
      } else {
        --j;
      }
    }
    path.steps.emplace_back(i, j);
  }
  std::reverse(path.steps.begin(), path.steps.end());
  return path;
}

namespace {

std::vector<Eigen::Vector3d> Positions(const Demonstration& demo) {
  std::vector<Eigen::Vector3d> xs;
  xs.reserve(demo.cart_traj.size());
  for (const auto& p : demo.cart_traj) xs.push_back(p.x);
  return xs;
}

void CheckAlignable(const DemoSet& set) {
  if (set.demos.empty()) throw Error(ErrorCode::kEmptyDemonstration, "empty demonstration set");
  for (const auto& d : set.demos) {
    if (d.cart_traj.size() < 2 || d.joint_traj.size() != d.cart_traj.size()) {
      throw Error(ErrorCode::kEmptyDemonstration,
                  "every demonstration needs at least two samples in both channels");
    }
  }
}

double Phase(int k, int length) { return static_cast<double>(k) / (length - 1); }

// Linear resampling of a demonstration (both channels) to `length` points on
// the normalized phase axis.
Demonstration ResampleDemo(const Demonstration& demo, int length) {
  const int n = static_cast<int>(demo.cart_traj.size());
  Demonstration out;
  out.meta = demo.meta;
  out.cart_traj.resize(length);
  out.joint_traj.resize(length);
  for (int k = 0; k < length; ++k) {
    const double s = Phase(k, length) * (n - 1);
    int i0 = static_cast<int>(std::floor(s));
    i0 = std::clamp(i0, 0, n - 1);
    const int i1 = std::min(i0 + 1, n - 1);
    const double f = s - i0;
    StatePoint p;
    p.t = Phase(k, length);
    if (f == 0.0 || i0 == i1) {
      p.x = demo.cart_traj[i0].x;
      p.orientation = demo.cart_traj[i0].orientation;
      out.joint_traj[k].q = demo.joint_traj[i0].q;
    } else {
      p.x = (1.0 - f) * demo.cart_traj[i0].x + f * demo.cart_traj[i1].x;
      p.orientation = demo.cart_traj[i0].orientation.slerp(f, demo.cart_traj[i1].orientation);
      out.joint_traj[k].q = (1.0 - f) * demo.joint_traj[i0].q + f * demo.joint_traj[i1].q;
    }
    out.joint_traj[k].t = p.t;
    out.cart_traj[k] = p;
  }
  for (int k = 1; k < length; ++k) {
    if (out.cart_traj[k - 1].orientation.dot(out.cart_traj[k].orientation) < 0.0) {
      out.cart_traj[k].orientation.coeffs() = -out.cart_traj[k].orientation.coeffs();
    }
  }
  return out;
}

// Maps `demo` onto the reference time axis: each reference index takes the
// mean of the demo samples matched to it, with the first and last indices
// pinned to the demo's own endpoints.
Demonstration WarpOntoReference(const Demonstration& demo, const WarpingPath& path,
                                int reference_length) {
  std::vector<std::vector<int>> matches(reference_length);
  for (const auto& [i, j] : path.steps) matches[i].push_back(j);
  const int m = static_cast<int>(demo.cart_traj.size());
  Demonstration out;
  out.meta = demo.meta;
  out.cart_traj.resize(reference_length);
  out.joint_traj.resize(reference_length);
  for (int i = 0; i < reference_length; ++i) {
    std::vector<int> js = matches[i];
    if (i == 0) js = {0};
    if (i == reference_length - 1) js = {m - 1};
    Eigen::Vector3d x = Eigen::Vector3d::Zero();
    Eigen::Vector4d quat = Eigen::Vector4d::Zero();
    JointVector q = JointVector::Zero();
    const Eigen::Vector4d anchor = QuatToWxyz(demo.cart_traj[js.front()].orientation);
    for (int j : js) {
      x += demo.cart_traj[j].x;
      Eigen::Vector4d v = QuatToWxyz(demo.cart_traj[j].orientation);
      if (v.dot(anchor) < 0.0) v = -v;
      quat += v;
      q += demo.joint_traj[j].q;
    }
    const double w = 1.0 / static_cast<double>(js.size());
    out.cart_traj[i].t = static_cast<double>(i);
    out.cart_traj[i].x = x * w;
    out.cart_traj[i].orientation = WxyzToQuat(quat.normalized());
    out.joint_traj[i].t = static_cast<double>(i);
    out.joint_traj[i].q = q * w;
  }
  return out;
}

}  // namespace

int MedoidIndex(const DemoSet& set) {
  if (set.demos.empty()) throw Error(ErrorCode::kEmptyDemonstration, "empty demonstration set");
  const std::size_t n = set.demos.size();
  std::vector<std::vector<Eigen::Vector3d>> xs;
  xs.reserve(n);
  for (const auto& d : set.demos) xs.push_back(Positions(d));
  std::vector<double> total(n, 0.0);
  for (std::size_t a = 0; a < n; ++a) {
    for (std::size_t b = a + 1; b < n; ++b) {
      const double c = DynamicTimeWarp(xs[a], xs[b]).cost;
      total[a] += c;
      total[b] += c;
    }
  }
  return static_cast<int>(std::min_element(total.begin(), total.end()) - total.begin());
}

DemoSet DtwAlign(const DemoSet& set, int target_length) {
  if (target_length < 2) throw Error(ErrorCode::kInvalidArgument, "target length must be >= 2");
  CheckAlignable(set);
  DemoSet out;
  out.aligned_length = target_length;
  const bool already_aligned =
      std::all_of(set.demos.begin(), set.demos.end(), [&](const Demonstration& d) {
        return static_cast<int>(d.cart_traj.size()) == target_length;
      });
  if (already_aligned) {
    for (const auto& d : set.demos) {
      Demonstration copy = d;
      for (int k = 0; k < target_length; ++k) {
        copy.cart_traj[k].t = Phase(k, target_length);
        copy.joint_traj[k].t = Phase(k, target_length);
      }
      out.demos.push_back(std::move(copy));
    }
    return out;
  }
  const int medoid = MedoidIndex(set);
  const auto reference = Positions(set.demos[medoid]);
  const int ref_len = static_cast<int>(reference.size());
  for (const auto& d : set.demos) {
    const WarpingPath path = DynamicTimeWarp(reference, Positions(d));
    out.demos.push_back(ResampleDemo(WarpOntoReference(d, path, ref_len), target_length));
  }
  return out;
}

std::vector<Eigen::Vector3d> UniformResample(const std::vector<Eigen::Vector3d>& xs,
                                             int target_length) {
  Demonstration d;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    StatePoint p;
    p.t = static_cast<double>(i);
    p.x = xs[i];
    d.cart_traj.push_back(p);
    d.joint_traj.push_back(JointSample{p.t, JointVector::Zero()});
  }
  const Demonstration r = ResampleDemo(d, target_length);
  std::vector<Eigen::Vector3d> out;
  for (const auto& p : r.cart_traj) out.push_back(p.x);
  return out;
}

namespace {

json MetaToJson(const DemoMeta& meta) {
  return {{"target_id", meta.target_id},
          {"face", FaceName(meta.face)},
          {"session", meta.session},
          {"trial", meta.trial},
          {"demonstrator_id", meta.demonstrator_id}};
}

DemoMeta MetaFromJson(const json& j) {
  for (const char* key : {"target_id", "face", "session", "trial", "demonstrator_id"}) {
    RequireKey(j, key);
  }
  DemoMeta meta;
  try {
    meta.target_id = j["target_id"].get<int>();
    meta.face = ParseFace(j["face"].get<std::string>());
    meta.session = j["session"].get<int>();
    meta.trial = j["trial"].get<int>();
    meta.demonstrator_id = j["demonstrator_id"].get<std::string>();
  } catch (const json::exception& e) {
    throw Error(ErrorCode::kSchemaViolation, std::string("meta: ") + e.what());
  } catch (const Error& e) {
    throw Error(ErrorCode::kSchemaViolation, std::string("meta: ") + e.what());
  }
  return meta;
}

std::vector<double> ToStd(const JointVector& q) {
  return std::vector<double>(q.data(), q.data() + kNumJoints);
}

JointSample SampleFromJson(const json& s) {
  RequireKey(s, "t");
  RequireKey(s, "q");
  if (!s["t"].is_number()) throw Error(ErrorCode::kSchemaViolation, "sample t must be a number");
  JointSample sample;
  sample.t = s["t"].get<double>();
  ReadNumbers(s["q"], sample.q.data(), kNumJoints, "sample q");
  return sample;
}

void CheckStrictlyIncreasing(const std::vector<JointSample>& samples) {
  for (std::size_t i = 1; i < samples.size(); ++i) {
    if (!(samples[i].t > samples[i - 1].t)) {
      throw Error(ErrorCode::kNonMonotonicTime,
                  "timestamps must strictly increase (sample " + std::to_string(i) + ")");
    }
  }
}

}  // namespace

std::string DemonstrationToJsonText(const Demonstration& demo) {
  json doc;
  doc["meta"] = MetaToJson(demo.meta);
  json samples = json::array();
  for (const auto& s : demo.joint_traj) samples.push_back({{"t", s.t}, {"q", ToStd(s.q)}});
  doc["samples"] = std::move(samples);
  return doc.dump() + "\n";
}

Demonstration DemonstrationFromJsonText(const KinematicChain& chain, const std::string& text) {
  const json doc = ParseJsonText(text);
  RequireKey(doc, "meta");
  RequireKey(doc, "samples");
  if (!doc["samples"].is_array()) throw Error(ErrorCode::kSchemaViolation, "samples must be a list");
  std::vector<JointSample> samples;
  samples.reserve(doc["samples"].size());
  for (const auto& s : doc["samples"]) samples.push_back(SampleFromJson(s));
  CheckStrictlyIncreasing(samples);
  return MakeDemonstration(chain, MetaFromJson(doc["meta"]), std::move(samples));
}

void SaveDemonstration(const Demonstration& demo, const std::string& path) {
  WriteTextFile(path, DemonstrationToJsonText(demo));
}

Demonstration LoadDemonstration(const KinematicChain& chain, const std::string& path) {
  return DemonstrationFromJsonText(chain, ReadTextFile(path));
}

void SaveDemoSet(const DemoSet& set, const std::string& path) {
  json doc;
  doc["format"] = "lfdq-demoset-v1";
  doc["aligned_length"] = set.aligned_length;
  json demos = json::array();
  for (const auto& d : set.demos) {
    if (d.cart_traj.size() != d.joint_traj.size()) {
      throw Error(ErrorCode::kInvalidArgument, "channel lengths differ");
    }
    json samples = json::array();
    for (std::size_t i = 0; i < d.joint_traj.size(); ++i) {
      const StatePoint& p = d.cart_traj[i];
      samples.push_back({{"t", d.joint_traj[i].t},
                         {"q", ToStd(d.joint_traj[i].q)},
                         {"state_t", p.t},
                         {"x", {p.x.x(), p.x.y(), p.x.z()}},
                         {"quat", {p.orientation.w(), p.orientation.x(), p.orientation.y(),
                                   p.orientation.z()}}});
    }
    demos.push_back({{"meta", MetaToJson(d.meta)}, {"samples", std::move(samples)}});
  }
  doc["demos"] = std::move(demos);
  WriteTextFile(path, doc.dump() + "\n");
}

DemoSet LoadDemoSet(const std::string& path) {
  const json doc = LoadJsonFile(path);
  RequireKey(doc, "aligned_length");
  RequireKey(doc, "demos");
  DemoSet set;
  set.aligned_length = doc["aligned_length"].get<int>();
  for (const auto& d : doc["demos"]) {
    RequireKey(d, "meta");
    RequireKey(d, "samples");
    Demonstration demo;
    demo.meta = MetaFromJson(d["meta"]);
    for (const auto& s : d["samples"]) {
      demo.joint_traj.push_back(SampleFromJson(s));
      RequireKey(s, "state_t");
      RequireKey(s, "x");
      RequireKey(s, "quat");
      StatePoint p;
      p.t = s["state_t"].get<double>();
      ReadNumbers(s["x"], p.x.data(), 3, "sample x");
      double wxyz[4];
      ReadNumbers(s["quat"], wxyz, 4, "sample quat");
      p.orientation = Eigen::Quaterniond(wxyz[0], wxyz[1], wxyz[2], wxyz[3]);
      demo.cart_traj.push_back(p);
    }
    CheckStrictlyIncreasing(demo.joint_traj);
    set.demos.push_back(std::move(demo));
  }
  return set;
}

void ExportDemoSetCsv(const DemoSet& set, const std::string& directory) {
  std::filesystem::create_directories(directory);
  std::string index = "file,demonstrator_id,session,trial,face,target_id\n";
  char buf[64];
  for (std::size_t i = 0; i < set.demos.size(); ++i) {
    const Demonstration& d = set.demos[i];
    const std::string name = "demo_" + std::to_string(i) + ".csv";
    std::string csv = "t,q1,q2,q3,q4,q5,q6,q7\n";
    for (const auto& s : d.joint_traj) {
      std::snprintf(buf, sizeof(buf), "%.17g", s.t);
      csv += buf;
      for (int j = 0; j < kNumJoints; ++j) {
        std::snprintf(buf, sizeof(buf), ",%.17g", s.q(j));
        csv += buf;
      }
      csv += "\n";
    }
    WriteTextFile((std::filesystem::path(directory) / name).string(), csv);
    index += name + "," + d.meta.demonstrator_id + "," + std::to_string(d.meta.session) + "," +
             std::to_string(d.meta.trial) + "," + FaceName(d.meta.face) + "," +
             std::to_string(d.meta.target_id) + "\n";
  }
  WriteTextFile((std::filesystem::path(directory) / "index.csv").string(), index);
}

}  // namespace lfdq
