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

#include "lfdq/tpgmm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <numeric>
#include <random>
#include <set>

#include <Eigen/Cholesky>

#include "lfdq/error.hpp"
#include "lfdq/jsonio.hpp"

namespace lfdq {

using nlohmann::json;

namespace {

constexpr double kLog2Pi = 1.8378770664093453;

bool IsOrthonormal(const Eigen::MatrixXd& m) {
  return (m.transpose() * m - Eigen::MatrixXd::Identity(m.cols(), m.cols())).cwiseAbs().maxCoeff() <=
         1e-10;
}

double LogSumExp(const Eigen::VectorXd& v) {
  const double m = v.maxCoeff();
  if (!std::isfinite(m)) return m;
  return m + std::log((v.array() - m).exp().sum());
}

// Cached Cholesky factor of one Gaussian for repeated density evaluation.
struct GaussianCache {
  StateVector mean;
  Eigen::LLT<StateMatrix> llt;
  double log_norm = 0.0;  // -0.5 (D log 2 pi + log det)

  bool Prepare(const StateVector& mu, const StateMatrix& sigma) {
    mean = mu;
    llt.compute(sigma);
    if (llt.info() != Eigen::Success) return false;
    const double log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
    log_norm = -0.5 * (kStateDim * kLog2Pi + log_det);
    return std::isfinite(log_norm);
  }

  double LogDensity(const StateVector& x) const {
    const StateVector y = llt.matrixL().solve(x - mean);
    return log_norm - 0.5 * y.squaredNorm();
  }
};

std::size_t CountDistinct(const std::vector<std::vector<StateVector>>& frame_data,
                          std::size_t limit) {
  std::set<std::vector<double>> seen;
  const std::size_t n = frame_data.front().size();
  for (std::size_t i = 0; i < n && seen.size() < limit; ++i) {
    std::vector<double> key;
    key.reserve(frame_data.size() * kStateDim);
    for (const auto& frame : frame_data) key.insert(key.end(), frame[i].data(), frame[i].data() + kStateDim);
    seen.insert(std::move(key));
  }
  return seen.size();
}

// M-step given responsibilities gamma (N x K).
void MaximizationStep(const std::vector<std::vector<StateVector>>& frame_data,
                      const Eigen::MatrixXd& gamma, double reg, TpgmmModel& model) {
  const int num_frames = static_cast<int>(frame_data.size());
  const int num_points = static_cast<int>(gamma.rows());
  const int k_count = static_cast<int>(gamma.cols());
  for (int k = 0; k < k_count; ++k) {
    const double nk = std::max(gamma.col(k).sum(), std::numeric_limits<double>::min());
    model.priors[k] = nk / num_points;
    for (int j = 0; j < num_frames; ++j) {
      StateVector mu = StateVector::Zero();
      for (int n = 0; n < num_points; ++n) mu += gamma(n, k) * frame_data[j][n];
      mu /= nk;
      StateMatrix sigma = StateMatrix::Zero();
      for (int n = 0; n < num_points; ++n) {
        const StateVector d = frame_data[j][n] - mu;
        sigma.noalias() += gamma(n, k) * d * d.transpose();
      }
      sigma /= nk;
      sigma = 0.5 * (sigma + sigma.transpose()).eval();
      sigma.diagonal().array() += reg;
      model.means[j][k] = mu;
      model.covariances[j][k] = sigma;
    }
  }
  const double total = std::accumulate(model.priors.begin(), model.priors.end(), 0.0);
  for (double& p : model.priors) p /= total;
}

// E-step; fills gamma and returns the total log-likelihood.
double ExpectationStep(const std::vector<std::vector<StateVector>>& frame_data,
                       const TpgmmModel& model, Eigen::MatrixXd& gamma) {
  const int num_frames = model.num_frames;
  const int k_count = model.num_components;
  const int num_points = static_cast<int>(frame_data.front().size());
  std::vector<GaussianCache> caches(static_cast<std::size_t>(num_frames) * k_count);
  for (int j = 0; j < num_frames; ++j) {
    for (int k = 0; k < k_count; ++k) {
      if (!caches[j * k_count + k].Prepare(model.means[j][k], model.covariances[j][k])) {
        throw Error(ErrorCode::kSingularCovariance, "covariance lost positive definiteness");
      }
    }
  }
  Eigen::VectorXd log_prior(k_count);
  for (int k = 0; k < k_count; ++k) {
    log_prior(k) = model.priors[k] > 0.0 ? std::log(model.priors[k])
                                         : -std::numeric_limits<double>::infinity();
  }
  double total = 0.0;
  Eigen::VectorXd row(k_count);
  for (int n = 0; n < num_points; ++n) {
    for (int k = 0; k < k_count; ++k) {
      double lp = log_prior(k);
      for (int j = 0; j < num_frames; ++j) lp += caches[j * k_count + k].LogDensity(frame_data[j][n]);
      row(k) = lp;
    }
    const double lse = LogSumExp(row);
    total += lse;
    gamma.row(n) = (row.array() - lse).exp().transpose();
  }
  return total;
}

}  // namespace

TaskFrame TaskFrame::FromPose(const Pose& pose) {
  TaskFrame f;
  f.A.setZero();
  f.A(0, 0) = 1.0;
  f.A.block<3, 3>(1, 1) = pose.orientation.normalized().toRotationMatrix();
  f.A.block<4, 4>(4, 4) = QuatLeftMatrix(pose.orientation.normalized());
  f.b.setZero();
  f.b.segment<3>(1) = pose.position;
  return f;
}

void TaskFrame::Validate() const {
  if (A(0, 0) != 1.0 || b(0) != 0.0 || A.row(0).tail<7>().cwiseAbs().maxCoeff() != 0.0 ||
      A.col(0).tail<7>().cwiseAbs().maxCoeff() != 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "task frame time block must be identity");
  }
  if (A.block<3, 4>(1, 4).cwiseAbs().maxCoeff() != 0.0 ||
      A.block<4, 3>(4, 1).cwiseAbs().maxCoeff() != 0.0) {
    throw Error(ErrorCode::kInvalidArgument, "task frame must be block diagonal");
  }
  if (!IsOrthonormal(A.block<3, 3>(1, 1)) || !IsOrthonormal(A.block<4, 4>(4, 4))) {
    throw Error(ErrorCode::kInvalidArgument, "task frame rotation blocks must be orthonormal");
  }
}

StateVector ProjectToFrame(const StateVector& xi, const TaskFrame& frame) {
  return frame.A.transpose() * (xi - frame.b);
}

StateVector UnprojectFromFrame(const StateVector& local, const TaskFrame& frame) {
  return frame.A * local + frame.b;
}

double LogGaussianDensity(const Eigen::VectorXd& x, const Eigen::VectorXd& mean,
                          const Eigen::MatrixXd& covariance) {
  Eigen::LLT<Eigen::MatrixXd> llt(covariance);
  if (llt.info() != Eigen::Success) {
    throw Error(ErrorCode::kSingularCovariance, "covariance is not positive definite");
  }
  const Eigen::VectorXd y = llt.matrixL().solve(x - mean);
  const double log_det = 2.0 * llt.matrixLLT().diagonal().array().log().sum();
  return -0.5 * (static_cast<double>(x.size()) * kLog2Pi + log_det + y.squaredNorm());
}

EmResult FitEm(const std::vector<std::vector<StateVector>>& frame_data, const EmOptions& options) {
  const int k_count = options.num_components;
  if (k_count < 1) throw Error(ErrorCode::kInvalidArgument, "K must be >= 1");
  if (!(options.regularization > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "regularization must be positive");
  }
  if (frame_data.empty()) throw Error(ErrorCode::kInvalidArgument, "no frames");
  const std::size_t num_points = frame_data.front().size();
  for (const auto& f : frame_data) {
    if (f.size() != num_points) {
      throw Error(ErrorCode::kLengthMismatch, "frames hold different point counts");
    }
  }
  if (num_points < static_cast<std::size_t>(k_count) ||
      CountDistinct(frame_data, k_count) < static_cast<std::size_t>(k_count)) {
    throw Error(ErrorCode::kDegenerateData, "fewer distinct points than components");
  }
  const int num_frames = static_cast<int>(frame_data.size());
  const int n = static_cast<int>(num_points);

  EmResult result;
  TpgmmModel& model = result.model;
  model.num_components = k_count;
  model.num_frames = num_frames;
  model.regularization = options.regularization;
  model.priors.assign(k_count, 1.0 / k_count);
  model.means.assign(num_frames, std::vector<StateVector>(k_count, StateVector::Zero()));
  model.covariances.assign(num_frames, std::vector<StateMatrix>(k_count, StateMatrix::Identity()));

  Eigen::MatrixXd gamma = Eigen::MatrixXd::Zero(n, k_count);
  if (options.init == EmInit::kPhaseSlicing) {
    // Equal-width slices of the time axis; equal-count slices if any is empty.
    std::vector<double> t(n);
    for (int i = 0; i < n; ++i) t[i] = frame_data[0][i](0);
    const auto [lo_it, hi_it] = std::minmax_element(t.begin(), t.end());
    const double lo = *lo_it, hi = *hi_it;
    std::vector<int> counts(k_count, 0);
    std::vector<int> slice(n, 0);
    for (int i = 0; i < n; ++i) {
      int s = hi > lo ? static_cast<int>((t[i] - lo) / (hi - lo) * k_count) : 0;
      slice[i] = std::clamp(s, 0, k_count - 1);
      ++counts[slice[i]];
    }
    if (std::any_of(counts.begin(), counts.end(), [](int c) { return c == 0; })) {
      std::vector<int> order(n);
      std::iota(order.begin(), order.end(), 0);
      std::stable_sort(order.begin(), order.end(), [&](int a, int b) { return t[a] < t[b]; });
      for (int r = 0; r < n; ++r) {
        slice[order[r]] = std::min(k_count - 1, static_cast<int>(static_cast<long>(r) * k_count / n));
      }
    }
    for (int i = 0; i < n; ++i) gamma(i, slice[i]) = 1.0;
  } else {
    std::mt19937_64 rng(options.seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    for (int i = 0; i < n; ++i) {
      for (int k = 0; k < k_count; ++k) gamma(i, k) = u(rng) + 1e-3;
      gamma.row(i) /= gamma.row(i).sum();
    }
  }
  MaximizationStep(frame_data, gamma, options.regularization, model);

  double ll = ExpectationStep(frame_data, model, gamma);
  result.log_likelihood.push_back(ll);
  for (int it = 0; it < options.max_iterations; ++it) {
    MaximizationStep(frame_data, gamma, options.regularization, model);
    const double next = ExpectationStep(frame_data, model, gamma);
    result.log_likelihood.push_back(next);
    result.iterations = it + 1;
    const double gain = (next - ll) / n;
    ll = next;
    if (gain < options.tolerance) break;
  }
  return result;
}

GlobalGmm CombineFrames(const TpgmmModel& model, const std::vector<TaskFrame>& frames) {
  if (static_cast<int>(frames.size()) != model.num_frames) {
    throw Error(ErrorCode::kLengthMismatch, "frame count differs from the model");
  }
  for (const auto& f : frames) f.Validate();
  GlobalGmm g;
  g.priors = model.priors;
  for (int k = 0; k < model.num_components; ++k) {
    StateMatrix precision_sum = StateMatrix::Zero();
    StateVector weighted = StateVector::Zero();
    for (int j = 0; j < model.num_frames; ++j) {
      const StateVector mu = frames[j].A * model.means[j][k] + frames[j].b;
      StateMatrix sigma = frames[j].A * model.covariances[j][k] * frames[j].A.transpose();
      sigma = 0.5 * (sigma + sigma.transpose()).eval();
      Eigen::LLT<StateMatrix> llt(sigma);
      if (llt.info() != Eigen::Success) {
        throw Error(ErrorCode::kSingularCovariance, "frame covariance is not positive definite");
      }
      const StateMatrix precision = llt.solve(StateMatrix::Identity());
      precision_sum += precision;
      weighted += precision * mu;
    }
    precision_sum = 0.5 * (precision_sum + precision_sum.transpose()).eval();
    Eigen::LLT<StateMatrix> llt(precision_sum);
    if (llt.info() != Eigen::Success) {
      throw Error(ErrorCode::kSingularCovariance, "precision sum is not invertible");
    }
    StateMatrix sigma = llt.solve(StateMatrix::Identity());
    sigma = 0.5 * (sigma + sigma.transpose()).eval();
    g.means.push_back(sigma * weighted);
    g.covariances.push_back(sigma);
  }
  return g;
}

StatePoint GmrQuery(const GlobalGmm& gmm, double phase) {
  const std::size_t k_count = gmm.priors.size();
  Eigen::VectorXd log_h(k_count);
  for (std::size_t k = 0; k < k_count; ++k) {
    const double var = gmm.covariances[k](0, 0);
    const double d = phase - gmm.means[k](0);
    log_h(k) = (gmm.priors[k] > 0.0 ? std::log(gmm.priors[k])
                                    : -std::numeric_limits<double>::infinity()) -
               0.5 * (kLog2Pi + std::log(var) + d * d / var);
  }
  const Eigen::VectorXd h = (log_h.array() - LogSumExp(log_h)).exp();
  Eigen::Matrix<double, 7, 1> out = Eigen::Matrix<double, 7, 1>::Zero();
  for (std::size_t k = 0; k < k_count; ++k) {
    const StateMatrix& s = gmm.covariances[k];
    const Eigen::Matrix<double, 7, 1> cond =
        gmm.means[k].tail<7>() + s.block<7, 1>(1, 0) / s(0, 0) * (phase - gmm.means[k](0));
    out += h(k) * cond;
  }
  StatePoint p;
  p.t = phase;
  p.x = out.head<3>();
  Eigen::Vector4d q = out.tail<4>();
  const double norm = q.norm();
  p.orientation = norm > 0.0 ? WxyzToQuat(q / norm) : Eigen::Quaterniond::Identity();
  return p;
}

std::vector<StatePoint> GenerateTrajectory(const TpgmmModel& model,
                                           const std::vector<TaskFrame>& frames, int samples) {
  if (samples < 2) throw Error(ErrorCode::kInvalidArgument, "need at least two samples");
  const GlobalGmm g = CombineFrames(model, frames);
  std::vector<StatePoint> out;
  out.reserve(samples);
  for (int i = 0; i < samples; ++i) {
    StatePoint p = GmrQuery(g, static_cast<double>(i) / (samples - 1));
    if (!out.empty() && out.back().orientation.dot(p.orientation) < 0.0) {
      p.orientation.coeffs() = -p.orientation.coeffs();
    }
    out.push_back(p);
  }
  return out;
}

namespace {

json VectorJson(const StateVector& v) { return std::vector<double>(v.data(), v.data() + kStateDim); }

json MatrixJson(const StateMatrix& m) {
  json rows = json::array();
  for (int r = 0; r < kStateDim; ++r) {
    std::vector<double> row(kStateDim);
    for (int c = 0; c < kStateDim; ++c) row[c] = m(r, c);
    rows.push_back(row);
  }
  return rows;
}

}  // namespace

std::string ModelToJsonText(const TpgmmModel& model) {
  json doc;
  doc["version"] = "tpgmm-v1";
  doc["K"] = model.num_components;
  doc["J"] = model.num_frames;
  doc["reg"] = model.regularization;
  doc["priors"] = model.priors;
  doc["frames"] = model.frame_roles;
  json mu = json::array();
  json sigma = json::array();
  for (int j = 0; j < model.num_frames; ++j) {
    json mj = json::array();
    json sj = json::array();
    for (int k = 0; k < model.num_components; ++k) {
      mj.push_back(VectorJson(model.means[j][k]));
      sj.push_back(MatrixJson(model.covariances[j][k]));
    }
    mu.push_back(mj);
    sigma.push_back(sj);
  }
  doc["mu"] = mu;
  doc["sigma"] = sigma;
  return doc.dump(1) + "\n";
}

TpgmmModel ModelFromJsonText(const std::string& text) {
  const json doc = ParseJsonText(text);
  for (const char* key : {"version", "K", "J", "priors", "frames", "mu", "sigma"}) RequireKey(doc, key);
  if (doc["version"] != "tpgmm-v1") throw Error(ErrorCode::kSchemaViolation, "unknown model version");
  TpgmmModel model;
  model.num_components = doc["K"].get<int>();
  model.num_frames = doc["J"].get<int>();
  model.regularization = doc.value("reg", 0.0);
  model.priors = doc["priors"].get<std::vector<double>>();
  model.frame_roles = doc["frames"].get<std::vector<std::string>>();
  const int k_count = model.num_components;
  const int j_count = model.num_frames;
  if (static_cast<int>(model.priors.size()) != k_count || doc["mu"].size() != static_cast<std::size_t>(j_count) ||
      doc["sigma"].size() != static_cast<std::size_t>(j_count)) {
    throw Error(ErrorCode::kSchemaViolation, "model arrays do not match K and J");
  }
  model.means.assign(j_count, std::vector<StateVector>(k_count));
  model.covariances.assign(j_count, std::vector<StateMatrix>(k_count));
  for (int j = 0; j < j_count; ++j) {
    if (doc["mu"][j].size() != static_cast<std::size_t>(k_count) ||
        doc["sigma"][j].size() != static_cast<std::size_t>(k_count)) {
      throw Error(ErrorCode::kSchemaViolation, "model arrays do not match K");
    }
    for (int k = 0; k < k_count; ++k) {
      ReadNumbers(doc["mu"][j][k], model.means[j][k].data(), kStateDim, "mu");
      const json& rows = doc["sigma"][j][k];
      if (!rows.is_array() || rows.size() != kStateDim) {
        throw Error(ErrorCode::kSchemaViolation, "sigma: expected 8 rows");
      }
      for (int r = 0; r < kStateDim; ++r) {
        double row[kStateDim];
        ReadNumbers(rows[r], row, kStateDim, "sigma row");
        for (int c = 0; c < kStateDim; ++c) model.covariances[j][k](r, c) = row[c];
      }
    }
  }
  return model;
}

void SaveModel(const TpgmmModel& model, const std::string& path) {
  WriteTextFile(path, ModelToJsonText(model));
}

TpgmmModel LoadModel(const std::string& path) { return ModelFromJsonText(ReadTextFile(path)); }

}  // namespace lfdq
