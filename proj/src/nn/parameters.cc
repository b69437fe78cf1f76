// Copyright 2026 The deepoint Authors. All Rights Reserved.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "deepoint/nn/parameters.h"

#include <cmath>

#include "deepoint/common/error.h"

namespace deepoint::nn {

Parameter& ParameterStore::Add(const std::string& name, int rows, int cols,
                               Init init, Rng& rng) {
  if (index_.count(name)) {
    throw Error(ErrorCode::kInvalidArgument, "duplicate parameter '" + name + "'");
  }
  if (rows <= 0 || cols <= 0) {
    throw Error(ErrorCode::kInvalidArgument, "empty parameter '" + name + "'");
  }
  auto p = std::make_unique<Parameter>();
  p->name = name;
  p->value = Mat::Zero(rows, cols);
  p->grad = Mat::Zero(rows, cols);
  switch (init) {
    case Init::kZeros:
      break;
    case Init::kOnes:
      p->value.setOnes();
      break;
    case Init::kXavier: {
      const double limit = std::sqrt(6.0 / (rows + cols));
      for (Eigen::Index i = 0; i < p->value.size(); ++i) {
        p->value.data()[i] = Uniform(rng, -limit, limit);
      }
      break;
    }
    case Init::kNormal:
      for (Eigen::Index i = 0; i < p->value.size(); ++i) {
        p->value.data()[i] = Normal(rng, 0.0, 0.02);
      }
      break;
  }
  Parameter& ref = *p;
  index_[name] = p.get();
  params_.push_back(std::move(p));
  return ref;
}

Parameter& ParameterStore::Get(const std::string& name) {
  auto it = index_.find(name);
  if (it == index_.end()) {
    throw Error(ErrorCode::kInvalidArgument, "unknown parameter '" + name + "'");
  }
  return *it->second;
}

const Parameter& ParameterStore::Get(const std::string& name) const {
  return const_cast<ParameterStore*>(this)->Get(name);
}

std::vector<Parameter*> ParameterStore::All() {
  std::vector<Parameter*> out;
  for (auto& p : params_) out.push_back(p.get());
  return out;
}

std::vector<const Parameter*> ParameterStore::All() const {
  std::vector<const Parameter*> out;
  for (const auto& p : params_) out.push_back(p.get());
  return out;
}

int64_t ParameterStore::Count() const {
  int64_t n = 0;
  for (const auto& p : params_) n += p->value.size();
  return n;
}

void ParameterStore::ZeroGrad() {
  for (auto& p : params_) p->grad.setZero();
}

Json ParameterStore::ToJson() const {
  Json out = Json::object();
  for (const auto& p : params_) {
    Json data = Json::array();
    for (Eigen::Index i = 0; i < p->value.size(); ++i) {
      data.push_back(p->value.data()[i]);
    }
    out[p->name] = {{"rows", p->value.rows()},
                    {"cols", p->value.cols()},
                    {"data", std::move(data)}};
  }
  return out;
}

void ParameterStore::LoadJson(const Json& j) {
  if (!j.is_object()) {
    throw Error(ErrorCode::kSchemaError, "parameter table must be an object");
  }
  if (j.size() != params_.size()) {
    throw Error(ErrorCode::kSchemaError,
                "parameter table has " + std::to_string(j.size()) +
                    " entries, model expects " + std::to_string(params_.size()));
  }
  for (auto& p : params_) {
    if (!j.contains(p->name)) {
      throw Error(ErrorCode::kSchemaError, "missing parameter '" + p->name + "'");
    }
    const Json& e = j[p->name];
    const int rows = GetInt(e, "rows");
    const int cols = GetInt(e, "cols");
    const Json& data = Field(e, "data");
    if (rows != p->value.rows() || cols != p->value.cols() || !data.is_array() ||
        data.size() != static_cast<std::size_t>(rows) * cols) {
      throw Error(ErrorCode::kSchemaError, "shape mismatch for '" + p->name + "'");
    }
    for (std::size_t i = 0; i < data.size(); ++i) {
      if (!data[i].is_number()) {
        throw Error(ErrorCode::kSchemaError, "non-numeric value in '" + p->name + "'");
      }
      p->value.data()[i] = data[i].get<double>();
    }
  }
}

Adam::Adam(ParameterStore& store, AdamConfig config)
    : store_(store), config_(config) {
  if (!(config_.learning_rate > 0.0)) {
    throw Error(ErrorCode::kInvalidArgument, "learning rate must be positive");
  }
  for (const Parameter* p : store_.All()) {
    m_.push_back(Mat::Zero(p->value.rows(), p->value.cols()));
    v_.push_back(Mat::Zero(p->value.rows(), p->value.cols()));
  }
}

double Adam::Step() {
  auto params = store_.All();
  double sq = 0.0;
  for (const Parameter* p : params) sq += p->grad.squaredNorm();
  const double norm = std::sqrt(sq);
  const double scale = config_.clip_norm > 0.0 && norm > config_.clip_norm
                           ? config_.clip_norm / norm
                           : 1.0;
  ++t_;
  const double c1 = 1.0 - std::pow(config_.beta1, static_cast<double>(t_));
  const double c2 = 1.0 - std::pow(config_.beta2, static_cast<double>(t_));
  const double step = config_.learning_rate / c1;
  for (std::size_t i = 0; i < params.size(); ++i) {
    Parameter& p = *params[i];
    auto g = p.grad.array() * scale;
    m_[i].array() = config_.beta1 * m_[i].array() + (1.0 - config_.beta1) * g;
    v_[i].array() = config_.beta2 * v_[i].array() + (1.0 - config_.beta2) * g * g;
    p.value.array() -=
        step * m_[i].array() / ((v_[i].array() / c2).sqrt() + config_.eps);
  }
  return norm;
}

}  // namespace deepoint::nn
