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

#ifndef DEEPOINT_NN_PARAMETERS_H_
#define DEEPOINT_NN_PARAMETERS_H_

#include <cstdint>
#include <map>
#include <memory>
#include <string>
#include <vector>

#include <Eigen/Core>

#include "deepoint/common/json_io.h"
#include "deepoint/common/random.h"

namespace deepoint::nn {

using Mat = Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

struct Parameter {
  std::string name;
  Mat value;
  Mat grad;
};

enum class Init {
  kZeros,
  kOnes,
  kXavier,  // uniform, limit sqrt(6 / (rows + cols))
  kNormal,  // N(0, 0.02^2)
};

// Owns named parameters with stable addresses, in registration order.
class ParameterStore {
 public:
  Parameter& Add(const std::string& name, int rows, int cols, Init init,
                 Rng& rng);
  Parameter& Get(const std::string& name);
  const Parameter& Get(const std::string& name) const;
  bool Contains(const std::string& name) const { return index_.count(name) > 0; }

  std::vector<Parameter*> All();
  std::vector<const Parameter*> All() const;
  int64_t Count() const;
  void ZeroGrad();

  // {"name": {"rows": r, "cols": c, "data": [...]}, ...}
  Json ToJson() const;
  // Copies values into already-registered parameters. Throws kSchemaError on
  // missing, extra, or mis-shaped entries.
  void LoadJson(const Json& j);

 private:
  std::vector<std::unique_ptr<Parameter>> params_;
  std::map<std::string, Parameter*> index_;
};

struct AdamConfig {
  double learning_rate = 1e-4;
  double beta1 = 0.9;
  double beta2 = 0.999;
  double eps = 1e-8;
  double clip_norm = 0.0;  // global gradient-norm clip; 0 disables
};

class Adam {
 public:
  Adam(ParameterStore& store, AdamConfig config);
  // Applies one update from the accumulated gradients; returns the global
  // gradient norm before clipping.
  double Step();
  int64_t steps() const { return t_; }

 private:
  ParameterStore& store_;
  AdamConfig config_;
  std::vector<Mat> m_, v_;
  int64_t t_ = 0;
};

}  // namespace deepoint::nn

#endif  // DEEPOINT_NN_PARAMETERS_H_
