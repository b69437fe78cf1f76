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

#include "deepoint/eval/ablation.h"

#include <chrono>
#include <cstdio>
#include <map>
#include <sstream>

#include "deepoint/common/error.h"

namespace deepoint::eval {

namespace {

const std::map<int, ReferenceCell>& WindowReference() {
  static const std::map<int, ReferenceCell> kRef = {{1, {17.08, 0.519, 0.801}},
                                                    {5, {14.90, 0.585, 0.828}},
                                                    {15, {14.05, 0.625, 0.838}},
                                                    {30, {13.58, 0.637, 0.833}}};
  return kRef;
}

constexpr ReferenceCell kFullModel{14.05, 0.625, 0.838};
constexpr ReferenceCell kWithoutTe{14.36, 0.610, 0.796};
constexpr ReferenceCell kHandHead{15.12, 0.613, 0.813};
constexpr ReferenceCell kHand{17.32, 0.601, 0.797};

std::string PartsLabel(const std::string& parts) {
  const auto set = model::JointsForParts(parts);
  if (set == model::JointsForParts("hand,head")) return "DP-Hand&Head";
  if (set == model::JointsForParts("hand")) return "DP-Hand";
  return "DP[" + parts + "]";
}

std::optional<ReferenceCell> PartsReference(const std::string& parts) {
  const auto set = model::JointsForParts(parts);
  if (set == model::JointsForParts("hand,head")) return kHandHead;
  if (set == model::JointsForParts("hand")) return kHand;
  return std::nullopt;
}

std::string Pr(double p, double r) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3f/%.3f", p, r);
  return buf;
}

std::string Key(const AblationCell& c) {
  return c.model.ToJson().dump() + c.train.ToJson().dump();
}

}  // namespace

AblationGrid AblationGrid::Standard() {
  AblationGrid g;
  g.windows = {1, 5, 15, 30};
  g.no_temporal_encoder = true;
  g.body_parts = {"hand,head", "hand"};
  return g;
}

AblationGrid AblationGrid::FromJson(const Json& j) {
  AblationGrid g;
  try {
    g.windows = j.value("windows", std::vector<int>{});
    g.no_temporal_encoder = j.value("no_temporal_encoder", false);
    g.body_parts = j.value("body_parts", std::vector<std::string>{});
    for (const auto& v : j.value("variants", std::vector<std::string>{})) {
      g.variants.push_back(tokenizer::VariantFromName(v));
    }
    g.lambdas = j.value("lambdas", std::vector<double>{});
  } catch (const Json::exception& e) {
    throw Error(ErrorCode::kSchemaError, std::string("ablation grid: ") + e.what());
  }
  for (int n : g.windows) {
    if (n < 1) throw Error(ErrorCode::kInvalidArgument, "window N must be >= 1");
  }
  for (const auto& p : g.body_parts) model::JointsForParts(p);
  return g;
}

std::vector<AblationCell> ExpandGrid(const AblationGrid& grid, const model::ModelConfig& base,
                                     const train::TrainConfig& base_train) {
  std::vector<AblationCell> cells;
  const AblationCell dp{"", "DP", base, base_train, std::nullopt};
  for (int n : grid.windows) {
    AblationCell c = dp;
    c.table = "window";
    c.label = "N=" + std::to_string(n);
    c.model.window = n;
    const auto it = WindowReference().find(n);
    if (it != WindowReference().end()) c.reference = it->second;
    cells.push_back(c);
  }
  if (grid.no_temporal_encoder) {
    AblationCell a = dp, b = dp;
    a.table = b.table = "temporal_encoder";
    a.reference = kFullModel;
    b.label = "DP w/o TE";
    b.model.temporal_encoder = false;
    b.reference = kWithoutTe;
    cells.push_back(a);
    cells.push_back(b);
  }
  if (!grid.body_parts.empty()) {
    AblationCell a = dp;
    a.table = "body_parts";
    a.reference = kFullModel;
    cells.push_back(a);
    for (const auto& parts : grid.body_parts) {
      AblationCell c = dp;
      c.table = "body_parts";
      c.label = PartsLabel(parts);
      c.model.body_parts = parts;
      c.reference = PartsReference(parts);
      cells.push_back(c);
    }
  }
  for (auto v : grid.variants) {
    AblationCell c = dp;
    c.table = "variant";
    c.label = tokenizer::VariantName(v);
    c.model.variant = v;
    cells.push_back(c);
  }
  for (double l : grid.lambdas) {
    AblationCell c = dp;
    c.table = "lambda";
    char buf[32];
    std::snprintf(buf, sizeof buf, "lambda=%g", l);
    c.label = buf;
    c.train.loss_weight = l;
    cells.push_back(c);
  }
  for (auto& c : cells) c.model.Validate();
  return cells;
}

std::vector<AblationRow> RunAblation(const train::PreparedData& data,
                                     const std::vector<AblationCell>& cells,
                                     const AblationOptions& options) {
  std::vector<AblationRow> rows;
  std::map<std::string, std::size_t> done;
  for (std::size_t i = 0; i < cells.size(); ++i) {
    const AblationCell& cell = cells[i];
    const auto hit = done.find(Key(cell));
    if (hit != done.end()) {
      AblationRow copy = rows[hit->second];
      copy.cell = cell;
      rows.push_back(copy);
      if (options.on_row) options.on_row(rows.back());
      continue;
    }
    AblationRow row;
    row.cell = cell;
    const auto t0 = std::chrono::steady_clock::now();
    try {
      train::TrainOutputs out;
      if (!options.out_dir.empty()) {
        const std::string stem = "cell" + std::to_string(i);
        out.log_path = options.out_dir / (stem + "_log.jsonl");
        out.checkpoint_path = options.out_dir / (stem + "_best.json");
      }
      model::ModelConfig mc = cell.model;
      mc.features = data.options().features;
      row.parameters = model::CountParameters(mc);
      const auto result = train::Train(data, mc, cell.train, out);
      row.best_epoch = result.best_epoch;
      row.report = Evaluate(*result.best, data, options.eval);
      row.ok = true;
    } catch (const Error& e) {
      row.error = e.what();
    }
    row.seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    done[Key(cell)] = rows.size();
    rows.push_back(row);
    if (options.on_row) options.on_row(rows.back());
  }
  return rows;
}

std::string FormatAblationTables(const std::vector<AblationRow>& rows) {
  static const std::map<std::string, std::string> kHeader = {
      {"window", "Temporal window"}, {"temporal_encoder", "Model"},
      {"body_parts", "Model"},       {"variant", "Variant"},
      {"lambda", "Loss weight"}};
  std::vector<std::string> order;
  for (const auto& r : rows) {
    if (std::find(order.begin(), order.end(), r.cell.table) == order.end()) {
      order.push_back(r.cell.table);
    }
  }
  std::ostringstream os;
  for (const auto& table : order) {
    const auto h = kHeader.find(table);
    os << "| " << (h != kHeader.end() ? h->second : table)
       << " | Angular error | Prec./Rec. | Ref. angular error | Ref. Prec./Rec. |\n"
       << "|---|---|---|---|---|\n";
    for (const auto& r : rows) {
      if (r.cell.table != table) continue;
      os << "| " << r.cell.label << " | ";
      if (r.ok) {
        os << FormatDeg(r.report.angular_error) << "° | "
           << Pr(r.report.prf.precision, r.report.prf.recall) << " | ";
      } else {
        os << "failed | failed | ";
      }
      if (r.cell.reference) {
        os << FormatDeg(r.cell.reference->angular_deg) << "° | "
           << Pr(r.cell.reference->precision, r.cell.reference->recall) << " |\n";
      } else {
        os << "- | - |\n";
      }
    }
    os << "\n";
  }
  return os.str();
}

Json AblationToJson(const std::vector<AblationRow>& rows) {
  Json out = Json::array();
  for (const auto& r : rows) {
    Json j = {{"table", r.cell.table}, {"label", r.cell.label}, {"ok", r.ok},
              {"model_config", r.cell.model.ToJson()},
              {"train_config", r.cell.train.ToJson()},
              {"parameters", r.parameters},
              {"best_epoch", r.best_epoch}, {"seconds", r.seconds}};
    if (r.ok) {
      Json m = r.report.ToJson();
      m.erase("error_map");
      j["metrics"] = m;
    } else {
      j["error"] = r.error;
    }
    if (r.cell.reference) {
      j["reference"] = {{"angular_error", r.cell.reference->angular_deg},
                        {"precision", r.cell.reference->precision},
                        {"recall", r.cell.reference->recall}};
    }
    out.push_back(std::move(j));
  }
  return out;
}

}  // namespace deepoint::eval
