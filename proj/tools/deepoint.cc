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

// deepoint: command-line front end for the simulate -> annotate -> train ->
// evaluate pipeline and its ablations.

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "deepoint/anno/annotate.h"
#include "deepoint/anno/dataset.h"
#include "deepoint/common/error.h"
#include "deepoint/common/parallel.h"
#include "deepoint/eval/ablation.h"
#include "deepoint/eval/evaluate.h"
#include "deepoint/harness/checks.h"
#include "deepoint/harness/harness.h"
#include "deepoint/sim/benchmark.h"
#include "deepoint/sim/session_io.h"
#include "deepoint/sim/splits.h"
#include "deepoint/train/trainer.h"
#include "oracle_values.h"

namespace fs = std::filesystem;

namespace deepoint {
namespace {

struct Common {
  uint64_t seed = 1;
  int workers = 1;
  bool deterministic = false;
  bool seed_given = false;

  int Workers() const { return deterministic ? 1 : workers; }
};

void AddCommon(CLI::App* app, Common& c) {
  app->add_option("--seed", c.seed, "base seed")->capture_default_str();
  app->add_option("--workers", c.workers, "worker threads")
      ->check(CLI::PositiveNumber)
      ->capture_default_str();
  app->add_flag("--deterministic", c.deterministic,
                "single worker; outputs reproduce bit-for-bit");
}

harness::Manifest StartManifest(const std::string& command, const Common& c, int argc,
                                char** argv) {
  harness::Manifest m;
  m.command = command;
  m.argv.assign(argv, argv + argc);
  m.seed = c.seed;
  m.workers = c.Workers();
  m.deterministic = c.deterministic;
  return m;
}

void WriteText(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  out << text;
  if (!out) throw Error(ErrorCode::kIoError, "cannot write " + path.string());
}

// Split assignment from splits.json, or recomputed for --split.
anno::Dataset LoadWithSplit(const fs::path& root, const std::string& split) {
  anno::Dataset ds = anno::LoadDataset(root);
  if (!split.empty()) {
    std::vector<sim::SessionBundle> bundles;
    for (const auto& s : ds.sessions) bundles.push_back(s.session);
    ds.splits = sim::MakeSplits(sim::Describe(bundles), sim::SplitModeFromName(split));
  }
  return ds;
}

train::SplitPart PartFromName(const std::string& name) {
  if (name == "train") return train::SplitPart::kTrain;
  if (name == "val") return train::SplitPart::kVal;
  if (name == "test") return train::SplitPart::kTest;
  throw Error(ErrorCode::kInvalidArgument, "unknown split part '" + name + "'");
}

// ---------------------------------------------------------------------------

struct SimulateArgs {
  int rooms = 2, actors = 8, cameras = 6, markers = 40;
  double duration = 120.0, pixel_sigma = 2.0;
  bool noiseless = false;
  std::string split = "T";
  fs::path out;
};

int Simulate(const SimulateArgs& a, const Common& c, harness::Manifest m) {
  sim::BenchmarkOptions o;
  o.num_rooms = a.rooms;
  o.num_actors = a.actors;
  o.cameras_per_room = a.cameras;
  o.markers_per_room = a.markers;
  o.duration_s = a.duration;
  o.noise.pixel_sigma = a.pixel_sigma;
  if (a.noiseless) o.noise = sim::NoiseModel::Noiseless();
  o.workers = c.Workers();
  const auto sessions = sim::MakeBenchmark(o, c.seed);
  for (const auto& s : sessions) sim::WriteSession(a.out, s);
  const auto splits = sim::MakeSplits(sim::Describe(sessions), sim::SplitModeFromName(a.split));
  WriteJsonFile(a.out / "splits.json", sim::SplitsToJson(splits));
  m.config = {{"rooms", a.rooms},       {"actors", a.actors},   {"cameras", a.cameras},
              {"markers", a.markers},   {"duration_s", a.duration},
              {"pixel_sigma", a.pixel_sigma}, {"noiseless", a.noiseless}, {"split", a.split}};
  for (const auto& s : sessions) m.outputs.push_back(sim::SessionDir(a.out, s.truth.session_id));
  m.outputs.push_back((a.out / "splits.json").string());
  m.Write(a.out / "manifest_simulate.json");
  std::cout << "wrote " << sessions.size() << " sessions to " << a.out.string() << "\n";
  return 0;
}

int Annotate(const fs::path& data, double min_conf, const Common& c, harness::Manifest m) {
  const auto ids = sim::ListSessions(data);
  if (ids.empty()) throw Error(ErrorCode::kMissingFile, "no session_* directories in " + data.string());
  std::vector<anno::AnnotatedSession> sessions(ids.size());
  ParallelFor(ids.size(), c.Workers(), [&](std::size_t i) {
    sessions[i].session = sim::ReadSession(sim::SessionDir(data, ids[i]));
    sessions[i].annotation = anno::AnnotateFrames(sessions[i].session, {min_conf});
  });
  const auto splits = sim::SplitsFromJson(ReadJsonFile(data / "splits.json"));
  anno::ExportDataset(data, sessions, splits);
  long pointing = 0, excluded = 0, instances = 0;
  for (const auto& s : sessions) {
    for (const auto& f : s.annotation.frames) pointing += f.is_pointing;
    excluded += s.annotation.excluded_frames;
    instances += static_cast<long>(s.annotation.instances.size());
    for (const auto& w : s.annotation.warnings) std::cerr << s.id() << ": " << w << "\n";
  }
  m.config = {{"min_confidence", min_conf}};
  for (const auto& id : ids) {
    m.outputs.push_back((sim::SessionDir(data, id) / "annotations.jsonl").string());
  }
  m.Write(data / "manifest_annotate.json");
  std::printf("annotated %zu sessions: %ld instances, %ld pointing frames, %ld without a "
              "direction\n",
              ids.size(), instances, pointing, excluded);
  return 0;
}

struct TrainArgs {
  fs::path data, out = "runs/train", config;
  std::string preset = "toy", split;
  int epochs = 0;
  double lr = 0.0, budget = -1.0;
};

harness::RunConfig ResolveConfig(const fs::path& file, const std::string& preset) {
  return file.empty() ? harness::RunConfig::Preset(preset) : harness::RunConfig::Load(file);
}

int TrainCmd(const TrainArgs& a, const Common& c, harness::Manifest m) {
  harness::RunConfig rc = ResolveConfig(a.config, a.preset);
  if (c.seed_given || a.config.empty()) rc.train.seed = c.seed;
  if (a.epochs > 0) rc.train.max_epochs = a.epochs;
  if (a.lr > 0) rc.train.learning_rate = a.lr;
  if (a.budget >= 0) rc.train.time_budget_s = a.budget;
  rc.train.workers = c.Workers();
  rc.train.Validate();
  const auto ds = LoadWithSplit(a.data, a.split);
  train::DataOptions o;
  o.features = rc.model.features;
  o.workers = c.Workers();
  const auto data = train::PreparedData::Build(ds, o);
  const auto& tr = data.split(train::SplitPart::kTrain);
  std::printf("train: %zu samples over %ld frame pairs (%ld pointing frames without a "
              "direction, %ld views with < %d joints skipped)\n",
              tr.samples.size(), tr.frame_pairs, tr.skipped_missing_direction,
              tr.skipped_few_joints, o.min_valid_joints);
  fs::create_directories(a.out);
  WriteJsonFile(a.out / "config.json", rc.ToJson());
  const auto res = train::Train(data, rc.model, rc.train,
                                {a.out / "train_log.jsonl", a.out / "best.json"});
  for (const auto& e : res.log) {
    std::printf("epoch %3d  loss %.4f  val %.2f deg  P/R %.3f/%.3f  F1 %.3f%s\n", e.epoch,
                e.loss, e.val.angular_error, e.val.prf.precision, e.val.prf.recall,
                e.val.prf.f1, e.improved ? "  *" : "");
  }
  std::printf("best epoch %d (%s)\n", res.best_epoch, res.stop_reason.c_str());
  m.config = rc.ToJson();
  m.config["data"] = a.data.string();
  m.config["split"] = a.split.empty() ? "splits.json" : a.split;
  m.outputs = {(a.out / "config.json").string(), (a.out / "train_log.jsonl").string(),
               (a.out / "best.json").string()};
  m.Write(a.out / "manifest.json");
  return 0;
}

struct EvaluateArgs {
  fs::path data, checkpoint, out = "runs/eval";
  std::string split, part = "test";
  double threshold = eval::kDecisionThreshold, bin_deg = 15.0;
};

int EvaluateCmd(const EvaluateArgs& a, const Common& c, harness::Manifest m) {
  const auto model = model::LoadCheckpoint(a.checkpoint);
  const auto ds = LoadWithSplit(a.data, a.split);
  train::DataOptions o;
  o.features = model->config().features;
  o.workers = c.Workers();
  const auto data = train::PreparedData::Build(ds, o);
  eval::EvaluationOptions eo;
  eo.part = PartFromName(a.part);
  eo.threshold = a.threshold;
  eo.bin_deg = a.bin_deg;
  eo.workers = c.Workers();
  const auto report = eval::Evaluate(*model, data, eo);
  fs::create_directories(a.out);
  WriteJsonFile(a.out / "metrics.json", report.ToJson());
  WriteText(a.out / "metrics.txt", report.ToText());
  WriteJsonFile(a.out / "error_map.json", harness::MollweideGrid(report.error_map, "mean"));
  std::cout << report.ToText();
  m.config = {{"data", a.data.string()}, {"checkpoint", a.checkpoint.string()},
              {"split", a.split.empty() ? "splits.json" : a.split}, {"part", a.part},
              {"threshold", a.threshold}, {"bin_deg", a.bin_deg}};
  m.outputs = {(a.out / "metrics.json").string(), (a.out / "metrics.txt").string(),
               (a.out / "error_map.json").string()};
  m.Write(a.out / "manifest.json");
  return 0;
}

struct AblateArgs {
  fs::path data, out = "runs/ablate", config, grid;
  std::string preset = "toy", split, part = "test";
};

int Ablate(const AblateArgs& a, const Common& c, harness::Manifest m) {
  harness::RunConfig rc = ResolveConfig(a.config, a.preset);
  if (c.seed_given || a.config.empty()) rc.train.seed = c.seed;
  rc.train.workers = c.Workers();
  const eval::AblationGrid grid =
      a.grid.empty() ? eval::AblationGrid::Standard() : eval::AblationGrid::FromJson(ReadJsonFile(a.grid));
  const auto ds = LoadWithSplit(a.data, a.split);
  train::DataOptions o;
  o.features = rc.model.features;
  o.workers = c.Workers();
  const auto data = train::PreparedData::Build(ds, o);
  const auto cells = eval::ExpandGrid(grid, rc.model, rc.train);
  eval::AblationOptions ao;
  ao.eval.part = PartFromName(a.part);
  ao.eval.workers = c.Workers();
  ao.out_dir = a.out / "cells";
  ao.on_row = [](const eval::AblationRow& r) {
    if (r.ok) {
      std::printf("%-16s %-14s %6.2f deg  %.3f/%.3f  (%.0f s)\n", r.cell.table.c_str(),
                  r.cell.label.c_str(), r.report.angular_error, r.report.prf.precision,
                  r.report.prf.recall, r.seconds);
    } else {
      std::printf("%-16s %-14s failed: %s\n", r.cell.table.c_str(), r.cell.label.c_str(),
                  r.error.c_str());
    }
    std::fflush(stdout);
  };
  const auto rows = eval::RunAblation(data, cells, ao);
  const std::string tables = eval::FormatAblationTables(rows);
  WriteText(a.out / "ablation.md", tables);
  WriteJsonFile(a.out / "ablation.json", eval::AblationToJson(rows));
  std::cout << "\n" << tables;
  m.config = rc.ToJson();
  m.config["grid"] = a.grid.empty() ? Json("standard") : ReadJsonFile(a.grid);
  m.config["data"] = a.data.string();
  m.config["part"] = a.part;
  m.outputs = {(a.out / "ablation.md").string(), (a.out / "ablation.json").string()};
  m.Write(a.out / "manifest.json");
  const bool any_failed =
      std::any_of(rows.begin(), rows.end(), [](const eval::AblationRow& r) { return !r.ok; });
  return any_failed ? 1 : 0;
}

int Baseline(const fs::path& data, const fs::path& out, double min_conf, harness::Manifest m) {
  const auto ds = anno::LoadDataset(data);
  const auto r = eval::EvaluateBaselines(ds.sessions, min_conf);
  fs::create_directories(out);
  WriteJsonFile(out / "baselines.json", r.ToJson());
  std::printf("elbow->hand  %s deg\nnose->hand   %s deg\nannotation   %s deg\n(%ld frames, "
              "%ld skipped)\n",
              eval::FormatDeg(r.elbow_hand).c_str(), eval::FormatDeg(r.nose_hand).c_str(),
              eval::FormatDeg(r.annotation).c_str(), r.frames, r.skipped);
  m.config = {{"data", data.string()}, {"min_confidence", min_conf}};
  m.outputs = {(out / "baselines.json").string()};
  m.Write(out / "manifest.json");
  return 0;
}

struct PlotArgs {
  fs::path annotations, metrics, out = "runs/plot/directions";
  double bin_deg = 15.0;
};

int PlotMollweide(const PlotArgs& a, harness::Manifest m) {
  if (a.annotations.empty() == a.metrics.empty()) {
    throw Error(ErrorCode::kInvalidArgument, "give exactly one of --annotations or --metrics");
  }
  Json grid;
  std::string title;
  if (!a.annotations.empty()) {
    // Distribution of annotated world directions.
    const auto ds = anno::LoadDataset(a.annotations);
    eval::DirectionErrorMap counts(a.bin_deg);
    for (const auto& s : ds.sessions) {
      for (const auto& f : s.annotation.frames) {
        if (f.world_direction) counts.Add(*f.world_direction, 0.0);
      }
    }
    grid = harness::MollweideGrid(counts, "count");
    title = "Annotated pointing directions (" + std::to_string(counts.total()) + " frames)";
  } else {
    grid = ReadJsonFile(a.metrics);
    if (grid.contains("error_map")) grid = grid["error_map"];
    if (!grid.contains("value")) {
      for (auto& b : grid.at("bins")) b["value"] = b["mean"];
      grid["value"] = "mean";
    }
    title = "Mean angular error by ground-truth direction (deg)";
  }
  const fs::path json = a.out.string() + ".json", svg = a.out.string() + ".svg";
  WriteJsonFile(json, grid);
  WriteText(svg, harness::MollweideSvg(grid, title));
  m.config = {{"annotations", a.annotations.string()}, {"metrics", a.metrics.string()},
              {"bin_deg", a.bin_deg}};
  m.outputs = {json.string(), svg.string()};
  m.Write(a.out.string() + ".manifest.json");
  std::cout << "wrote " << json.string() << " and " << svg.string() << "\n";
  return 0;
}

int Selftest(const Common& c) {
  std::vector<harness::CheckResult> results = {
      harness::CheckTriangulationRoundTrip(1000, c.seed),
      harness::CheckAnnotationEquivalence(oracle::kAnnotationNoisyBoundDeg,
                                          oracle::kAnnotationBenchmarkSeed),
      harness::CheckMaskedInvariance(100, c.seed),
      harness::CheckLossGradient(100, c.seed),
      harness::CheckUntrainedBaseline(10000, c.seed),
      harness::CheckParameterAnchors(),
      harness::CheckBaselineOrdering(oracle::kAnnotationBenchmarkSeed)};
  int failed = 0;
  for (const auto& r : results) {
    std::cout << harness::FormatCheck(r) << "\n";
    failed += !r.pass;
  }
  return failed == 0 ? 0 : 1;
}

}  // namespace
}  // namespace deepoint

int main(int argc, char** argv) {
  using namespace deepoint;
  CLI::App app{"deepoint: 3D pointing from multi-view pose tracks"};
  app.require_subcommand(1);
  app.set_version_flag("--version", harness::kVersion);
  const fs::path data_root = harness::DefaultDataRoot();
  Common common;

  SimulateArgs sa;
  sa.out = data_root;
  auto* sim_cmd = app.add_subcommand("simulate", "generate a synthetic multi-camera benchmark");
  sim_cmd->add_option("--rooms", sa.rooms)->check(CLI::PositiveNumber)->capture_default_str();
  sim_cmd->add_option("--actors", sa.actors)->check(CLI::PositiveNumber)->capture_default_str();
  sim_cmd->add_option("--cameras", sa.cameras)->check(CLI::Range(2, 64))->capture_default_str();
  sim_cmd->add_option("--markers", sa.markers)->check(CLI::PositiveNumber)->capture_default_str();
  sim_cmd->add_option("--duration", sa.duration, "seconds per session")->capture_default_str();
  sim_cmd->add_option("--pixel-sigma", sa.pixel_sigma)->capture_default_str();
  sim_cmd->add_flag("--noiseless", sa.noiseless, "exact projections, no dropout or occlusion");
  sim_cmd->add_option("--split", sa.split, "T, S or P")->capture_default_str();
  sim_cmd->add_option("--out", sa.out)->capture_default_str();
  AddCommon(sim_cmd, common);

  fs::path anno_data = data_root;
  double anno_conf = geometry::kDefaultMinConfidence;
  auto* anno_cmd = app.add_subcommand("annotate", "label every frame of a simulated dataset");
  anno_cmd->add_option("--data", anno_data)->capture_default_str();
  anno_cmd->add_option("--min-confidence", anno_conf)->capture_default_str();
  AddCommon(anno_cmd, common);

  TrainArgs ta;
  ta.data = data_root;
  auto* train_cmd = app.add_subcommand("train", "train a model on an annotated dataset");
  train_cmd->add_option("--data", ta.data)->capture_default_str();
  train_cmd->add_option("--config", ta.config, "run config JSON (model / train over a preset)");
  train_cmd->add_option("--preset", ta.preset, "toy or full when no --config")
      ->capture_default_str();
  train_cmd->add_option("--split", ta.split, "recompute the split: T, S or P");
  train_cmd->add_option("--epochs", ta.epochs, "override max_epochs");
  train_cmd->add_option("--lr", ta.lr, "override learning_rate");
  train_cmd->add_option("--time-budget", ta.budget, "seconds; checked between epochs");
  train_cmd->add_option("--out", ta.out)->capture_default_str();
  AddCommon(train_cmd, common);

  EvaluateArgs ea;
  ea.data = data_root;
  auto* eval_cmd = app.add_subcommand("evaluate", "score a checkpoint on a split");
  eval_cmd->add_option("--data", ea.data)->capture_default_str();
  eval_cmd->add_option("--checkpoint", ea.checkpoint)->required();
  eval_cmd->add_option("--split", ea.split, "recompute the split: T, S or P");
  eval_cmd->add_option("--part", ea.part, "train, val or test")->capture_default_str();
  eval_cmd->add_option("--threshold", ea.threshold)->capture_default_str();
  eval_cmd->add_option("--bin-deg", ea.bin_deg)->capture_default_str();
  eval_cmd->add_option("--out", ea.out)->capture_default_str();
  AddCommon(eval_cmd, common);

  AblateArgs aa;
  aa.data = data_root;
  auto* abl_cmd = app.add_subcommand("ablate", "train and score every cell of an ablation grid");
  abl_cmd->add_option("--data", aa.data)->capture_default_str();
  abl_cmd->add_option("--config", aa.config, "base run config JSON");
  abl_cmd->add_option("--preset", aa.preset)->capture_default_str();
  abl_cmd->add_option("--grid", aa.grid, "grid JSON; default: windows, w/o TE, body parts");
  abl_cmd->add_option("--split", aa.split, "recompute the split: T, S or P");
  abl_cmd->add_option("--part", aa.part)->capture_default_str();
  abl_cmd->add_option("--out", aa.out)->capture_default_str();
  AddCommon(abl_cmd, common);

  fs::path base_data = data_root, base_out = "runs/baseline";
  double base_conf = geometry::kDefaultMinConfidence;
  auto* base_cmd = app.add_subcommand("baseline", "elbow->hand and nose->hand baselines");
  base_cmd->add_option("--data", base_data)->capture_default_str();
  base_cmd->add_option("--min-confidence", base_conf)->capture_default_str();
  base_cmd->add_option("--out", base_out)->capture_default_str();
  AddCommon(base_cmd, common);

  PlotArgs pa;
  auto* plot_cmd = app.add_subcommand("plot-mollweide", "direction histogram or error map");
  plot_cmd->add_option("--annotations", pa.annotations, "annotated dataset root");
  plot_cmd->add_option("--metrics", pa.metrics, "metrics.json or error_map.json");
  plot_cmd->add_option("--bin-deg", pa.bin_deg)->capture_default_str();
  plot_cmd->add_option("--out", pa.out, "output prefix (.json, .svg)")->capture_default_str();
  AddCommon(plot_cmd, common);

  auto* self_cmd = app.add_subcommand("selftest", "oracle and invariant checks (no training)");
  AddCommon(self_cmd, common);

  CLI11_PARSE(app, argc, argv);

  try {
    CLI::App* cmd = app.get_subcommands().front();
    common.seed_given = cmd->count("--seed") > 0;
    auto m = StartManifest(cmd->get_name(), common, argc, argv);
    if (cmd == sim_cmd) return Simulate(sa, common, m);
    if (cmd == anno_cmd) return Annotate(anno_data, anno_conf, common, m);
    if (cmd == train_cmd) return TrainCmd(ta, common, m);
    if (cmd == eval_cmd) return EvaluateCmd(ea, common, m);
    if (cmd == abl_cmd) return Ablate(aa, common, m);
    if (cmd == base_cmd) return Baseline(base_data, base_out, base_conf, m);
    if (cmd == plot_cmd) return PlotMollweide(pa, m);
    return Selftest(common);
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
}
