// Copyright 2026 The homog Authors
// SPDX-License-Identifier: Apache-2.0

/// Batch stages of the homogenization pipeline. Each stage reads the output
/// of the previous one from the output directory and returns a summary.
///
/// Layout under out_dir:
///   rve/mesh.txt, rve/rve.json
///   campaign/case_XX.csv, campaign/case_XX.hash, campaign/manifest.json
///   fit.json
///   calibration/calibration.json, trace.csv, law.json, replay/
///   validation/<scenario>_<model>.csv, snapshots/, validation.json
///   plots/stress_case_XX.{svg,csv}, plots/work_case_XX.{svg,csv}

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "homog/config.hpp"

namespace homog {

using ProgressFn = std::function<void(const std::string& stage, int done, int total)>;

struct RunOptions {
  /// Overrides the configured worker count when > 0.
  int jobs = 0;
  /// Case ids for vlab and plot; empty means every case.
  std::vector<int> cases;
  /// Value of HOMOG_SEED, recorded in the summaries. The pipeline has no
  /// random choices, so it changes nothing else.
  std::string seed;
  ProgressFn progress;
};

/// Throws Geometry.
Json cmd_rve(const PipelineConfig& cfg, const RunOptions& opt = {});
/// Reuses every case whose CSV and hash sidecar match the current inputs.
/// Throws Diverged when a case fails at its first step.
Json cmd_vlab(const PipelineConfig& cfg, const RunOptions& opt = {});
/// Throws RankDeficient.
Json cmd_isotropize(const PipelineConfig& cfg, const RunOptions& opt = {});
/// Throws NoProgress when theta0 is infeasible or the optimizer stalls.
Json cmd_calibrate(const PipelineConfig& cfg, const RunOptions& opt = {});
/// Throws Diverged when a wall stops before 10% of its program. The curves
/// reached so far are written first.
Json cmd_validate(const PipelineConfig& cfg, const RunOptions& opt = {});
/// Throws MalformedCsv naming the file and column.
Json cmd_plot(const PipelineConfig& cfg, const RunOptions& opt = {});

/// Parses "1,13,20-22". Throws InvalidArgument.
std::vector<int> parse_case_list(const std::string& text);

/// Minimal line chart: one polyline per series, dashed when asked.
struct PlotSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};
std::string render_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<PlotSeries>& series);

}  // namespace homog
