// Copyright 2026 The homog Authors
// SPDX-License-Identifier: Apache-2.0

/// Pipeline configuration: a small TOML subset read into a JSON tree, then
/// mapped onto the settings of every stage.

#pragma once

#include <string>
#include <vector>

#include "homog/calibrate.hpp"
#include "homog/json_io.hpp"
#include "homog/mesh.hpp"
#include "homog/vlab.hpp"
#include "homog/walls.hpp"

namespace homog {

/// Supports [section] and [dotted.section] headers, key = value pairs with
/// numbers, "strings", true/false and flat arrays of those, and # comments.
/// Throws Config with the line number on anything else.
Json parse_toml_subset(const std::string& text);

struct ValidationConfig {
  double width = 1.27;
  double height = 1.27;
  /// Micro wall mesh: same pattern as the RVE, coarser bricks.
  int micro_resolution = 1;
  double micro_max_element_size = 0.08;
  /// Macro wall grid.
  int macro_nx = 44;
  int macro_ny = 44;
  std::vector<std::string> scenarios{"compression"};
  std::vector<std::string> models{"micro", "macro"};
  WallProgram program;
  /// Precompression multiplier of the second shear scenario.
  double extra_precompression = 1.3;
  SolverOptions solver{.tolerance = 1e-5, .max_bisections = 10};
  bool snapshots = true;
};

struct PipelineConfig {
  std::string out_dir = "homog_out";
  FlemishGeometry geometry;
  MaterialParams brick;
  MaterialParams mortar;
  LabConfig lab;
  ThetaVector theta0;
  Bounds bounds;
  OptimizerConfig optimizer;
  CostOptions cost;
  /// With cost.deploy_length = 0, calibrate for the macro wall element size.
  bool deploy_to_wall = true;
  ValidationConfig validation;
};

/// Table 1 component properties.
MaterialParams default_brick();
MaterialParams default_mortar();

/// Published start point with Gc and fpc moved so that it also satisfies
/// the deployment constraint at the default macro wall element.
ThetaVector deployable_theta0();

/// Element length the calibration must regularise at; 0 when off.
double effective_deploy_length(const PipelineConfig& c);

/// Defaults everywhere, then overridden by the given tree.
PipelineConfig pipeline_config_from(const Json& tree);
PipelineConfig parse_pipeline_config(const std::string& text);
PipelineConfig load_pipeline_config(const std::string& path);

/// Effective configuration, for the run records.
Json to_json(const PipelineConfig& c);

}  // namespace homog
