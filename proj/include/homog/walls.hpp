// Copyright 2026 The homog Authors
// SPDX-License-Identifier: Apache-2.0

/// Validation walls: a clamped base and a top edge driven by displacement,
/// either straight down (compression) or down to a fixed precompression and
/// then sideways (shear compression).

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "homog/fem.hpp"
#include "homog/mesh.hpp"

namespace homog {

enum class WallTest { Compression, ShearCompression };

const char* to_string(WallTest t);
/// "compression" or "shear"; throws Config otherwise.
WallTest wall_test_from_string(const std::string& s);

struct WallProgram {
  WallTest test = WallTest::Compression;
  /// Final downward top displacement of the compression test [m].
  double dy_max = 12e-3;
  int steps = 40;
  /// Downward top displacement reached before shearing [m].
  double precompression = 0.09e-3;
  int precompression_steps = 5;
  /// Final horizontal top displacement of the shear stage [m].
  double dx_max = 8e-3;
  /// Residual reference floor as a fraction of the peak reaction norm.
  double reaction_floor_ratio = 0.1;
};

struct WallPoint {
  double time = 0.0;  ///< program fraction in [0, 1]
  double ux = 0.0;    ///< top displacement [m]
  double uy = 0.0;
  double fx = 0.0;    ///< total top reaction [N]
  double fy = 0.0;    ///< compressive top reaction, positive when pushing down [N]
};

struct WallRun {
  std::vector<WallPoint> curve;
  /// Fraction of the program completed; 1 unless the solver gave up.
  double completed = 0.0;
  bool diverged = false;
  int relaxed_steps = 0;
  int explicit_steps = 0;
};

/// Dofs of the base (fixed) followed by those of the top (driven).
struct WallSupports {
  std::vector<int> dofs;
  std::vector<int> top_x;  ///< indices into dofs
  std::vector<int> top_y;
};

WallSupports wall_supports(const Mesh& mesh);

/// Top displacement (ux, uy) at each step of the program, excluding the origin.
std::vector<std::pair<double, double>> wall_program_path(const WallProgram& p);

using WallObserver = std::function<void(int step, const FemModel& model, const FieldState& state)>;

WallRun run_wall(const Mesh& mesh, const LawTable& laws, const WallProgram& program, const SolverOptions& solver,
                 const WallObserver& observer = {});

/// One row per element: centroid, mean d+ and d- over its Gauss points and
/// |u| at the centroid.
std::string damage_snapshot_csv(const FemModel& model, const FieldState& state);

/// time,ux,uy,fx,fy
std::string wall_curve_csv(const WallRun& run);

/// Secant stiffness fy/uy at the first step with nonzero uy.
double initial_stiffness(const WallRun& run);
double peak_vertical_reaction(const WallRun& run);

}  // namespace homog
