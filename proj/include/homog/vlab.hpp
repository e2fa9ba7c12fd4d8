// Copyright 2026 The homog Authors
// SPDX-License-Identifier: Apache-2.0

/// Virtual laboratory: radial strain-driven RVE experiments along the 26
/// directions of the unit strain sphere, their storage and internal work.

#pragma once

#include <cstdint>
#include <functional>
#include <string>
#include <vector>

#include "homog/damage.hpp"
#include "homog/fem.hpp"
#include "homog/mesh.hpp"

namespace homog {

struct HistoryStep {
  double t = 0.0;
  StrainV strain;
  StressV stress;
};

enum class CaseStatus { Complete, Capped, Diverged };

const char* to_string(CaseStatus s);

struct HistoryRecord {
  int case_id = 0;
  StrainV direction;
  std::vector<HistoryStep> steps;
  double l_rse = 0.0;
  CaseStatus status = CaseStatus::Complete;
};

struct Campaign {
  std::vector<HistoryRecord> records;
  std::uint64_t mesh_hash = 0;
  MaterialParams brick;
  MaterialParams mortar;
  double l_rse = 0.0;
};

/// Unit strain directions ordered as case ids 1..26.
std::vector<StrainV> strain_directions();

/// True when the largest principal strain of the direction is <= 0.
bool is_compressive_direction(const StrainV& d);

enum class Schedule { Geometric, Uniform };

struct LabConfig {
  /// Amplitude of the first, purely elastic step.
  double lambda_first = 1e-6;
  double lambda_max_tension = 3e-3;
  double lambda_max_compression = 2e-2;
  int steps = 80;
  Schedule schedule = Schedule::Geometric;
  /// Stop once |sigma| falls below this fraction of its running peak.
  double failure_ratio = 0.05;
  /// Residual reference floor as a fraction of the peak reaction norm, so
  /// the post-peak tolerance does not shrink with the load.
  double reaction_floor_ratio = 0.1;
  SolverOptions solver{.tolerance = 1e-5};
  int jobs = 1;
};

/// Amplitudes lambda_1..lambda_n for one direction.
std::vector<double> load_schedule(const LabConfig& cfg, const StrainV& direction);

/// Drives the RVE boundary with direction * lambda(t) until failure or the
/// amplitude cap. Diverged runs keep the converged prefix.
HistoryRecord run_experiment(const Mesh& mesh, const LawTable& laws, int case_id, const StrainV& direction,
                             const LabConfig& cfg);

/// Runs the listed case ids (1-based; empty = all 26) on cfg.jobs workers.
/// `on_done` is called under a lock as each case finishes. Records are
/// returned ordered by case id.
Campaign run_campaign(const Mesh& mesh, const MaterialParams& brick, const MaterialParams& mortar,
                      const LabConfig& cfg, const std::vector<int>& cases = {},
                      const std::function<void(const HistoryRecord&)>& on_done = {});

/// Cumulative trapezoidal work density from an unloaded origin, one entry per step.
std::vector<double> internal_work(const HistoryRecord& h);

/// Principal-sign class of the up-scaled stress where the path leaves its
/// initial linear branch: "T/T", "T/C" or "C/C". Later steps are dominated
/// by the confinement of the cracked RVE and do not describe the induced
/// stress state.
std::string stress_state_class(const HistoryRecord& h);

// Campaign store: case_XX.csv with columns t,exx,eyy,gxy,sxx,syy,sxy plus
// manifest.json.
std::string case_file_name(int case_id);
void write_case_csv(const HistoryRecord& h, const std::string& path);
HistoryRecord read_case_csv(const std::string& path, int case_id, const StrainV& direction);
void write_manifest(const Campaign& c, const std::string& dir);
/// Loads manifest.json and every case CSV it lists.
Campaign read_campaign(const std::string& dir);

}  // namespace homog
