// Copyright 2026 The homog Authors
// SPDX-License-Identifier: Apache-2.0

/// Identification of the 12 nonlinear parameters: the isotropized campaign
/// strains are replayed through the damage law at one material point and the
/// mismatch of the final internal work is minimised by a box-constrained
/// trust-region quasi-Newton method in the unit box.

#pragma once

#include <functional>
#include <string>
#include <vector>

#include "homog/theta.hpp"
#include "homog/vlab.hpp"

namespace homog {

inline constexpr double kInfeasibleCost = 1e30;

struct ConstraintReport {
  bool peak_above_onset = true;        ///< fpc > f0c
  bool peak_strain_beyond_elastic = true;  ///< epc > f0c / E
  bool tension_no_snapback = true;     ///< l_RSE < 2 E Gt / f0t^2
  bool compression_no_snapback = true; ///< Gc / l_RSE exceeds the pre-peak energy
  /// Both snap-back checks repeated at the macro element length the law is
  /// meant for. Only evaluated when that length is given.
  bool deployable = true;
  bool feasible() const {
    return peak_above_onset && peak_strain_beyond_elastic && tension_no_snapback && compression_no_snapback &&
           deployable;
  }
  std::vector<std::string> violated() const;
};

/// deploy_length <= 0 skips the deployment check. At the deployment length
/// Gc / l must exceed the pre-peak energy by the relative deploy_margin, so
/// the macro softening branch does not collapse to a vertical drop.
ConstraintReport constraints_check(const ThetaVector& theta, double E, double l_rse, double deploy_length = 0.0,
                                   double deploy_margin = 0.0);

struct CostReport {
  double total = 0.0;
  std::vector<int> case_ids;
  std::vector<double> per_case;  ///< |W_replay - W_campaign| per case
  bool feasible = true;
  ConstraintReport constraints;
};

struct CostOptions {
  /// Sum |dW| over every step instead of the final one only.
  bool all_steps = false;
  /// Macro element length the calibrated law must also regularise; 0 = off.
  double deploy_length = 0.0;
  double deploy_margin = 0.25;
  int jobs = 1;
};

/// Pure function of theta for one isotropized campaign.
class CostFunction {
 public:
  CostFunction(Campaign campaign_iso, double E, double nu, double l_rse, CostOptions opt = {});

  CostReport evaluate(const ThetaVector& theta) const;
  double operator()(const ThetaVector& theta) const { return evaluate(theta).total; }

  /// Replayed stress histories of every case.
  Campaign replay(const ThetaVector& theta) const;
  /// Sum of |W_final| over the campaign.
  double campaign_work() const { return campaign_work_; }
  double E() const { return e_; }
  double nu() const { return nu_; }
  double l_rse() const { return l_rse_; }

 private:
  Campaign campaign_;
  std::vector<std::vector<double>> work_;
  double e_, nu_, l_rse_;
  CostOptions opt_;
  double campaign_work_ = 0.0;
};

struct OptimizerConfig {
  double tol = 1e-6;
  int max_epochs = 200;
  double fd_step = 1e-4;
  double initial_radius = 0.1;
};

struct TraceRow {
  int epoch = 0;
  double cost = 0.0;
  double step_norm = 0.0;  ///< |d xi|_inf of the accepted step
  double radius = 0.0;
};

enum class StopReason { StepTolerance, RadiusTolerance, Stationary, EpochCap };
const char* to_string(StopReason r);

struct OptimizerResult {
  ThetaArray xi;
  double cost = 0.0;
  int evaluations = 0;
  int epochs = 0;
  StopReason reason = StopReason::EpochCap;
  /// Epoch 0 is the start point, then one row per accepted step.
  std::vector<TraceRow> trace;
};

using UnitCost = std::function<double(const ThetaArray& xi)>;

/// Minimises f over [0,1]^n. Throws NoProgress when f(xi0) is not finite or
/// below the infeasibility penalty, or when the first 3n evaluations accept
/// no step.
OptimizerResult minimize_unit_box(const UnitCost& f, const ThetaArray& xi0, const OptimizerConfig& cfg);

struct Calibration {
  ThetaVector theta0;
  Bounds bounds;
  ThetaVector theta_star;
  CostReport start;
  CostReport final;
  OptimizerResult optimizer;
  double campaign_work = 0.0;
};

/// Checks theta0 against the constraints first and throws NoProgress naming
/// the violated ones.
Calibration calibrate(const CostFunction& cost, const ThetaVector& theta0, const Bounds& bounds,
                      const OptimizerConfig& cfg);

Json to_json(const Calibration& c);
/// epoch,cost,step_norm,radius
std::string trace_csv(const OptimizerResult& r);

}  // namespace homog
