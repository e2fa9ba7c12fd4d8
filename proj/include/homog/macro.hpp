// Copyright 2026 The homog Authors
// SPDX-License-Identifier: Apache-2.0

/// Calibrated macro constitutive law: the isotropic damage law in the
/// fictitious isotropic space, wrapped by the anisotropy map T and
/// regularised at the macro element length.

#pragma once

#include <string>

#include "homog/fem.hpp"
#include "homog/json_io.hpp"
#include "homog/theta.hpp"
#include "homog/vlab.hpp"

namespace homog {

struct MacroLaw {
  ThetaVector theta;
  double E = 0.0;
  double nu = 0.0;
  Mat3 t = Mat3::Identity();
  double l_rse = 0.0;
  /// Hashes of the campaign and fit the law was calibrated on; informational.
  std::string campaign_hash;
  std::string fit_hash;

  /// Throws InvalidArgument, Singular or SnapBack.
  void validate() const;
  MaterialParams material() const { return to_material(theta, E, nu); }
  /// T^T C_iso T.
  Mat3 elasticity() const;
  /// Largest element length the energies of theta can regularise.
  double max_length() const;
};

inline double omega_ch(double l_macro, double l_rse) { return l_macro / l_rse; }

/// Integration point of a macro element. Immutable, shareable.
class MacroPointLaw final : public PointLaw {
 public:
  /// Throws SnapBack naming l_macro when the energies cannot be regularised.
  MacroPointLaw(const MacroLaw& law, double l_macro);

  DamageState virgin() const override { return DamageState::virgin(model_.params()); }
  StressUpdate integrate(const StrainV& eps, const DamageState& state) const override;
  Mat3 tangent(const StrainV& eps, const DamageState& state) const override;
  Mat3 secant(const StrainV& eps, const DamageState& updated) const override;
  StressV frozen_stress(const StrainV& eps, const DamageState& state) const override;

  const DamageModel& model() const { return model_; }
  const Mat3& map() const { return t_; }

 private:
  StrainV to_iso(const StrainV& eps) const { return StrainV::from(t_ * eps.vec()); }
  StressV from_iso(const StressV& s) const { return StressV::from(t_.transpose() * s.vec()); }

  DamageModel model_;
  Mat3 t_;
  Mat3 elastic_;
};

/// One-shot form of MacroPointLaw::integrate.
StressUpdate macro_integrate(const StrainV& eps, const DamageState& state, const MacroLaw& law, double l_macro);

/// Macro law on every element, regularised with that element's sqrt(area).
LawTable macro_laws(const Mesh& mesh, const MacroLaw& law);

/// Drives one material point of the law at l_RSE along the 26 campaign
/// directions with the lab's load schedule. The result stands in for an RVE
/// campaign whose ground truth is known.
Campaign synthesize_campaign(const MacroLaw& law, const LabConfig& cfg);

Json export_law(const MacroLaw& law);
/// Throws Config naming the first missing field.
MacroLaw import_law(const Json& j);

}  // namespace homog
