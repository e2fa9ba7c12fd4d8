// Copyright 2026 The homog Authors
// SPDX-License-Identifier: Apache-2.0

#include "homog/macro.hpp"

#include <algorithm>
#include <cmath>

#include "homog/error.hpp"

namespace homog {

void MacroLaw::validate() const {
  material().validate();
  if (!(l_rse > 0.0) || !std::isfinite(l_rse)) fail(ErrorKind::InvalidArgument, "l_RSE must be positive");
  if (!t.allFinite() || !Eigen::FullPivLU<Mat3>(t).isInvertible()) {
    fail(ErrorKind::Singular, "anisotropy map T is singular");
  }
  if (!(l_rse < max_length())) {
    fail(ErrorKind::SnapBack, "theta cannot be regularised at l_RSE = " + std::to_string(l_rse));
  }
}

Mat3 MacroLaw::elasticity() const { return t.transpose() * plane_stress_elasticity(E, nu) * t; }

double MacroLaw::max_length() const {
  const MaterialParams p = material();
  const double tension = 2.0 * p.E * p.Gt / (p.ft * p.ft);
  const double compression = p.Gc / compression_energy(p).pre_peak;
  return std::min(tension, compression);
}

namespace {

DamageModel regularised_model(const MacroLaw& law, double l_macro) {
  try {
    return DamageModel(law.material(), l_macro);
  } catch (const Error& e) {
    if (e.kind() != ErrorKind::SnapBack) throw;
    fail(ErrorKind::SnapBack, "macro element length " + std::to_string(l_macro) +
                                  " m exceeds the largest length the calibrated energies allow (" +
                                  std::to_string(law.max_length()) + " m): " + e.what());
  }
}

}  // namespace

MacroPointLaw::MacroPointLaw(const MacroLaw& law, double l_macro)
    : model_(regularised_model(law, l_macro)), t_(law.t), elastic_(law.elasticity()) {}

StressUpdate MacroPointLaw::integrate(const StrainV& eps, const DamageState& state) const {
  StressUpdate u = model_.integrate(to_iso(eps), state);
  u.stress = from_iso(u.stress);
  return u;
}

Mat3 MacroPointLaw::tangent(const StrainV& eps, const DamageState& state) const {
  if (state.d_t == 0.0 && state.d_c == 0.0) {
    const DamageState trial = model_.integrate(to_iso(eps), state).state;
    if (trial.d_t == 0.0 && trial.d_c == 0.0) return elastic_;
  }
  return t_.transpose() * model_.tangent(to_iso(eps), state) * t_;
}

Mat3 MacroPointLaw::secant(const StrainV& eps, const DamageState& updated) const {
  return t_.transpose() * model_.secant(to_iso(eps), updated) * t_;
}

StressV MacroPointLaw::frozen_stress(const StrainV& eps, const DamageState& state) const {
  return from_iso(model_.frozen_stress(to_iso(eps), state));
}

StressUpdate macro_integrate(const StrainV& eps, const DamageState& state, const MacroLaw& law, double l_macro) {
  return MacroPointLaw(law, l_macro).integrate(eps, state);
}

LawTable macro_laws(const Mesh& mesh, const MacroLaw& law) {
  const CharacteristicLengths lengths = characteristic_lengths(mesh);
  LawTable laws(mesh.num_elements());
  for (std::size_t e = 0; e < mesh.num_elements(); ++e) {
    laws[e] = std::make_shared<MacroPointLaw>(law, lengths.per_element[e]);
  }
  return laws;
}

Campaign synthesize_campaign(const MacroLaw& law, const LabConfig& cfg) {
  const MacroPointLaw m(law, law.l_rse);
  const std::vector<StrainV> dirs = strain_directions();
  Campaign c;
  c.l_rse = law.l_rse;
  for (std::size_t i = 0; i < dirs.size(); ++i) {
    HistoryRecord r;
    r.case_id = static_cast<int>(i) + 1;
    r.direction = dirs[i];
    r.l_rse = law.l_rse;
    DamageState st = m.virgin();
    for (double t : load_schedule(cfg, dirs[i])) {
      const StrainV e = t * dirs[i];
      const StressUpdate up = m.integrate(e, st);
      r.steps.push_back({t, e, up.stress});
      st = up.state;
    }
    c.records.push_back(std::move(r));
  }
  return c;
}

Json export_law(const MacroLaw& law) {
  Json units = Json::object();
  for (int i = 0; i < kThetaSize; ++i) units[theta_names()[i]] = theta_units()[i];
  units["E"] = "Pa";
  units["nu"] = "-";
  units["l_rse"] = "m";
  return Json{{"format", "homog-macro-law"},
              {"version", 1},
              {"theta", to_json(law.theta)},
              {"E", law.E},
              {"nu", law.nu},
              {"T", to_json(law.t)},
              {"l_rse", law.l_rse},
              {"units", units},
              {"provenance", {{"campaign_hash", law.campaign_hash}, {"fit_hash", law.fit_hash}}}};
}

MacroLaw import_law(const Json& j) {
  if (!j.is_object()) fail(ErrorKind::Config, "law file must hold a JSON object");
  MacroLaw law;
  if (!j.contains("theta")) fail(ErrorKind::Config, "missing field 'theta'");
  law.theta = theta_from_json(j.at("theta"));
  law.E = require_number(j, "E");
  law.nu = require_number(j, "nu");
  if (!j.contains("T")) fail(ErrorKind::Config, "missing field 'T'");
  law.t = mat3_from_json(j.at("T"), "T");
  law.l_rse = require_number(j, "l_rse");
  if (j.contains("provenance")) {
    law.campaign_hash = j["provenance"].value("campaign_hash", "");
    law.fit_hash = j["provenance"].value("fit_hash", "");
  }
  law.validate();
  return law;
}

}  // namespace homog
