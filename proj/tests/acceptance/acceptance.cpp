// Copyright 2026 The homog Authors
// SPDX-License-Identifier: Apache-2.0

// Acceptance checks. Prints one PASS/FAIL line per criterion and exits
// non-zero if any fails. Tolerances are pinned below.
//
//   acceptance [out_dir] [--quick]
//
// --quick skips the RVE campaign and the walls (criteria 8 and 9, and the
// campaign part of 10), which take most of the runtime.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <random>
#include <string>
#include <thread>
#include <vector>

#include "homog/calibrate.hpp"
#include "homog/damage.hpp"
#include "homog/error.hpp"
#include "homog/fem.hpp"
#include "homog/isotropize.hpp"
#include "homog/macro.hpp"
#include "homog/pipeline.hpp"
#include "homog/vlab.hpp"

namespace fs = std::filesystem;
using namespace homog;

namespace {

// Pinned tolerances.
constexpr double kTauTol = 1e-10;
constexpr double kDissipationTol = 0.02;
constexpr double kTangentTol = 1e-4;
constexpr double kElasticTangentTol = 1e-5;
constexpr double kPatchTol = 1e-10;
constexpr double kIsoEntryTol = 0.02;
constexpr double kSandwichTol = 1e-10;
constexpr double kENuTol = 0.005;
constexpr double kWorkInvarianceTol = 1e-12;
constexpr double kRoundTripCost = 0.01;
constexpr int kMinClassified = 24;
constexpr double kCampaignBudgetSeconds = 30 * 60;
constexpr double kStiffnessTol = 0.05;
constexpr double kPeakTol = 0.15;

struct Result {
  bool pass = false;
  std::string detail;
};

int failures = 0;

double now() {
  return std::chrono::duration<double>(std::chrono::steady_clock::now().time_since_epoch()).count();
}

void report(int id, const char* name, const std::function<Result()>& fn) {
  const double t0 = now();
  Result r;
  try {
    r = fn();
  } catch (const std::exception& e) {
    r = {false, std::string("exception: ") + e.what()};
  }
  if (!r.pass) ++failures;
  std::printf("%s %d %s: %s (%.1f s)\n", r.pass ? "PASS" : "FAIL", id, name, r.detail.c_str(), now() - t0);
  std::fflush(stdout);
}

std::string fmt(const char* f, double a) {
  char buf[128];
  std::snprintf(buf, sizeof(buf), f, a);
  return buf;
}

MaterialParams mortar() { return default_mortar(); }

Mat3 published_ortho() {
  Mat3 c;
  c << 5.442, 0.83, 0.0, 0.83, 4.291, 0.0, 0.0, 0.0, 1.707;
  return c * 1e9;
}

// ---- 1 -------------------------------------------------------------------

Result uniaxial_identities() {
  std::mt19937_64 rng(1);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 100; ++k) {
    MaterialParams p = mortar();
    p.kb = 1.05 + 0.6 * u(rng);
    p.ft = 1e5 + 3e6 * u(rng);
    p.fpc = p.ft * (3 + 40 * u(rng));
    p.f0c = p.fpc * (0.2 + 0.6 * u(rng));
    p.kappa = 0.3 * u(rng);
    p.nu = 0.3 * u(rng);
    const double s = 1e4 + 3e7 * u(rng);
    worst = std::max(worst, std::abs(tau_plus({s, 0, 0}, p) / s - 1.0));
    worst = std::max(worst, std::abs(tau_plus({0, s, 0}, p) / s - 1.0));
    worst = std::max(worst, std::abs(tau_minus({-s, 0, 0}, p) / s - 1.0));
    worst = std::max(worst, std::abs(tau_minus({0, -s, 0}, p) / s - 1.0));
  }
  return {worst <= kTauTol, "max relative error " + fmt("%.2e", worst) + " over 100 parameter sets"};
}

// ---- 2 -------------------------------------------------------------------

double uniaxial_dissipation(const DamageModel& m, double sign, double lambda_max, int n) {
  const double nu = m.params().nu;
  DamageState st = DamageState::virgin(m.params());
  StressV prev_s{};
  StrainV prev_e{};
  double w = 0.0;
  for (int k = 1; k <= n; ++k) {
    const double lam = sign * lambda_max * k / n;
    const StrainV e{lam, -nu * lam, 0.0};
    const StressUpdate up = m.integrate(e, st);
    st = up.state;
    w += 0.5 * (up.stress + prev_s).vec().dot(e.vec() - prev_e.vec());
    prev_s = up.stress;
    prev_e = e;
  }
  return w;
}

Result dissipation() {
  const MaterialParams p = mortar();
  double worst = 0.0;
  for (double l : {0.01, 0.05, 0.2}) {
    const DamageModel m(p, l);
    const double lambda_t = p.ft / p.E * (1.0 + 25.0 / m.softening_a());
    worst = std::max(worst, std::abs(uniaxial_dissipation(m, 1.0, lambda_t, 400000) / (p.Gt / l) - 1.0));
    worst = std::max(worst, std::abs(uniaxial_dissipation(m, -1.0, m.compression().eu, 200000) / (p.Gc / l) - 1.0));
  }
  return {worst <= kDissipationTol, "max |W l / G - 1| = " + fmt("%.4f", worst) + " (mortar, l = 0.01, 0.05, 0.2 m)"};
}

// ---- 3 -------------------------------------------------------------------

Result tangents() {
  const MaterialParams p = mortar();
  const DamageModel m(p, 0.05);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  int states = 0;
  while (states < 50) {
    Vec3 d(g(rng), g(rng), g(rng));
    d.normalize();
    const StrainV dir = StrainV::from(d);
    // Past the tensile or compressive onset along this direction.
    const double onset = is_compressive_direction(dir) ? p.f0c / p.E : p.ft / p.E;
    const double a = onset * (1.5 + 3.0 * u(rng));
    const DamageState st = m.integrate(StrainV::from(a * d), DamageState::virgin(p)).state;
    if (st.d_t == 0.0 && st.d_c == 0.0) continue;
    const StrainV e = StrainV::from(1.02 * a * d);
    const double h = 1e-8 * e.norm();
    Mat3 central;
    for (int j = 0; j < 3; ++j) {
      Vec3 x = e.vec(), y = e.vec();
      x[j] += 0.5 * h;
      y[j] -= 0.5 * h;
      central.col(j) = (m.integrate(StrainV::from(x), st).stress.vec() - m.integrate(StrainV::from(y), st).stress.vec()) / h;
    }
    worst = std::max(worst, (m.tangent(e, st) - central).norm() / central.norm());
    ++states;
  }
  double elastic = 0.0;
  for (int k = 0; k < 20; ++k) {
    const StrainV e{1e-6 * g(rng), 1e-6 * g(rng), 1e-6 * g(rng)};
    elastic = std::max(elastic, (m.tangent(e, DamageState::virgin(p)) - m.elasticity()).norm() / m.elasticity().norm());
  }
  return {worst <= kTangentTol && elastic <= kElasticTangentTol,
          "damaged " + fmt("%.2e", worst) + " at 50 states, elastic " + fmt("%.2e", elastic)};
}

// ---- 4 -------------------------------------------------------------------

std::string patch_test(double& worst) {
  const Mesh mesh = generate_grid(0.39, 0.13, 10, 10);
  const MaterialParams p = mortar();
  auto law = std::make_shared<DamagePointLaw>(p, std::sqrt(mesh.element_area(0)));
  FemModel model(mesh, LawTable(mesh.num_elements(), law), boundary_dofs(mesh));
  const Mat3 c = plane_stress_elasticity(p.E, p.nu);
  std::string out;
  char buf[160];
  worst = 0.0;
  int id = 0;
  for (const StrainV& d : strain_directions()) {
    ++id;
    // Small enough to stay elastic.
    const double lam = 1e-6;
    FieldState s = model.initial_state(), res;
    const SolveReport r = model.solve(s, affine_boundary_values(mesh, model.constrained(), d, lam), res);
    if (!r.converged) {
      worst = INFINITY;
      continue;
    }
    const Vec3 expect = c * (lam * d.vec());
    const Vec3 got = model.upscale(res).vec();
    worst = std::max(worst, (got - expect).norm() / expect.norm());
    for (const auto& gs : res.gp_stress) worst = std::max(worst, (gs.vec() - expect).norm() / expect.norm());
    std::snprintf(buf, sizeof(buf), "%d,%.17g,%.17g,%.17g\n", id, got[0], got[1], got[2]);
    out += buf;
  }
  return out;
}

// ---- 5 -------------------------------------------------------------------

Result isotropization() {
  Mat3 iso_paper, t_paper;
  iso_paper << 4.686, 1.014, 0.0, 1.014, 4.686, 0.0, 0.0, 0.0, 1.836;
  iso_paper *= 1e9;
  t_paper << 1.084, -1.686e-2, 5.008e-8, -3.036e-2, 9.604e-1, 8.359e-8, 9.407e-8, 1.415e-7, 9.641e-1;
  const ElasticityFit f = fit_from_orthotropic(published_ortho());

  // Entries printed as ~1e-8 are zero to the printed precision; they are
  // compared on the scale of the largest entry.
  auto worst_entry = [](const Mat3& a, const Mat3& b) {
    double w = 0.0;
    const double scale = b.cwiseAbs().maxCoeff();
    for (int i = 0; i < 3; ++i) {
      for (int j = 0; j < 3; ++j) {
        const double ref = std::abs(b(i, j)) > 1e-4 * scale ? std::abs(b(i, j)) : scale;
        w = std::max(w, std::abs(a(i, j) - b(i, j)) / ref);
      }
    }
    return w;
  };
  const double iso_err = worst_entry(f.c_iso, iso_paper);
  const double t_err = worst_entry(f.t, t_paper);
  const double sandwich = (f.t.transpose() * f.c_iso * f.t - published_ortho()).norm() / published_ortho().norm();
  const double e_err = std::abs(f.e_iso / 4.467e9 - 1.0);
  const double nu_err = std::abs(f.nu_iso / 0.2164 - 1.0);
  const bool pass = iso_err <= kIsoEntryTol && t_err <= kIsoEntryTol && sandwich <= kSandwichTol && e_err <= kENuTol &&
                    nu_err <= kENuTol;
  char buf[400];
  std::snprintf(buf, sizeof(buf),
                "C_iso worst entry %.2f%%, T worst entry %.2f%%, T'C_iso T vs C_ortho %.1e, E = %.4e (%.2f%%), "
                "nu = %.4f (%.2f%%)",
                100 * iso_err, 100 * t_err, sandwich, f.e_iso, 100 * e_err, f.nu_iso, 100 * nu_err);
  return {pass, buf};
}

std::string isotropization_artifact() { return dump_json(to_json(fit_from_orthotropic(published_ortho()))); }

// ---- 6 and 7 ---------------------------------------------------------------

MacroLaw truth_law(double l_rse) {
  const ElasticityFit f = fit_from_orthotropic(published_ortho());
  return MacroLaw{published_theta_star(), f.e_iso, f.nu_iso, f.t, l_rse, "", ""};
}

Result mapping_invariance(const Campaign& c, const Mat3& t) {
  double worst = 0.0;
  for (const auto& r : c.records) {
    const std::vector<double> w0 = internal_work(r);
    const std::vector<double> w1 = internal_work(map_history(r, t));
    double scale = 0.0;
    for (double w : w0) scale = std::max(scale, std::abs(w));
    for (std::size_t k = 0; k < w0.size(); ++k) worst = std::max(worst, std::abs(w1[k] - w0[k]) / scale);
  }
  return {worst <= kWorkInvarianceTol,
          "max relative change " + fmt("%.2e", worst) + " over " + std::to_string(c.records.size()) + " histories"};
}

std::string calibration_round_trip(double& rel, int& epochs) {
  const double l_rse = 0.008368035779593257;  // default RVE
  const MacroLaw truth = truth_law(l_rse);
  const Campaign synth = synthesize_campaign(truth, LabConfig{});
  Campaign iso = synth;
  for (auto& r : iso.records) r = map_history(r, truth.t);
  const CostFunction cost(iso, truth.E, truth.nu, l_rse);
  const Calibration cal = calibrate(cost, default_theta0(), default_bounds(), OptimizerConfig{});
  rel = cal.final.total / cost.campaign_work();
  epochs = cal.optimizer.epochs;
  return dump_json(to_json(cal)) + trace_csv(cal.optimizer);
}

// ---- 8, 9, 10 ---------------------------------------------------------------

const char* kTable2[26] = {"C/C", "C/C", "C/C", "C/C", "T/C", "T/C", "T/C", "T/C", "T/C", "C/C", "T/C", "T/C", "T/C",
                           "T/C", "T/C", "T/C", "T/T", "T/C", "T/C", "T/C", "T/C", "T/C", "T/T", "T/T", "T/T", "T/T"};

std::string slurp_dir(const std::string& dir, const std::vector<std::string>& names) {
  std::string all;
  for (const auto& n : names) all += n + "\n" + read_text((fs::path(dir) / n).string());
  return all;
}

}  // namespace

int main(int argc, char** argv) {
  std::string out = "acceptance_out";
  bool quick = false;
  for (int i = 1; i < argc; ++i) {
    const std::string a = argv[i];
    if (a == "--quick") quick = true;
    else out = a;
  }
  // The pipeline has no random choices; the seed is fixed and recorded so
  // the determinism check runs under the documented condition.
  setenv("HOMOG_SEED", "20260101", 1);
  const std::string seed = std::getenv("HOMOG_SEED");
  fs::remove_all(out);
  fs::create_directories(out + "/run1");
  fs::create_directories(out + "/run2");
  const int workers = std::max(1, std::min(4, static_cast<int>(std::thread::hardware_concurrency())));
  std::printf("acceptance: out=%s seed=%s workers=%d%s\n", out.c_str(), seed.c_str(), workers, quick ? " quick" : "");

  report(1, "uniaxial equivalent-stress identities", uniaxial_identities);
  report(2, "fracture-energy dissipation", dissipation);
  report(3, "tangent consistency", tangents);

  report(4, "FEM patch test, 26 drives on a 10x10 mesh", [&] {
    double worst = 0.0;
    write_text(out + "/run1/c4.csv", patch_test(worst));
    return Result{worst <= kPatchTol, "max relative stress error " + fmt("%.2e", worst)};
  });

  report(5, "isotropization golden values", [&] {
    write_text(out + "/run1/c5.json", isotropization_artifact());
    return isotropization();
  });

  report(6, "internal work invariant under the mapping", [&] {
    const MacroLaw law = truth_law(0.008368035779593257);
    const Campaign synth = synthesize_campaign(law, LabConfig{});
    std::string dump;
    for (const auto& r : synth.records) {
      for (double w : internal_work(map_history(r, law.t))) dump += fmt("%.17g\n", w);
    }
    write_text(out + "/run1/c6.csv", dump);
    return mapping_invariance(synth, law.t);
  });

  report(7, "calibration round trip from the published start point", [&] {
    double rel = 0.0;
    int epochs = 0;
    write_text(out + "/run1/c7.txt", calibration_round_trip(rel, epochs));
    return Result{rel <= kRoundTripCost && epochs <= 200,
                  "final cost " + fmt("%.4f", 100 * rel) + "% of sum |W| after " + std::to_string(epochs) + " epochs"};
  });

  PipelineConfig cfg = parse_pipeline_config("");
  cfg.out_dir = out + "/pipeline";
  RunOptions opt;
  opt.jobs = workers;
  opt.seed = seed;
  bool campaign_ok = false;

  if (quick) {
    std::printf("SKIP 8 small-RVE campaign (--quick)\nSKIP 9 validation walls (--quick)\n");
  } else {
    report(8, "small-RVE campaign reproduces the stress-state classes", [&] {
      const double t0 = now();
      const Json rve = cmd_rve(cfg, opt);
      cmd_vlab(cfg, opt);
      const double elapsed = now() - t0;
      const Campaign c = read_campaign(cfg.out_dir + "/campaign");
      int complete = 0, matched = 0;
      std::string misses;
      for (const auto& r : c.records) {
        complete += r.status != CaseStatus::Diverged;
        const std::string cls = stress_state_class(r);
        if (cls == kTable2[r.case_id - 1]) ++matched;
        else misses += " " + std::to_string(r.case_id) + ":" + cls;
      }
      campaign_ok = complete == 26;
      const int elements = rve["rve"]["elements"].get<int>();
      char buf[300];
      std::snprintf(buf, sizeof(buf), "%d elements, %d/26 cases completed, %d/26 classes match%s%s, %.0f s on %d workers",
                    elements, complete, matched, misses.empty() ? "" : ", misses", misses.c_str(), elapsed, workers);
      return Result{elements <= 1500 && complete == 26 && matched >= kMinClassified && elapsed <= kCampaignBudgetSeconds,
                    buf};
    });

    report(9, "validation walls, micro vs macro compression", [&] {
      PipelineConfig v = cfg;
      v.validation.scenarios = {"compression"};
      v.validation.models = {"micro", "macro"};
      cmd_isotropize(v, opt);
      const Json cal = cmd_calibrate(v, opt);
      Json val;
      try {
        val = cmd_validate(v, opt);
      } catch (const Error& e) {
        if (e.kind() != ErrorKind::Diverged) throw;
        val = Json::parse(read_text(v.out_dir + "/validation/validation.json"));
      }
      const Json& runs = val["runs"];
      const Json& micro = runs[0]["model"] == "micro" ? runs[0] : runs[1];
      const Json& macro = runs[0]["model"] == "micro" ? runs[1] : runs[0];
      const double k_ratio = macro["initial_stiffness"].get<double>() / micro["initial_stiffness"].get<double>();
      const double p_ratio = macro["peak_fy"].get<double>() / micro["peak_fy"].get<double>();
      const bool elements_ok = micro["elements"].get<int>() <= 2000 && macro["elements"].get<int>() <= 2000;
      char buf[500];
      std::snprintf(buf, sizeof(buf),
                    "stiffness macro/micro %.4f, peak fy macro/micro %.4f (micro %.4g N/m at %.0f%% of the program, "
                    "macro %.4g N/m at %.0f%%), %d + %d elements, calibration cost %.1f%%",
                    k_ratio, p_ratio, micro["peak_fy"].get<double>(), 100 * micro["completed"].get<double>(),
                    macro["peak_fy"].get<double>(), 100 * macro["completed"].get<double>(),
                    micro["elements"].get<int>(), macro["elements"].get<int>(),
                    100 * cal["relative_cost"].get<double>());
      return Result{elements_ok && std::abs(k_ratio - 1.0) <= kStiffnessTol && std::abs(p_ratio - 1.0) <= kPeakTol,
                    buf};
    });
  }

  report(10, "determinism with HOMOG_SEED fixed", [&] {
    double dummy = 0.0;
    int epochs = 0;
    std::vector<std::string> differ;
    if (read_text(out + "/run1/c4.csv") != patch_test(dummy)) differ.push_back("c4");
    if (read_text(out + "/run1/c5.json") != isotropization_artifact()) differ.push_back("c5");
    {
      const MacroLaw law = truth_law(0.008368035779593257);
      const Campaign synth = synthesize_campaign(law, LabConfig{});
      std::string dump;
      for (const auto& r : synth.records) {
        for (double w : internal_work(map_history(r, law.t))) dump += fmt("%.17g\n", w);
      }
      if (read_text(out + "/run1/c6.csv") != dump) differ.push_back("c6");
    }
    if (read_text(out + "/run1/c7.txt") != calibration_round_trip(dummy, epochs)) differ.push_back("c7");
    std::string scope = "criteria 4-7";
    if (campaign_ok) {
      // A subset of the campaign, rerun from scratch in a second directory.
      PipelineConfig again = cfg;
      again.out_dir = out + "/run2/pipeline";
      RunOptions sub = opt;
      sub.cases = {1, 5, 13, 17, 26};
      cmd_rve(again, sub);
      cmd_vlab(again, sub);
      std::vector<std::string> names{"mesh.txt", "rve.json"};
      if (slurp_dir(cfg.out_dir + "/rve", names) != slurp_dir(again.out_dir + "/rve", names)) differ.push_back("rve");
      std::vector<std::string> cases;
      for (int id : sub.cases) cases.push_back(case_file_name(id));
      if (slurp_dir(cfg.out_dir + "/campaign", cases) != slurp_dir(again.out_dir + "/campaign", cases)) {
        differ.push_back("campaign");
      }
      scope += " and campaign cases 1,5,13,17,26";
    }
    std::string d;
    for (const auto& s : differ) d += " " + s;
    return Result{differ.empty(), differ.empty() ? scope + " bitwise identical" : "outputs differ:" + d};
  });

  std::printf("acceptance: %d failing\n", failures);
  return failures == 0 ? 0 : 1;
}
