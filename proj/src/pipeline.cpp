// Copyright 2026 The homog Authors
// SPDX-License-Identifier: Apache-2.0

#include "homog/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <set>

#include "homog/error.hpp"
#include "homog/isotropize.hpp"
#include "homog/macro.hpp"

namespace homog {
namespace fs = std::filesystem;

namespace {

std::string path_in(const std::string& dir, const std::string& name) { return (fs::path(dir) / name).string(); }

void make_dir(const std::string& dir) {
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) fail(ErrorKind::Io, "cannot create directory " + dir + ": " + ec.message());
}

void require_file(const std::string& path, const char* stage) {
  if (!fs::exists(path)) fail(ErrorKind::Io, path + " does not exist; run '" + stage + "' first");
}

Json read_json(const std::string& path) {
  try {
    return Json::parse(read_text(path));
  } catch (const Json::exception& e) {
    fail(ErrorKind::Config, path + ": " + e.what());
  }
}

void report(const RunOptions& opt, const std::string& stage, int done, int total) {
  if (opt.progress) opt.progress(stage, done, total);
}

Json summary_head(const char* command, const PipelineConfig& cfg, const RunOptions& opt) {
  Json j{{"command", command}, {"out_dir", cfg.out_dir}};
  if (!opt.seed.empty()) j["seed"] = opt.seed;
  return j;
}

std::string rve_dir(const PipelineConfig& c) { return path_in(c.out_dir, "rve"); }
std::string campaign_dir(const PipelineConfig& c) { return path_in(c.out_dir, "campaign"); }
std::string calibration_dir(const PipelineConfig& c) { return path_in(c.out_dir, "calibration"); }

std::string file_hash(const std::string& path) { return hex64(fnv1a(read_text(path))); }

/// Inputs a stored case depends on. The worker count is not one of them.
std::string case_hash(const Json& campaign_cfg, std::uint64_t mesh, const MaterialParams& brick,
                      const MaterialParams& mortar, const StrainV& direction) {
  Json lab = campaign_cfg;
  lab.erase("jobs");
  const Json key{{"mesh", hex64(mesh)},
                 {"brick", to_json(brick)},
                 {"mortar", to_json(mortar)},
                 {"campaign", lab},
                 {"direction", to_json(direction)}};
  return hex64(fnv1a(dump_json(key)));
}

std::vector<int> requested_cases(const RunOptions& opt) {
  if (!opt.cases.empty()) return opt.cases;
  std::vector<int> all(26);
  for (int i = 0; i < 26; ++i) all[i] = i + 1;
  return all;
}

WallProgram scenario_program(const ValidationConfig& v, const std::string& scenario) {
  WallProgram p = v.program;
  if (scenario == "compression") {
    p.test = WallTest::Compression;
  } else {
    p.test = WallTest::ShearCompression;
    if (scenario == "shear_extra") p.precompression *= v.extra_precompression;
  }
  return p;
}

std::string snapshot_name(int step) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "step_%04d.csv", step);
  return buf;
}

std::string series_csv(const std::vector<std::string>& columns, const std::vector<std::vector<double>>& data) {
  std::string out;
  for (std::size_t c = 0; c < columns.size(); ++c) out += (c ? "," : "") + columns[c];
  out += '\n';
  std::size_t rows = 0;
  for (const auto& col : data) rows = std::max(rows, col.size());
  char buf[32];
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < data.size(); ++c) {
      if (c) out += ',';
      if (r < data[c].size()) {
        std::snprintf(buf, sizeof(buf), "%.17g", data[c][r]);
        out += buf;
      }
    }
    out += '\n';
  }
  return out;
}

std::string case_tag(int id) {
  char buf[16];
  std::snprintf(buf, sizeof(buf), "case_%02d", id);
  return buf;
}

}  // namespace

std::vector<int> parse_case_list(const std::string& text) {
  std::vector<int> out;
  std::set<int> seen;
  std::size_t pos = 0;
  auto bad = [&](const std::string& item) {
    fail(ErrorKind::InvalidArgument, "bad case list entry '" + item + "' (ids 1-26, e.g. 1,13,20-22)");
  };
  auto number = [&](const std::string& s, const std::string& item) {
    if (s.empty() || s.find_first_not_of("0123456789") != std::string::npos || s.size() > 3) bad(item);
    const int v = std::stoi(s);
    if (v < 1 || v > 26) bad(item);
    return v;
  };
  while (pos < text.size()) {
    std::size_t comma = text.find(',', pos);
    if (comma == std::string::npos) comma = text.size();
    std::string item = text.substr(pos, comma - pos);
    item.erase(std::remove(item.begin(), item.end(), ' '), item.end());
    pos = comma + 1;
    if (item.empty()) continue;
    const std::size_t dash = item.find('-');
    int lo = 0, hi = 0;
    if (dash == std::string::npos) {
      lo = hi = number(item, item);
    } else {
      lo = number(item.substr(0, dash), item);
      hi = number(item.substr(dash + 1), item);
      if (hi < lo) bad(item);
    }
    for (int v = lo; v <= hi; ++v) {
      if (seen.insert(v).second) out.push_back(v);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

Json cmd_rve(const PipelineConfig& cfg, const RunOptions& opt) {
  const Mesh mesh = generate_flemish_rve(cfg.geometry);
  const std::string dir = rve_dir(cfg);
  make_dir(dir);
  write_mesh(mesh, path_in(dir, "mesh.txt"));
  const CharacteristicLengths len = characteristic_lengths(mesh);
  const Json rve{{"elements", mesh.num_elements()},
                 {"nodes", mesh.num_nodes()},
                 {"width", mesh.max_corner().x() - mesh.min_corner().x()},
                 {"height", mesh.max_corner().y() - mesh.min_corner().y()},
                 {"mortar_fraction", mortar_fraction(mesh)},
                 {"brick_fraction", 1.0 - mortar_fraction(mesh)},
                 {"l_rse", len.l_rse},
                 {"mesh_hash", hex64(mesh_hash(mesh))},
                 {"units", {{"width", "m"}, {"height", "m"}, {"l_rse", "m"}}}};
  write_text(path_in(dir, "rve.json"), dump_json(rve));
  report(opt, "rve", 1, 1);
  Json s = summary_head("rve", cfg, opt);
  s["rve"] = rve;
  s["files"] = {path_in(dir, "mesh.txt"), path_in(dir, "rve.json")};
  return s;
}

Json cmd_vlab(const PipelineConfig& cfg, const RunOptions& opt) {
  const std::string mesh_path = path_in(rve_dir(cfg), "mesh.txt");
  require_file(mesh_path, "rve");
  const Mesh mesh = read_mesh(mesh_path);
  const std::uint64_t mhash = mesh_hash(mesh);
  const std::string dir = campaign_dir(cfg);
  make_dir(dir);

  LabConfig lab = cfg.lab;
  if (opt.jobs > 0) lab.jobs = opt.jobs;
  const Json lab_json = to_json(cfg).at("campaign");
  const std::vector<StrainV> directions = strain_directions();
  const std::vector<int> ids = requested_cases(opt);

  std::vector<int> todo;
  std::vector<int> reused;
  for (int id : ids) {
    const std::string csv = path_in(dir, case_file_name(id));
    const std::string sidecar = path_in(dir, case_tag(id) + ".hash");
    const std::string want = case_hash(lab_json, mhash, cfg.brick, cfg.mortar, directions[id - 1]);
    bool ok = fs::exists(csv) && fs::exists(sidecar);
    if (ok) {
      const Json side = read_json(sidecar);
      ok = side.value("inputs", "") == want && side.value("csv", "") == file_hash(csv);
    }
    (ok ? reused : todo).push_back(id);
  }

  std::map<int, CaseStatus> status;
  for (int id : reused) status[id] = read_json(path_in(dir, case_tag(id) + ".hash")).value("status", "") == "complete"
                                         ? CaseStatus::Complete
                                         : CaseStatus::Capped;
  int done = static_cast<int>(reused.size());
  report(opt, "vlab", done, static_cast<int>(ids.size()));
  std::vector<int> failed_first_step;
  if (!todo.empty()) {
    run_campaign(mesh, cfg.brick, cfg.mortar, lab, todo, [&](const HistoryRecord& r) {
      const std::string csv = path_in(dir, case_file_name(r.case_id));
      write_case_csv(r, csv);
      status[r.case_id] = r.status;
      if (r.status == CaseStatus::Diverged && r.steps.empty()) failed_first_step.push_back(r.case_id);
      // Diverged cases are rerun next time.
      if (r.status != CaseStatus::Diverged) {
        const Json side{{"inputs", case_hash(lab_json, mhash, cfg.brick, cfg.mortar, r.direction)},
                        {"csv", file_hash(csv)},
                        {"status", to_string(r.status)}};
        write_text(path_in(dir, case_tag(r.case_id) + ".hash"), dump_json(side));
      }
      report(opt, "vlab", ++done, static_cast<int>(ids.size()));
    });
  }

  Campaign c;
  c.mesh_hash = mhash;
  c.brick = cfg.brick;
  c.mortar = cfg.mortar;
  c.l_rse = characteristic_lengths(mesh).l_rse;
  for (int id : ids) {
    HistoryRecord r = read_case_csv(path_in(dir, case_file_name(id)), id, directions[id - 1]);
    r.status = status[id];
    r.l_rse = c.l_rse;
    c.records.push_back(std::move(r));
  }
  write_manifest(c, dir);

  Json s = summary_head("vlab", cfg, opt);
  Json cases = Json::array();
  for (const auto& r : c.records) {
    cases.push_back({{"id", r.case_id},
                     {"status", to_string(r.status)},
                     {"steps", r.steps.size()},
                     {"class", r.steps.empty() ? "" : stress_state_class(r)}});
  }
  s["cases"] = cases;
  s["reused"] = reused;
  s["l_rse"] = c.l_rse;
  s["manifest_hash"] = file_hash(path_in(dir, "manifest.json"));
  if (!failed_first_step.empty()) {
    std::sort(failed_first_step.begin(), failed_first_step.end());
    std::string list;
    for (int id : failed_first_step) list += (list.empty() ? "" : ",") + std::to_string(id);
    fail(ErrorKind::Diverged, "cases " + list + " diverged at the first load step");
  }
  return s;
}

Json cmd_isotropize(const PipelineConfig& cfg, const RunOptions& opt) {
  const std::string dir = campaign_dir(cfg);
  require_file(path_in(dir, "manifest.json"), "vlab");
  const Campaign c = read_campaign(dir);
  const ElasticityFit fit = fit_elasticity(c);
  Json j = to_json(fit);
  j["campaign_hash"] = file_hash(path_in(dir, "manifest.json"));
  j["cases"] = c.records.size();
  j["units"] = {{"C", "Pa"}, {"E", "Pa"}, {"T", "-"}};
  make_dir(cfg.out_dir);
  write_text(path_in(cfg.out_dir, "fit.json"), dump_json(j));
  report(opt, "isotropize", 1, 1);
  Json s = summary_head("isotropize", cfg, opt);
  s["fit"] = j;
  return s;
}

Json cmd_calibrate(const PipelineConfig& cfg, const RunOptions& opt) {
  const std::string cdir = campaign_dir(cfg);
  const std::string fit_path = path_in(cfg.out_dir, "fit.json");
  require_file(path_in(cdir, "manifest.json"), "vlab");
  require_file(fit_path, "isotropize");
  const Json fit = read_json(fit_path);
  if (!fit.contains("T")) fail(ErrorKind::Config, fit_path + ": missing field 'T'");
  const Mat3 t = mat3_from_json(fit.at("T"), "T");
  const double e = require_number(fit, "E");
  const double nu = require_number(fit, "nu");

  const Campaign c = read_campaign(cdir);
  Campaign iso = c;
  for (auto& r : iso.records) r = map_history(r, t);

  CostOptions co = cfg.cost;
  co.deploy_length = effective_deploy_length(cfg);
  if (opt.jobs > 0) co.jobs = opt.jobs;
  const CostFunction cost(iso, e, nu, c.l_rse, co);

  report(opt, "calibrate", 0, cfg.optimizer.max_epochs);
  const Calibration cal = calibrate(cost, cfg.theta0, cfg.bounds, cfg.optimizer);
  report(opt, "calibrate", cal.optimizer.epochs, cfg.optimizer.max_epochs);

  const std::string dir = calibration_dir(cfg);
  make_dir(dir);
  const std::string campaign_hash = file_hash(path_in(cdir, "manifest.json"));
  const std::string fit_hash = file_hash(fit_path);

  Json report_json = to_json(cal);
  report_json["E"] = e;
  report_json["nu"] = nu;
  report_json["l_rse"] = c.l_rse;
  report_json["deploy_length"] = co.deploy_length;
  report_json["deploy_margin"] = co.deploy_margin;
  report_json["campaign_hash"] = campaign_hash;
  report_json["fit_hash"] = fit_hash;
  write_text(path_in(dir, "calibration.json"), dump_json(report_json));
  write_text(path_in(dir, "trace.csv"), trace_csv(cal.optimizer));

  const MacroLaw law{cal.theta_star, e, nu, t, c.l_rse, campaign_hash, fit_hash};
  write_text(path_in(dir, "law.json"), dump_json(export_law(law)));

  // Replayed histories back in the physical space, for the plots.
  Campaign replay = cost.replay(cal.theta_star);
  const Mat3 t_inv = t.inverse();
  for (auto& r : replay.records) r = map_history(r, t_inv);
  replay.mesh_hash = c.mesh_hash;
  replay.brick = c.brick;
  replay.mortar = c.mortar;
  replay.l_rse = c.l_rse;
  const std::string rdir = path_in(dir, "replay");
  make_dir(rdir);
  for (const auto& r : replay.records) write_case_csv(r, path_in(rdir, case_file_name(r.case_id)));
  write_manifest(replay, rdir);

  Json s = summary_head("calibrate", cfg, opt);
  s["theta_star"] = to_json(cal.theta_star);
  s["cost"] = cal.final.total;
  s["relative_cost"] = cal.final.total / cost.campaign_work();
  s["epochs"] = cal.optimizer.epochs;
  s["accepted_steps"] = cal.optimizer.trace.size() - 1;
  s["evaluations"] = cal.optimizer.evaluations;
  s["stop_reason"] = to_string(cal.optimizer.reason);
  s["deploy_length"] = co.deploy_length;
  s["max_length"] = law.max_length();
  return s;
}

Json cmd_validate(const PipelineConfig& cfg, const RunOptions& opt) {
  const std::string law_path = path_in(calibration_dir(cfg), "law.json");
  require_file(law_path, "calibrate");
  const MacroLaw law = import_law(read_json(law_path));
  const ValidationConfig& v = cfg.validation;
  const std::string dir = path_in(cfg.out_dir, "validation");
  make_dir(dir);

  SolverOptions solver = v.solver;
  if (opt.jobs > 0) solver.threads = opt.jobs;

  Json runs = Json::array();
  std::string early;
  for (const std::string& scenario : v.scenarios) {
    const WallProgram program = scenario_program(v, scenario);
    const int total = static_cast<int>(wall_program_path(program).size());
    for (const std::string& model : v.models) {
      Mesh mesh;
      LawTable laws;
      if (model == "micro") {
        FlemishGeometry g = cfg.geometry;
        g.resolution = v.micro_resolution;
        g.max_element_size = v.micro_max_element_size;
        mesh = generate_flemish_wall(g, v.width, v.height);
        laws = micro_laws(mesh, cfg.brick, cfg.mortar);
      } else {
        mesh = generate_grid(v.width, v.height, v.macro_nx, v.macro_ny);
        laws = macro_laws(mesh, law);
      }
      const std::string name = scenario + "_" + model;
      const std::string snap_dir = path_in(path_in(dir, "snapshots"), name);
      if (v.snapshots) {
        std::error_code ec;
        fs::remove_all(snap_dir, ec);
        make_dir(snap_dir);
      }
      const std::string stage = "validate:" + name;
      report(opt, stage, 0, total);
      const WallRun run = run_wall(mesh, laws, program, solver, [&](int step, const FemModel& m, const FieldState& st) {
        if (v.snapshots) write_text(path_in(snap_dir, snapshot_name(step)), damage_snapshot_csv(m, st));
        report(opt, stage, step, total);
      });
      write_text(path_in(dir, name + ".csv"), wall_curve_csv(run));
      const double peak_fx = [&] {
        double p = 0.0;
        for (const auto& pt : run.curve) p = std::max(p, std::abs(pt.fx));
        return p;
      }();
      runs.push_back({{"scenario", scenario},
                      {"model", model},
                      {"elements", mesh.num_elements()},
                      {"steps", run.curve.size()},
                      {"completed", run.completed},
                      {"diverged", run.diverged},
                      {"relaxed_steps", run.relaxed_steps},
                      {"explicit_steps", run.explicit_steps},
                      {"initial_stiffness", initial_stiffness(run)},
                      {"peak_fy", peak_vertical_reaction(run)},
                      {"peak_fx", peak_fx},
                      {"curve", name + ".csv"}});
      if (run.completed < 0.1 && early.empty()) {
        early = name + " stopped at " + std::to_string(100.0 * run.completed) + "% of its displacement program";
      }
    }
  }

  Json comparisons = Json::array();
  for (const std::string& scenario : v.scenarios) {
    const Json* micro = nullptr;
    const Json* macro = nullptr;
    for (const Json& r : runs) {
      if (r["scenario"] != scenario) continue;
      (r["model"] == "micro" ? micro : macro) = &r;
    }
    if (!micro || !macro) continue;
    auto ratio = [](double a, double b) { return b != 0.0 ? a / b : 0.0; };
    comparisons.push_back(
        {{"scenario", scenario},
         {"stiffness_ratio",
          ratio((*macro)["initial_stiffness"].get<double>(), (*micro)["initial_stiffness"].get<double>())},
         {"peak_fy_ratio", ratio((*macro)["peak_fy"].get<double>(), (*micro)["peak_fy"].get<double>())}});
  }

  const Json out{{"law_hash", file_hash(law_path)},
                 {"width", v.width},
                 {"height", v.height},
                 {"runs", runs},
                 {"comparisons", comparisons},
                 {"units", {{"force", "N per m thickness"}, {"displacement", "m"}, {"stiffness", "N/m per m"}}}};
  write_text(path_in(dir, "validation.json"), dump_json(out));
  if (!early.empty()) fail(ErrorKind::Diverged, early);
  Json s = summary_head("validate", cfg, opt);
  s["runs"] = runs;
  s["comparisons"] = comparisons;
  return s;
}

Json cmd_plot(const PipelineConfig& cfg, const RunOptions& opt) {
  const std::string cdir = campaign_dir(cfg);
  require_file(path_in(cdir, "manifest.json"), "vlab");
  const Campaign micro = read_campaign(cdir);
  const std::string rdir = path_in(calibration_dir(cfg), "replay");
  const bool have_replay = fs::exists(path_in(rdir, "manifest.json"));
  Campaign macro;
  if (have_replay) macro = read_campaign(rdir);

  const std::string dir = path_in(cfg.out_dir, "plots");
  make_dir(dir);
  std::vector<const HistoryRecord*> chosen;
  for (const auto& r : micro.records) {
    if (opt.cases.empty() || std::count(opt.cases.begin(), opt.cases.end(), r.case_id)) chosen.push_back(&r);
  }

  Json files = Json::array();
  int done = 0;
  for (const HistoryRecord* r : chosen) {
    const HistoryRecord* m = nullptr;
    for (const auto& x : macro.records) {
      if (x.case_id == r->case_id) m = &x;
    }
    const std::string tag = case_tag(r->case_id);

    auto columns = [](const HistoryRecord& h) {
      std::vector<std::vector<double>> c(4);
      for (const auto& s : h.steps) {
        c[0].push_back(s.t);
        c[1].push_back(s.stress.sxx);
        c[2].push_back(s.stress.syy);
        c[3].push_back(s.stress.sxy);
      }
      return c;
    };
    const auto mc = columns(*r);
    std::vector<PlotSeries> stress{{"sxx micro", mc[0], mc[1], false},
                                   {"syy micro", mc[0], mc[2], false},
                                   {"sxy micro", mc[0], mc[3], false}};
    std::vector<std::string> stress_cols{"t", "sxx_micro", "syy_micro", "sxy_micro"};
    std::vector<std::vector<double>> stress_data = mc;
    const std::vector<double> w_micro = internal_work(*r);
    std::vector<PlotSeries> work{{"W micro", mc[0], w_micro, false}};
    std::vector<std::string> work_cols{"t", "W_micro"};
    std::vector<std::vector<double>> work_data{mc[0], w_micro};
    if (m) {
      const auto rc = columns(*m);
      stress.push_back({"sxx macro", rc[0], rc[1], true});
      stress.push_back({"syy macro", rc[0], rc[2], true});
      stress.push_back({"sxy macro", rc[0], rc[3], true});
      stress_cols.insert(stress_cols.end(), {"sxx_macro", "syy_macro", "sxy_macro"});
      stress_data.insert(stress_data.end(), {rc[1], rc[2], rc[3]});
      const std::vector<double> w_macro = internal_work(*m);
      work.push_back({"W macro", rc[0], w_macro, true});
      work_cols.push_back("W_macro");
      work_data.push_back(w_macro);
    }
    const std::string title = "Case " + std::to_string(r->case_id);
    write_text(path_in(dir, "stress_" + tag + ".svg"), render_svg(title + " stress", "load factor", "stress [Pa]", stress));
    write_text(path_in(dir, "stress_" + tag + ".csv"), series_csv(stress_cols, stress_data));
    write_text(path_in(dir, "work_" + tag + ".svg"),
               render_svg(title + " internal work", "load factor", "work density [J/m^3]", work));
    write_text(path_in(dir, "work_" + tag + ".csv"), series_csv(work_cols, work_data));
    for (const char* kind : {"stress_", "work_"}) {
      files.push_back(std::string(kind) + tag + ".svg");
      files.push_back(std::string(kind) + tag + ".csv");
    }
    report(opt, "plot", ++done, static_cast<int>(chosen.size()));
  }
  const Json index{{"replay", have_replay}, {"files", files}};
  write_text(path_in(dir, "index.json"), dump_json(index));
  Json s = summary_head("plot", cfg, opt);
  s["plots"] = files.size() / 2;
  s["replay"] = have_replay;
  s["dir"] = dir;
  return s;
}

std::string render_svg(const std::string& title, const std::string& x_label, const std::string& y_label,
                       const std::vector<PlotSeries>& series) {
  constexpr double kW = 720, kH = 440, kLeft = 90, kRight = 170, kTop = 40, kBottom = 60;
  static const char* colors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#8c564b"};
  double x0 = 0, x1 = 1, y0 = 0, y1 = 1;
  bool any = false;
  for (const auto& s : series) {
    for (std::size_t i = 0; i < std::min(s.x.size(), s.y.size()); ++i) {
      if (!std::isfinite(s.x[i]) || !std::isfinite(s.y[i])) continue;
      if (!any) {
        x0 = x1 = s.x[i];
        y0 = y1 = s.y[i];
        any = true;
      }
      x0 = std::min(x0, s.x[i]);
      x1 = std::max(x1, s.x[i]);
      y0 = std::min(y0, s.y[i]);
      y1 = std::max(y1, s.y[i]);
    }
  }
  if (x1 == x0) x1 = x0 + 1.0;
  if (y1 == y0) y1 = y0 + 1.0;
  const double pw = kW - kLeft - kRight, ph = kH - kTop - kBottom;
  auto px = [&](double x) { return kLeft + (x - x0) / (x1 - x0) * pw; };
  auto py = [&](double y) { return kTop + (1.0 - (y - y0) / (y1 - y0)) * ph; };
  auto escape = [](const std::string& s) {
    std::string o;
    for (char c : s) {
      if (c == '<') o += "&lt;";
      else if (c == '>') o += "&gt;";
      else if (c == '&') o += "&amp;";
      else o += c;
    }
    return o;
  };

  char buf[256];
  std::string out;
  std::snprintf(buf, sizeof(buf),
                "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"%g\" height=\"%g\" font-family=\"sans-serif\" "
                "font-size=\"12\">\n",
                kW, kH);
  out += buf;
  out += "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
  std::snprintf(buf, sizeof(buf), "<rect x=\"%g\" y=\"%g\" width=\"%g\" height=\"%g\" fill=\"none\" stroke=\"black\"/>\n",
                kLeft, kTop, pw, ph);
  out += buf;
  for (int k = 0; k <= 4; ++k) {
    const double xv = x0 + (x1 - x0) * k / 4.0, yv = y0 + (y1 - y0) * k / 4.0;
    std::snprintf(buf, sizeof(buf), "<text x=\"%g\" y=\"%g\" text-anchor=\"middle\">%.3g</text>\n", px(xv),
                  kTop + ph + 16, xv);
    out += buf;
    std::snprintf(buf, sizeof(buf), "<text x=\"%g\" y=\"%g\" text-anchor=\"end\">%.3g</text>\n", kLeft - 6, py(yv) + 4,
                  yv);
    out += buf;
  }
  if (y0 < 0 && y1 > 0) {
    std::snprintf(buf, sizeof(buf), "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"#bbb\"/>\n", kLeft, py(0),
                  kLeft + pw, py(0));
    out += buf;
  }
  out += "<text x=\"" + std::to_string(kLeft + pw / 2) + "\" y=\"24\" text-anchor=\"middle\" font-size=\"15\">" +
         escape(title) + "</text>\n";
  out += "<text x=\"" + std::to_string(kLeft + pw / 2) + "\" y=\"" + std::to_string(kH - 16) +
         "\" text-anchor=\"middle\">" + escape(x_label) + "</text>\n";
  out += "<text transform=\"translate(18," + std::to_string(kTop + ph / 2) +
         ") rotate(-90)\" text-anchor=\"middle\">" + escape(y_label) + "</text>\n";

  // Solid and dashed series of the same quantity share a colour.
  int solid = 0, dashed = 0;
  for (std::size_t s = 0; s < series.size(); ++s) {
    const PlotSeries& ps = series[s];
    const char* color = colors[(ps.dashed ? dashed++ : solid++) % 6];
    out += "<polyline fill=\"none\" stroke=\"";
    out += color;
    out += ps.dashed ? "\" stroke-dasharray=\"6,4\"" : "\"";
    out += " stroke-width=\"1.6\" points=\"";
    for (std::size_t i = 0; i < std::min(ps.x.size(), ps.y.size()); ++i) {
      if (!std::isfinite(ps.x[i]) || !std::isfinite(ps.y[i])) continue;
      std::snprintf(buf, sizeof(buf), "%.2f,%.2f ", px(ps.x[i]), py(ps.y[i]));
      out += buf;
    }
    out += "\"/>\n";
    const double ly = kTop + 14 + 18.0 * static_cast<double>(s);
    std::snprintf(buf, sizeof(buf), "<line x1=\"%g\" y1=\"%g\" x2=\"%g\" y2=\"%g\" stroke=\"%s\"%s stroke-width=\"1.6\"/>\n",
                  kLeft + pw + 12, ly, kLeft + pw + 42, ly, color, ps.dashed ? " stroke-dasharray=\"6,4\"" : "");
    out += buf;
    out += "<text x=\"" + std::to_string(kLeft + pw + 48) + "\" y=\"" + std::to_string(ly + 4) + "\">" +
           escape(ps.label) + "</text>\n";
  }
  out += "</svg>\n";
  return out;
}

}  // namespace homog
