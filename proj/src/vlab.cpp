// Copyright 2026 The homog Authors
// SPDX-License-Identifier: Apache-2.0

#include "homog/vlab.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include "homog/error.hpp"
#include "homog/json_io.hpp"

namespace homog {

const char* to_string(CaseStatus s) {
  switch (s) {
    case CaseStatus::Complete: return "complete";
    case CaseStatus::Capped: return "capped";
    case CaseStatus::Diverged: return "diverged";
  }
  return "unknown";
}

std::vector<StrainV> strain_directions() {
  const double r2 = std::sqrt(2.0);
  const double s2 = 1.0 / std::sqrt(2.0);
  const double s5 = 1.0 / std::sqrt(5.0);
  const double s7 = 1.0 / std::sqrt(7.0);
  return {
      {-1, 0, 0},                   // 1
      {-s2, -s2, 0},                // 2
      {-r2 * s7, -s7, -2 * s7},     // 3
      {-r2 * s7, -s7, 2 * s7},      // 4
      {-s5, 0, -2 * s5},            // 5
      {-s5, 0, 2 * s5},             // 6
      {-r2 * s7, s7, -2 * s7},      // 7
      {-r2 * s7, s7, 2 * s7},       // 8
      {-s2, s2, 0},                 // 9
      {0, -1, 0},                   // 10
      {0, -s5, -2 * s5},            // 11
      {0, -s5, 2 * s5},             // 12
      {0, 0, -1},                   // 13
      {0, 0, 1},                    // 14
      {0, s5, -2 * s5},             // 15
      {0, s5, 2 * s5},              // 16
      {0, 1, 0},                    // 17
      {s2, -s2, 0},                 // 18
      {r2 * s7, -s7, -2 * s7},      // 19
      {r2 * s7, -s7, 2 * s7},       // 20
      {s5, 0, -2 * s5},             // 21
      {s5, 0, 2 * s5},              // 22
      {r2 * s7, s7, -2 * s7},       // 23
      {r2 * s7, s7, 2 * s7},        // 24
      {s2, s2, 0},                  // 25
      {1, 0, 0},                    // 26
  };
}

bool is_compressive_direction(const StrainV& d) {
  const double center = 0.5 * (d.exx + d.eyy);
  const double radius = std::hypot(0.5 * (d.exx - d.eyy), 0.5 * d.gxy);
  return center + radius <= 1e-12;
}

std::vector<double> load_schedule(const LabConfig& cfg, const StrainV& direction) {
  const double lmax = is_compressive_direction(direction) ? cfg.lambda_max_compression : cfg.lambda_max_tension;
  if (!(cfg.lambda_first > 0.0) || !(lmax > cfg.lambda_first) || cfg.steps < 2) {
    fail(ErrorKind::InvalidArgument, "load schedule needs 0 < lambda_first < lambda_max and at least 2 steps");
  }
  std::vector<double> out(cfg.steps);
  const int n = cfg.steps - 1;
  for (int k = 0; k <= n; ++k) {
    const double s = static_cast<double>(k) / n;
    out[k] = cfg.schedule == Schedule::Geometric ? cfg.lambda_first * std::pow(lmax / cfg.lambda_first, s)
                                                 : cfg.lambda_first + (lmax - cfg.lambda_first) * s;
  }
  out.back() = lmax;
  return out;
}

HistoryRecord run_experiment(const Mesh& mesh, const LawTable& laws, int case_id, const StrainV& direction,
                             const LabConfig& cfg) {
  if (std::abs(direction.norm() - 1.0) > 1e-12) fail(ErrorKind::InvalidArgument, "strain direction must be unit norm");
  HistoryRecord rec;
  rec.case_id = case_id;
  rec.direction = direction;
  rec.l_rse = characteristic_lengths(mesh).l_rse;
  rec.status = CaseStatus::Capped;

  FemModel model(mesh, laws, boundary_dofs(mesh), cfg.solver);
  FieldState state = model.initial_state();
  Eigen::VectorXd current = Eigen::VectorXd::Zero(model.constrained().size());
  double peak = 0.0;
  double peak_reaction = 0.0;
  for (double lambda : load_schedule(cfg, direction)) {
    const Eigen::VectorXd target = affine_boundary_values(mesh, model.constrained(), direction, lambda);
    const SolveReport r = model.advance(state, current, target, cfg.reaction_floor_ratio * peak_reaction);
    if (!r.converged) {
      rec.status = CaseStatus::Diverged;
      break;
    }
    current = target;
    HistoryStep step;
    step.t = lambda;
    step.strain = lambda * direction;
    step.stress = model.upscale(state);
    rec.steps.push_back(step);
    peak_reaction = std::max(peak_reaction, model.reactions(state).norm());
    const double s = step.stress.norm();
    peak = std::max(peak, s);
    if (rec.steps.size() > 1 && s < cfg.failure_ratio * peak) {
      rec.status = CaseStatus::Complete;
      break;
    }
  }
  return rec;
}

Campaign run_campaign(const Mesh& mesh, const MaterialParams& brick, const MaterialParams& mortar,
                      const LabConfig& cfg, const std::vector<int>& cases,
                      const std::function<void(const HistoryRecord&)>& on_done) {
  const std::vector<StrainV> dirs = strain_directions();
  std::vector<int> ids = cases;
  if (ids.empty()) {
    for (int i = 1; i <= static_cast<int>(dirs.size()); ++i) ids.push_back(i);
  }
  for (int id : ids) {
    if (id < 1 || id > static_cast<int>(dirs.size())) fail(ErrorKind::InvalidArgument, "case id out of range: " + std::to_string(id));
  }

  Campaign c;
  c.mesh_hash = mesh_hash(mesh);
  c.brick = brick;
  c.mortar = mortar;
  c.l_rse = characteristic_lengths(mesh).l_rse;

  const LawTable laws = micro_laws(mesh, brick, mortar);
  std::map<int, HistoryRecord> done;
  std::mutex lock;
  std::atomic<std::size_t> next{0};
  std::exception_ptr error;
  auto worker = [&] {
    for (std::size_t i = next++; i < ids.size(); i = next++) {
      try {
        HistoryRecord rec = run_experiment(mesh, laws, ids[i], dirs[ids[i] - 1], cfg);
        std::lock_guard<std::mutex> g(lock);
        if (on_done) on_done(rec);
        done[rec.case_id] = std::move(rec);
      } catch (...) {
        std::lock_guard<std::mutex> g(lock);
        if (!error) error = std::current_exception();
      }
    }
  };
  const int workers = std::max(1, std::min<int>(cfg.jobs, static_cast<int>(ids.size())));
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& t : pool) t.join();
  }
  if (error) std::rethrow_exception(error);
  for (auto& [id, rec] : done) c.records.push_back(std::move(rec));
  return c;
}

std::vector<double> internal_work(const HistoryRecord& h) {
  std::vector<double> w;
  w.reserve(h.steps.size());
  double acc = 0.0;
  Vec3 prev_s = Vec3::Zero();
  Vec3 prev_e = Vec3::Zero();
  for (const auto& st : h.steps) {
    const Vec3 s = st.stress.vec();
    const Vec3 e = st.strain.vec();
    acc += 0.5 * (s + prev_s).dot(e - prev_e);
    w.push_back(acc);
    prev_s = s;
    prev_e = e;
  }
  return w;
}

std::string stress_state_class(const HistoryRecord& h) {
  if (h.steps.empty()) return "";
  // Last step of the initial linear branch: the secant |sigma|/t has not yet
  // dropped by 1%.
  const auto secant = [&](std::size_t i) { return h.steps[i].stress.norm() / h.steps[i].t; };
  const double initial = secant(0);
  std::size_t at = 0;
  while (at + 1 < h.steps.size() && secant(at + 1) >= 0.99 * initial) ++at;
  const StressV& s = h.steps[at].stress;
  const PrincipalPair pp = principal_decomposition(s);
  const double tol = 1e-9 * s.norm();
  if (pp.min > tol) return "T/T";
  if (pp.max <= tol) return "C/C";
  return "T/C";
}

std::string case_file_name(int case_id) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "case_%02d.csv", case_id);
  return buf;
}

void write_case_csv(const HistoryRecord& h, const std::string& path) {
  std::string out = "t,exx,eyy,gxy,sxx,syy,sxy\n";
  char buf[256];
  for (const auto& s : h.steps) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g,%.17g,%.17g,%.17g,%.17g,%.17g\n", s.t, s.strain.exx, s.strain.eyy,
                  s.strain.gxy, s.stress.sxx, s.stress.syy, s.stress.sxy);
    out += buf;
  }
  write_text(path, out);
}

HistoryRecord read_case_csv(const std::string& path, int case_id, const StrainV& direction) {
  std::istringstream in(read_text(path));
  std::string line;
  if (!std::getline(in, line)) fail(ErrorKind::MalformedCsv, path + ": empty file");
  const std::vector<std::string> expected{"t", "exx", "eyy", "gxy", "sxx", "syy", "sxy"};
  std::vector<std::string> header;
  {
    std::stringstream hs(line);
    std::string cell;
    while (std::getline(hs, cell, ',')) {
      while (!cell.empty() && (cell.back() == '\r' || cell.back() == ' ')) cell.pop_back();
      header.push_back(cell);
    }
  }
  for (std::size_t i = 0; i < expected.size(); ++i) {
    if (i >= header.size() || header[i] != expected[i]) {
      fail(ErrorKind::MalformedCsv, path + ": missing column '" + expected[i] + "'");
    }
  }
  HistoryRecord h;
  h.case_id = case_id;
  h.direction = direction;
  int row = 1;
  while (std::getline(in, line)) {
    ++row;
    if (line.empty() || line == "\r") continue;
    double v[7];
    std::stringstream ls(line);
    std::string cell;
    for (int k = 0; k < 7; ++k) {
      if (!std::getline(ls, cell, ',')) fail(ErrorKind::MalformedCsv, path + ": row " + std::to_string(row) + " is short");
      char* end = nullptr;
      v[k] = std::strtod(cell.c_str(), &end);
      if (end == cell.c_str()) {
        fail(ErrorKind::MalformedCsv, path + ": row " + std::to_string(row) + " column '" + expected[k] + "' is not a number");
      }
    }
    h.steps.push_back({v[0], {v[1], v[2], v[3]}, {v[4], v[5], v[6]}});
  }
  return h;
}

void write_manifest(const Campaign& c, const std::string& dir) {
  Json m;
  m["mesh_hash"] = hex64(c.mesh_hash);
  m["l_rse"] = c.l_rse;
  m["materials"] = Json{{"brick", to_json(c.brick)}, {"mortar", to_json(c.mortar)}};
  Json cases = Json::array();
  for (const auto& r : c.records) {
    cases.push_back(Json{{"id", r.case_id},
                         {"direction", to_json(r.direction)},
                         {"status", to_string(r.status)},
                         {"steps", r.steps.size()},
                         {"file", case_file_name(r.case_id)}});
  }
  m["cases"] = cases;
  write_text((std::filesystem::path(dir) / "manifest.json").string(), dump_json(m));
}

Campaign read_campaign(const std::string& dir) {
  const std::string path = (std::filesystem::path(dir) / "manifest.json").string();
  Json m;
  try {
    m = Json::parse(read_text(path));
  } catch (const Json::exception& e) {
    fail(ErrorKind::Config, path + ": " + e.what());
  }
  Campaign c;
  c.l_rse = require_number(m, "l_rse");
  if (m.contains("mesh_hash") && m["mesh_hash"].is_string()) {
    c.mesh_hash = std::stoull(m["mesh_hash"].get<std::string>(), nullptr, 16);
  }
  if (m.contains("materials")) {
    c.brick = material_from_json(m["materials"].at("brick"));
    c.mortar = material_from_json(m["materials"].at("mortar"));
  }
  if (!m.contains("cases") || !m["cases"].is_array()) fail(ErrorKind::Config, path + ": missing field 'cases'");
  for (const auto& entry : m["cases"]) {
    const int id = static_cast<int>(require_number(entry, "id"));
    const auto& d = entry.at("direction");
    const StrainV direction{d.at(0).get<double>(), d.at(1).get<double>(), d.at(2).get<double>()};
    HistoryRecord r =
        read_case_csv((std::filesystem::path(dir) / entry.at("file").get<std::string>()).string(), id, direction);
    r.l_rse = c.l_rse;
    const std::string status = entry.value("status", "complete");
    r.status = status == "diverged" ? CaseStatus::Diverged : status == "capped" ? CaseStatus::Capped : CaseStatus::Complete;
    c.records.push_back(std::move(r));
  }
  return c;
}

}  // namespace homog
