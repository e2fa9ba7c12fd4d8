// Copyright 2026 The homog Authors
// SPDX-License-Identifier: Apache-2.0

#include "homog/homog.h"

#include <map>
#include <memory>
#include <mutex>
#include <new>
#include <string>

#include "homog/error.hpp"
#include "homog/macro.hpp"
#include "homog/pipeline.hpp"

#ifndef HOMOG_VERSION
#define HOMOG_VERSION "0.0.0"
#endif

struct homog_pipeline {
  homog::PipelineConfig config;
  homog::RunOptions options;
  std::string summary = "{}";
  std::string config_json;
};

struct homog_law {
  homog::MacroLaw law;
  mutable std::mutex mu;
  mutable std::map<double, std::shared_ptr<const homog::MacroPointLaw>> points;
};

namespace {

thread_local std::string last_error = "{}";

homog_status status_of(homog::ErrorKind k) {
  using homog::ErrorKind;
  switch (k) {
    case ErrorKind::InvalidArgument: return HOMOG_INVALID_ARGUMENT;
    case ErrorKind::InvalidElastic: return HOMOG_INVALID_ELASTIC;
    case ErrorKind::NotSPD: return HOMOG_NOT_SPD;
    case ErrorKind::OutOfSegment: return HOMOG_OUT_OF_SEGMENT;
    case ErrorKind::SnapBack: return HOMOG_SNAP_BACK;
    case ErrorKind::Geometry: return HOMOG_GEOMETRY;
    case ErrorKind::Diverged: return HOMOG_DIVERGED;
    case ErrorKind::RankDeficient: return HOMOG_RANK_DEFICIENT;
    case ErrorKind::Singular: return HOMOG_SINGULAR;
    case ErrorKind::OutOfBounds: return HOMOG_OUT_OF_BOUNDS;
    case ErrorKind::NoProgress: return HOMOG_NO_PROGRESS;
    case ErrorKind::MalformedCsv: return HOMOG_MALFORMED_CSV;
    case ErrorKind::Config: return HOMOG_CONFIG;
    case ErrorKind::Io: return HOMOG_IO;
  }
  return HOMOG_INTERNAL;
}

homog_status set_error(homog_status s, const std::string& message) {
  // One line, so callers can parse stderr line by line.
  last_error = homog::Json{{"status", homog_status_name(s)}, {"code", static_cast<int>(s)}, {"message", message}}.dump();
  return s;
}

template <class Fn>
homog_status guarded(Fn&& fn) {
  try {
    fn();
    return HOMOG_OK;
  } catch (const homog::Error& e) {
    return set_error(status_of(e.kind()), e.what());
  } catch (const std::bad_alloc&) {
    return set_error(HOMOG_INTERNAL, "out of memory");
  } catch (const std::exception& e) {
    return set_error(HOMOG_INTERNAL, e.what());
  }
}

homog_status null_arg(const char* name) { return set_error(HOMOG_INVALID_ARGUMENT, std::string(name) + " is NULL"); }

}  // namespace

extern "C" {

const char* homog_version(void) { return HOMOG_VERSION; }

const char* homog_status_name(homog_status s) {
  switch (s) {
    case HOMOG_OK: return "ok";
    case HOMOG_INVALID_ARGUMENT: return "invalid_argument";
    case HOMOG_INVALID_ELASTIC: return "invalid_elastic";
    case HOMOG_NOT_SPD: return "not_spd";
    case HOMOG_OUT_OF_SEGMENT: return "out_of_segment";
    case HOMOG_SNAP_BACK: return "snap_back";
    case HOMOG_GEOMETRY: return "geometry";
    case HOMOG_DIVERGED: return "diverged";
    case HOMOG_RANK_DEFICIENT: return "rank_deficient";
    case HOMOG_SINGULAR: return "singular";
    case HOMOG_OUT_OF_BOUNDS: return "out_of_bounds";
    case HOMOG_NO_PROGRESS: return "no_progress";
    case HOMOG_MALFORMED_CSV: return "malformed_csv";
    case HOMOG_CONFIG: return "config";
    case HOMOG_IO: return "io";
    case HOMOG_INTERNAL: return "internal";
  }
  return "unknown";
}

const char* homog_last_error(void) { return last_error.c_str(); }

homog_status homog_pipeline_create(const char* config_path, homog_pipeline** out) {
  if (!out) return null_arg("out");
  *out = nullptr;
  return guarded([&] {
    auto p = std::make_unique<homog_pipeline>();
    p->config = config_path ? homog::load_pipeline_config(config_path) : homog::pipeline_config_from(homog::Json::object());
    *out = p.release();
  });
}

homog_status homog_pipeline_create_from_string(const char* config_text, homog_pipeline** out) {
  if (!out) return null_arg("out");
  if (!config_text) return null_arg("config_text");
  *out = nullptr;
  return guarded([&] {
    auto p = std::make_unique<homog_pipeline>();
    p->config = homog::parse_pipeline_config(config_text);
    *out = p.release();
  });
}

void homog_pipeline_free(homog_pipeline* p) { delete p; }

homog_status homog_pipeline_set_out_dir(homog_pipeline* p, const char* dir) {
  if (!p) return null_arg("pipeline");
  if (!dir || !*dir) return set_error(HOMOG_INVALID_ARGUMENT, "output directory is empty");
  p->config.out_dir = dir;
  return HOMOG_OK;
}

homog_status homog_pipeline_set_jobs(homog_pipeline* p, int jobs) {
  if (!p) return null_arg("pipeline");
  p->options.jobs = jobs > 0 ? jobs : 0;
  return HOMOG_OK;
}

homog_status homog_pipeline_set_cases(homog_pipeline* p, const char* list) {
  if (!p) return null_arg("pipeline");
  return guarded([&] { p->options.cases = list ? homog::parse_case_list(list) : std::vector<int>{}; });
}

homog_status homog_pipeline_set_seed(homog_pipeline* p, const char* seed) {
  if (!p) return null_arg("pipeline");
  p->options.seed = seed ? seed : "";
  return HOMOG_OK;
}

homog_status homog_pipeline_set_progress(homog_pipeline* p, homog_progress_fn fn, void* user) {
  if (!p) return null_arg("pipeline");
  if (!fn) {
    p->options.progress = nullptr;
  } else {
    p->options.progress = [fn, user](const std::string& stage, int done, int total) {
      fn(stage.c_str(), done, total, user);
    };
  }
  return HOMOG_OK;
}

homog_status homog_pipeline_run(homog_pipeline* p, const char* command) {
  if (!p) return null_arg("pipeline");
  if (!command) return null_arg("command");
  return guarded([&] {
    const std::string c = command;
    homog::Json s;
    if (c == "rve") s = homog::cmd_rve(p->config, p->options);
    else if (c == "vlab") s = homog::cmd_vlab(p->config, p->options);
    else if (c == "isotropize") s = homog::cmd_isotropize(p->config, p->options);
    else if (c == "calibrate") s = homog::cmd_calibrate(p->config, p->options);
    else if (c == "validate") s = homog::cmd_validate(p->config, p->options);
    else if (c == "plot") s = homog::cmd_plot(p->config, p->options);
    else homog::fail(homog::ErrorKind::InvalidArgument, "unknown command '" + c + "'");
    p->summary = homog::dump_json(s);
  });
}

const char* homog_pipeline_summary(const homog_pipeline* p) { return p ? p->summary.c_str() : nullptr; }

const char* homog_pipeline_config(homog_pipeline* p) {
  if (!p) return nullptr;
  p->config_json = homog::dump_json(homog::to_json(p->config));
  return p->config_json.c_str();
}

homog_status homog_law_load(const char* path, homog_law** out) {
  if (!out) return null_arg("out");
  if (!path) return null_arg("path");
  *out = nullptr;
  return guarded([&] {
    homog::Json j;
    try {
      j = homog::Json::parse(homog::read_text(path));
    } catch (const homog::Json::exception& e) {
      homog::fail(homog::ErrorKind::Config, std::string(path) + ": " + e.what());
    }
    auto law = std::make_unique<homog_law>();
    law->law = homog::import_law(j);
    *out = law.release();
  });
}

void homog_law_free(homog_law* law) { delete law; }

homog_status homog_law_virgin(const homog_law* law, double state[HOMOG_STATE_SIZE]) {
  if (!law) return null_arg("law");
  if (!state) return null_arg("state");
  const auto v = homog::DamageState::virgin(law->law.material());
  state[0] = v.r_t;
  state[1] = v.r_c;
  state[2] = v.d_t;
  state[3] = v.d_c;
  return HOMOG_OK;
}

homog_status homog_law_max_length(const homog_law* law, double* out) {
  if (!law) return null_arg("law");
  if (!out) return null_arg("out");
  *out = law->law.max_length();
  return HOMOG_OK;
}

homog_status homog_law_integrate(const homog_law* law, double l_macro, const double strain[3],
                                 double state[HOMOG_STATE_SIZE], double stress[3]) {
  if (!law) return null_arg("law");
  if (!strain || !state || !stress) return null_arg("strain, state or stress");
  if (!(l_macro > 0.0)) return set_error(HOMOG_INVALID_ARGUMENT, "element length must be positive");
  return guarded([&] {
    std::shared_ptr<const homog::MacroPointLaw> point;
    {
      std::lock_guard<std::mutex> lock(law->mu);
      auto& slot = law->points[l_macro];
      if (!slot) slot = std::make_shared<const homog::MacroPointLaw>(law->law, l_macro);
      point = slot;
    }
    const homog::DamageState in{state[0], state[1], state[2], state[3]};
    const homog::StressUpdate up = point->integrate(homog::StrainV{strain[0], strain[1], strain[2]}, in);
    stress[0] = up.stress.sxx;
    stress[1] = up.stress.syy;
    stress[2] = up.stress.sxy;
    state[0] = up.state.r_t;
    state[1] = up.state.r_c;
    state[2] = up.state.d_t;
    state[3] = up.state.d_c;
  });
}

}  // extern "C"
