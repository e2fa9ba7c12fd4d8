// Copyright 2026 The homog Authors
// SPDX-License-Identifier: Apache-2.0

// Batch driver for the homogenization pipeline. Talks to the library only
// through the C interface.
//
// Exit codes:
//   0 success
//   1 any other error (bad config, missing input, ...)
//   2 invalid RVE geometry
//   3 a virtual-lab case diverged at its first step
//   4 the campaign does not determine the elasticity (rank deficient)
//   5 calibration made no progress or theta0 violates the constraints
//   6 a validation wall diverged before 10% of its program
//   7 malformed CSV input
// Errors are printed to stderr as one JSON object per line.

#include <cstdio>
#include <cstdlib>
#include <string>
#include <utility>

#include "CLI11.hpp"
#include "homog/homog.h"

namespace {

int exit_code(homog_status s, const std::string& command) {
  switch (s) {
    case HOMOG_OK: return 0;
    case HOMOG_GEOMETRY: return 2;
    case HOMOG_DIVERGED: return command == "validate" ? 6 : 3;
    case HOMOG_RANK_DEFICIENT: return 4;
    case HOMOG_NO_PROGRESS: return 5;
    case HOMOG_MALFORMED_CSV: return 7;
    default: return 1;
  }
}

void progress(const char* stage, int done, int total, void*) {
  std::fprintf(stderr, "[%s] %d/%d\n", stage, done, total);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Masonry homogenization pipeline"};
  app.set_version_flag("--version", std::string(homog_version()));
  app.require_subcommand(1, 1);

  std::string config;
  int jobs = 0;
  std::string cases;
  std::string out;
  bool quiet = false;
  const std::pair<const char*, const char*> commands[] = {
      {"rve", "Mesh the brick-mortar cell"},
      {"vlab", "Run the 26 strain-driven lab cases"},
      {"isotropize", "Fit C_ortho, C_iso and the mapping T"},
      {"calibrate", "Fit the macro damage parameters"},
      {"validate", "Micro and macro wall tests"},
      {"plot", "Stress and work plots per case"},
  };
  for (const auto& [name, help] : commands) {
    CLI::App* sub = app.add_subcommand(name, help);
    sub->add_option("--config", config, "Pipeline configuration file")->check(CLI::ExistingFile);
    sub->add_option("--jobs", jobs, "Worker count cap")->check(CLI::PositiveNumber);
    sub->add_option("--cases", cases, "Case ids, e.g. 1,13,20-22");
    sub->add_option("--out", out, "Output directory");
    sub->add_flag("--quiet", quiet, "No progress lines on stderr");
  }
  CLI11_PARSE(app, argc, argv);
  const std::string command = app.get_subcommands().front()->get_name();

  homog_pipeline* p = nullptr;
  homog_status s = homog_pipeline_create(config.empty() ? nullptr : config.c_str(), &p);
  if (s == HOMOG_OK && !out.empty()) s = homog_pipeline_set_out_dir(p, out.c_str());
  if (s == HOMOG_OK) s = homog_pipeline_set_jobs(p, jobs);
  if (s == HOMOG_OK && !cases.empty()) s = homog_pipeline_set_cases(p, cases.c_str());
  if (s == HOMOG_OK) {
    const char* seed = std::getenv("HOMOG_SEED");
    s = homog_pipeline_set_seed(p, seed ? seed : "");
  }
  if (s == HOMOG_OK && !quiet) s = homog_pipeline_set_progress(p, progress, nullptr);
  if (s == HOMOG_OK) s = homog_pipeline_run(p, command.c_str());

  if (s != HOMOG_OK) {
    std::fprintf(stderr, "%s\n", homog_last_error());
  } else {
    std::printf("%s\n", homog_pipeline_summary(p));
  }
  homog_pipeline_free(p);
  return exit_code(s, command);
}
