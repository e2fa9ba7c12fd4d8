// Copyright 2026 The homog Authors
// SPDX-License-Identifier: Apache-2.0

#include "homog/config.hpp"

#include <cctype>
#include <charconv>
#include <cmath>
#include <set>

#include "homog/error.hpp"

namespace homog {
namespace {

[[noreturn]] void syntax(int line, const std::string& what) {
  fail(ErrorKind::Config, "config line " + std::to_string(line) + ": " + what);
}

std::string trim(const std::string& s) {
  std::size_t a = 0, b = s.size();
  while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
  while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
  return s.substr(a, b - a);
}

std::string strip_comment(const std::string& s) {
  bool quoted = false;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '"' && (i == 0 || s[i - 1] != '\\')) quoted = !quoted;
    if (s[i] == '#' && !quoted) return s.substr(0, i);
  }
  return s;
}

bool valid_key(const std::string& k) {
  if (k.empty()) return false;
  for (char c : k) {
    if (!std::isalnum(static_cast<unsigned char>(c)) && c != '_' && c != '-') return false;
  }
  return true;
}

Json scalar(const std::string& raw, int line) {
  const std::string v = trim(raw);
  if (v.empty()) syntax(line, "missing value");
  if (v == "true") return true;
  if (v == "false") return false;
  if (v.front() == '"') {
    if (v.size() < 2 || v.back() != '"') syntax(line, "unterminated string");
    std::string out;
    for (std::size_t i = 1; i + 1 < v.size(); ++i) {
      if (v[i] == '\\' && i + 2 < v.size()) ++i;
      out += v[i];
    }
    return out;
  }
  std::string digits;
  for (char c : v) {
    if (c != '_') digits += c;
  }
  if (digits.front() == '+') digits.erase(0, 1);
  double d = 0.0;
  const auto [end, ec] = std::from_chars(digits.data(), digits.data() + digits.size(), d);
  if (ec != std::errc() || end != digits.data() + digits.size()) syntax(line, "cannot read value '" + v + "'");
  const bool integral = digits.find_first_of(".eE") == std::string::npos;
  if (integral) return static_cast<std::int64_t>(d);
  return d;
}

Json value(const std::string& raw, int line) {
  const std::string v = trim(raw);
  if (v.empty() || v.front() != '[') return scalar(v, line);
  if (v.back() != ']') syntax(line, "arrays must close on the same line");
  Json arr = Json::array();
  const std::string body = trim(v.substr(1, v.size() - 2));
  if (body.empty()) return arr;
  std::string item;
  bool quoted = false;
  for (char c : body) {
    if (c == '"') quoted = !quoted;
    if (c == '[' && !quoted) syntax(line, "nested arrays are not supported");
    if (c == ',' && !quoted) {
      arr.push_back(scalar(item, line));
      item.clear();
    } else {
      item += c;
    }
  }
  if (!trim(item).empty()) arr.push_back(scalar(item, line));
  return arr;
}

/// Reads the keys of one section, rejecting any it does not know.
class Section {
 public:
  Section(const Json& root, const std::string& path) : path_(path) {
    const Json* node = &root;
    std::size_t start = 0;
    while (start <= path.size()) {
      const std::size_t dot = path.find('.', start);
      const std::string part = path.substr(start, dot == std::string::npos ? std::string::npos : dot - start);
      if (!node->is_object() || !node->contains(part)) {
        node = nullptr;
        break;
      }
      node = &node->at(part);
      if (dot == std::string::npos) break;
      start = dot + 1;
    }
    if (node && !node->is_object()) fail(ErrorKind::Config, "'" + path + "' must be a section");
    node_ = node;
  }

  bool present() const { return node_ != nullptr; }

  void number(const char* key, double& out) {
    if (const Json* j = find(key)) {
      if (!j->is_number()) bad(key, "a number");
      out = j->get<double>();
    }
  }
  void integer(const char* key, int& out) {
    if (const Json* j = find(key)) {
      if (!j->is_number_integer()) bad(key, "an integer");
      out = j->get<int>();
    }
  }
  void boolean(const char* key, bool& out) {
    if (const Json* j = find(key)) {
      if (!j->is_boolean()) bad(key, "true or false");
      out = j->get<bool>();
    }
  }
  void string(const char* key, std::string& out) {
    if (const Json* j = find(key)) {
      if (!j->is_string()) bad(key, "a string");
      out = j->get<std::string>();
    }
  }
  void strings(const char* key, std::vector<std::string>& out) {
    if (const Json* j = find(key)) {
      if (!j->is_array()) bad(key, "an array of strings");
      out.clear();
      for (const Json& s : *j) {
        if (!s.is_string()) bad(key, "an array of strings");
        out.push_back(s.get<std::string>());
      }
    }
  }
  /// Marks a key that is read by hand.
  const Json* raw(const char* key) { return find(key); }

  /// Every key of the section must have been read, sub-sections excepted.
  void finish(const std::set<std::string>& subsections = {}) const {
    if (!node_) return;
    for (const auto& [k, v] : node_->items()) {
      if (!seen_.count(k) && !subsections.count(k)) {
        fail(ErrorKind::Config, "unknown key '" + k + "' in [" + path_ + "]");
      }
    }
  }

 private:
  const Json* find(const char* key) {
    seen_.insert(key);
    if (!node_ || !node_->contains(key)) return nullptr;
    return &node_->at(key);
  }
  [[noreturn]] void bad(const char* key, const char* what) const {
    fail(ErrorKind::Config, "[" + path_ + "] " + key + " must be " + what);
  }

  std::string path_;
  const Json* node_ = nullptr;
  std::set<std::string> seen_;
};

void read_material(Section& s, MaterialParams& p) {
  s.number("E", p.E);
  s.number("nu", p.nu);
  s.number("ft", p.ft);
  s.number("Gt", p.Gt);
  s.number("f0c", p.f0c);
  s.number("fpc", p.fpc);
  s.number("frc", p.frc);
  s.number("epc", p.epc);
  s.number("Gc", p.Gc);
  s.number("kb", p.kb);
  s.number("kappa", p.kappa);
  s.number("c1", p.c1);
  s.number("c2", p.c2);
  s.number("c3", p.c3);
  s.finish();
}

Schedule schedule_from_string(const std::string& s) {
  if (s == "geometric") return Schedule::Geometric;
  if (s == "uniform") return Schedule::Uniform;
  fail(ErrorKind::Config, "schedule must be \"geometric\" or \"uniform\", got \"" + s + "\"");
}

}  // namespace

Json parse_toml_subset(const std::string& text) {
  Json root = Json::object();
  Json* table = &root;
  std::set<std::string> headers;
  std::size_t pos = 0;
  int line_no = 0;
  while (pos <= text.size()) {
    const std::size_t nl = text.find('\n', pos);
    const std::string line = trim(strip_comment(text.substr(pos, nl == std::string::npos ? std::string::npos : nl - pos)));
    ++line_no;
    pos = nl == std::string::npos ? text.size() + 1 : nl + 1;
    if (line.empty()) continue;

    if (line.front() == '[') {
      if (line.back() != ']' || line.size() < 3) syntax(line_no, "bad section header");
      const std::string name = trim(line.substr(1, line.size() - 2));
      if (!headers.insert(name).second) syntax(line_no, "section [" + name + "] appears twice");
      table = &root;
      std::size_t start = 0;
      while (true) {
        const std::size_t dot = name.find('.', start);
        const std::string part = trim(name.substr(start, dot == std::string::npos ? std::string::npos : dot - start));
        if (!valid_key(part)) syntax(line_no, "bad section name '" + name + "'");
        Json& next = (*table)[part];
        if (next.is_null()) next = Json::object();
        if (!next.is_object()) syntax(line_no, "'" + part + "' is already a value");
        table = &next;
        if (dot == std::string::npos) break;
        start = dot + 1;
      }
      continue;
    }

    const std::size_t eq = line.find('=');
    if (eq == std::string::npos) syntax(line_no, "expected key = value");
    const std::string key = trim(line.substr(0, eq));
    if (!valid_key(key)) syntax(line_no, "bad key '" + key + "'");
    if (table->contains(key)) syntax(line_no, "key '" + key + "' appears twice");
    (*table)[key] = value(line.substr(eq + 1), line_no);
  }
  return root;
}

MaterialParams default_brick() { return {7e9, 0.2, 2e6, 80, 8e6, 12e6, 1e6, 0.004, 6000, 1.2, 0.0, 0.65, 0.5, 1.5}; }

MaterialParams default_mortar() {
  return {1.8e9, 0.2, 0.12e6, 16, 3e6, 10e6, 2e6, 0.04, 80000, 1.2, 0.16, 0.65, 0.5, 1.5};
}

ThetaVector deployable_theta0() {
  ThetaVector t = default_theta0();
  t.Gc = 1500.0;
  t.fpc = 8e6;
  return t;
}

double effective_deploy_length(const PipelineConfig& c) {
  if (c.cost.deploy_length > 0.0 || !c.deploy_to_wall) return c.cost.deploy_length;
  const ValidationConfig& v = c.validation;
  return std::sqrt(v.width / v.macro_nx * v.height / v.macro_ny);
}

PipelineConfig pipeline_config_from(const Json& tree) {
  PipelineConfig c;
  c.brick = default_brick();
  c.mortar = default_mortar();
  c.theta0 = deployable_theta0();
  c.bounds = default_bounds();

  static const std::set<std::string> sections{"output", "geometry", "brick", "mortar", "campaign", "calibration",
                                              "validation"};
  if (!tree.is_object()) fail(ErrorKind::Config, "configuration must be a table");
  for (const auto& [k, v] : tree.items()) {
    if (!sections.count(k)) fail(ErrorKind::Config, "unknown section [" + k + "]");
  }

  Section out(tree, "output");
  out.string("dir", c.out_dir);
  out.finish();

  Section geo(tree, "geometry");
  geo.number("stretcher_length", c.geometry.stretcher_length);
  geo.number("unit_height", c.geometry.unit_height);
  geo.number("joint", c.geometry.joint);
  geo.integer("courses", c.geometry.courses);
  geo.integer("units", c.geometry.units);
  geo.integer("resolution", c.geometry.resolution);
  geo.number("max_element_size", c.geometry.max_element_size);
  geo.finish();

  Section brick(tree, "brick");
  read_material(brick, c.brick);
  Section mortar(tree, "mortar");
  read_material(mortar, c.mortar);

  Section lab(tree, "campaign");
  lab.number("lambda_first", c.lab.lambda_first);
  lab.number("lambda_max_tension", c.lab.lambda_max_tension);
  lab.number("lambda_max_compression", c.lab.lambda_max_compression);
  lab.integer("steps", c.lab.steps);
  std::string schedule = c.lab.schedule == Schedule::Geometric ? "geometric" : "uniform";
  lab.string("schedule", schedule);
  c.lab.schedule = schedule_from_string(schedule);
  lab.number("failure_ratio", c.lab.failure_ratio);
  lab.number("reaction_floor_ratio", c.lab.reaction_floor_ratio);
  lab.number("tolerance", c.lab.solver.tolerance);
  lab.integer("max_bisections", c.lab.solver.max_bisections);
  lab.integer("jobs", c.lab.jobs);
  lab.finish();

  Section cal(tree, "calibration");
  cal.number("tol", c.optimizer.tol);
  cal.integer("max_epochs", c.optimizer.max_epochs);
  cal.number("fd_step", c.optimizer.fd_step);
  cal.number("initial_radius", c.optimizer.initial_radius);
  cal.boolean("all_steps", c.cost.all_steps);
  cal.number("deploy_length", c.cost.deploy_length);
  cal.number("deploy_margin", c.cost.deploy_margin);
  cal.integer("jobs", c.cost.jobs);
  cal.boolean("deploy_to_wall", c.deploy_to_wall);
  cal.finish({"theta0", "bounds"});

  Section t0(tree, "calibration.theta0");
  ThetaArray theta = c.theta0.array();
  for (int i = 0; i < kThetaSize; ++i) t0.number(theta_names()[i], theta[i]);
  t0.finish();
  c.theta0 = ThetaVector::from(theta);

  Section bounds(tree, "calibration.bounds");
  for (int i = 0; i < kThetaSize; ++i) {
    const char* name = theta_names()[i];
    if (const Json* pair = bounds.raw(name)) {
      if (!pair->is_array() || pair->size() != 2 || !(*pair)[0].is_number() || !(*pair)[1].is_number()) {
        fail(ErrorKind::Config, std::string("[calibration.bounds] ") + name + " must be [lower, upper]");
      }
      c.bounds.lower[i] = (*pair)[0].get<double>();
      c.bounds.upper[i] = (*pair)[1].get<double>();
    }
  }
  bounds.finish();

  Section val(tree, "validation");
  ValidationConfig& v = c.validation;
  val.number("width", v.width);
  val.number("height", v.height);
  val.integer("micro_resolution", v.micro_resolution);
  val.number("micro_max_element_size", v.micro_max_element_size);
  val.integer("macro_nx", v.macro_nx);
  val.integer("macro_ny", v.macro_ny);
  val.strings("scenarios", v.scenarios);
  val.strings("models", v.models);
  val.number("dy_max", v.program.dy_max);
  val.integer("steps", v.program.steps);
  val.number("precompression", v.program.precompression);
  val.integer("precompression_steps", v.program.precompression_steps);
  val.number("dx_max", v.program.dx_max);
  val.number("extra_precompression", v.extra_precompression);
  val.number("reaction_floor_ratio", v.program.reaction_floor_ratio);
  val.number("tolerance", v.solver.tolerance);
  val.integer("max_bisections", v.solver.max_bisections);
  val.boolean("snapshots", v.snapshots);
  val.finish();

  c.geometry.validate();
  c.brick.validate();
  c.mortar.validate();
  c.bounds.validate();
  if (c.lab.steps < 1 || c.lab.jobs < 1 || c.cost.jobs < 1) {
    fail(ErrorKind::Config, "campaign steps and jobs must be positive");
  }
  if (c.optimizer.max_epochs < 1 || !(c.optimizer.fd_step > 0.0) || !(c.optimizer.tol > 0.0)) {
    fail(ErrorKind::Config, "calibration tol, fd_step and max_epochs must be positive");
  }
  if (!(c.cost.deploy_length >= 0.0) || !(c.cost.deploy_margin >= 0.0)) {
    fail(ErrorKind::Config, "deploy_length and deploy_margin must not be negative");
  }
  if (!(v.width > 0.0) || !(v.height > 0.0) || v.macro_nx < 1 || v.macro_ny < 1 || v.program.steps < 1) {
    fail(ErrorKind::Config, "validation wall size, grid and steps must be positive");
  }
  for (const std::string& s : v.scenarios) {
    if (s != "compression" && s != "shear" && s != "shear_extra") {
      fail(ErrorKind::Config, "unknown validation scenario \"" + s + "\"");
    }
  }
  for (const std::string& m : v.models) {
    if (m != "micro" && m != "macro") fail(ErrorKind::Config, "unknown validation model \"" + m + "\"");
  }
  return c;
}

PipelineConfig parse_pipeline_config(const std::string& text) { return pipeline_config_from(parse_toml_subset(text)); }

PipelineConfig load_pipeline_config(const std::string& path) { return parse_pipeline_config(read_text(path)); }

Json to_json(const PipelineConfig& c) {
  const ValidationConfig& v = c.validation;
  return Json{
      {"output", {{"dir", c.out_dir}}},
      {"geometry",
       {{"stretcher_length", c.geometry.stretcher_length},
        {"unit_height", c.geometry.unit_height},
        {"joint", c.geometry.joint},
        {"courses", c.geometry.courses},
        {"units", c.geometry.units},
        {"resolution", c.geometry.resolution},
        {"max_element_size", c.geometry.max_element_size}}},
      {"brick", to_json(c.brick)},
      {"mortar", to_json(c.mortar)},
      {"campaign",
       {{"lambda_first", c.lab.lambda_first},
        {"lambda_max_tension", c.lab.lambda_max_tension},
        {"lambda_max_compression", c.lab.lambda_max_compression},
        {"steps", c.lab.steps},
        {"schedule", c.lab.schedule == Schedule::Geometric ? "geometric" : "uniform"},
        {"failure_ratio", c.lab.failure_ratio},
        {"reaction_floor_ratio", c.lab.reaction_floor_ratio},
        {"tolerance", c.lab.solver.tolerance},
        {"max_bisections", c.lab.solver.max_bisections},
        {"jobs", c.lab.jobs}}},
      {"calibration",
       {{"tol", c.optimizer.tol},
        {"max_epochs", c.optimizer.max_epochs},
        {"fd_step", c.optimizer.fd_step},
        {"initial_radius", c.optimizer.initial_radius},
        {"all_steps", c.cost.all_steps},
        {"deploy_length", c.cost.deploy_length},
        {"deploy_margin", c.cost.deploy_margin},
        {"jobs", c.cost.jobs},
        {"deploy_to_wall", c.deploy_to_wall},
        {"theta0", to_json(c.theta0)},
        {"bounds", to_json(c.bounds)}}},
      {"validation",
       {{"width", v.width},
        {"height", v.height},
        {"micro_resolution", v.micro_resolution},
        {"micro_max_element_size", v.micro_max_element_size},
        {"macro_nx", v.macro_nx},
        {"macro_ny", v.macro_ny},
        {"scenarios", v.scenarios},
        {"models", v.models},
        {"dy_max", v.program.dy_max},
        {"steps", v.program.steps},
        {"precompression", v.program.precompression},
        {"precompression_steps", v.program.precompression_steps},
        {"dx_max", v.program.dx_max},
        {"extra_precompression", v.extra_precompression},
        {"reaction_floor_ratio", v.program.reaction_floor_ratio},
        {"tolerance", v.solver.tolerance},
        {"max_bisections", v.solver.max_bisections},
        {"snapshots", v.snapshots}}}};
}

}  // namespace homog
