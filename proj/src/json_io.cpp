// Copyright 2026 The homog Authors
// SPDX-License-Identifier: Apache-2.0

#include "homog/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "homog/error.hpp"

namespace homog {

Json to_json(const MaterialParams& p) {
  return Json{{"E", p.E},     {"nu", p.nu},   {"ft", p.ft},     {"Gt", p.Gt},    {"f0c", p.f0c},
              {"fpc", p.fpc}, {"frc", p.frc}, {"epc", p.epc},   {"Gc", p.Gc},    {"kb", p.kb},
              {"kappa", p.kappa}, {"c1", p.c1}, {"c2", p.c2},   {"c3", p.c3}};
}

double require_number(const Json& j, const std::string& key) {
  if (!j.is_object() || !j.contains(key)) fail(ErrorKind::Config, "missing field '" + key + "'");
  if (!j.at(key).is_number()) fail(ErrorKind::Config, "field '" + key + "' is not a number");
  return j.at(key).get<double>();
}

MaterialParams material_from_json(const Json& j) {
  MaterialParams p;
  p.E = require_number(j, "E");
  p.nu = require_number(j, "nu");
  p.ft = require_number(j, "ft");
  p.Gt = require_number(j, "Gt");
  p.f0c = require_number(j, "f0c");
  p.fpc = require_number(j, "fpc");
  p.frc = require_number(j, "frc");
  p.epc = require_number(j, "epc");
  p.Gc = require_number(j, "Gc");
  p.kb = require_number(j, "kb");
  p.kappa = require_number(j, "kappa");
  p.c1 = require_number(j, "c1");
  p.c2 = require_number(j, "c2");
  p.c3 = require_number(j, "c3");
  return p;
}

Json to_json(const Mat3& m) {
  Json rows = Json::array();
  for (int i = 0; i < 3; ++i) rows.push_back(Json::array({m(i, 0), m(i, 1), m(i, 2)}));
  return rows;
}

Mat3 mat3_from_json(const Json& j, const std::string& name) {
  if (!j.is_array() || j.size() != 3) fail(ErrorKind::Config, "field '" + name + "' must be a 3x3 array");
  Mat3 m;
  for (int i = 0; i < 3; ++i) {
    if (!j[i].is_array() || j[i].size() != 3) fail(ErrorKind::Config, "field '" + name + "' must be a 3x3 array");
    for (int k = 0; k < 3; ++k) {
      if (!j[i][k].is_number()) fail(ErrorKind::Config, "field '" + name + "' has a non-numeric entry");
      m(i, k) = j[i][k].get<double>();
    }
  }
  return m;
}

Json to_json(const StrainV& e) { return Json::array({e.exx, e.eyy, e.gxy}); }

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

void write_text(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) fail(ErrorKind::Io, "cannot write " + path);
  out << text;
  if (!out) fail(ErrorKind::Io, "write failed for " + path);
}

std::string read_text(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::Io, "cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

std::uint64_t fnv1a(const std::string& data) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : data) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace homog
