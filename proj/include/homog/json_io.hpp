// Copyright 2026 The homog Authors
// SPDX-License-Identifier: Apache-2.0

/// JSON conversions shared by the artifact writers.

#pragma once

#include <string>

#include <json.hpp>

#include "homog/damage.hpp"

namespace homog {

using Json = nlohmann::ordered_json;

Json to_json(const MaterialParams& p);
/// Throws Config naming the first missing field.
MaterialParams material_from_json(const Json& j);

Json to_json(const Mat3& m);
Mat3 mat3_from_json(const Json& j, const std::string& name);

Json to_json(const StrainV& e);

double require_number(const Json& j, const std::string& key);

/// Full-precision text that round-trips every double.
std::string dump_json(const Json& j);

void write_text(const std::string& path, const std::string& text);
std::string read_text(const std::string& path);

std::string hex64(std::uint64_t v);
std::uint64_t fnv1a(const std::string& data);

}  // namespace homog
