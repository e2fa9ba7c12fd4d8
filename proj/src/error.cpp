// Copyright 2026 The homog Authors
// SPDX-License-Identifier: Apache-2.0

#include "homog/error.hpp"

namespace homog {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::InvalidArgument: return "InvalidArgument";
    case ErrorKind::InvalidElastic: return "InvalidElastic";
    case ErrorKind::NotSPD: return "NotSPD";
    case ErrorKind::OutOfSegment: return "OutOfSegment";
    case ErrorKind::SnapBack: return "SnapBack";
    case ErrorKind::Geometry: return "GeometryError";
    case ErrorKind::Diverged: return "Diverged";
    case ErrorKind::RankDeficient: return "RankDeficient";
    case ErrorKind::Singular: return "Singular";
    case ErrorKind::OutOfBounds: return "OutOfBounds";
    case ErrorKind::NoProgress: return "NoProgress";
    case ErrorKind::MalformedCsv: return "MalformedCsv";
    case ErrorKind::Config: return "ConfigError";
    case ErrorKind::Io: return "IoError";
  }
  return "Unknown";
}

}  // namespace homog
