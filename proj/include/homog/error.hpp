// Copyright 2026 The homog Authors
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace homog {

/// Failure categories shared by the C++ core and the C API status codes.
enum class ErrorKind {
  InvalidArgument,
  InvalidElastic,
  NotSPD,
  OutOfSegment,
  SnapBack,
  Geometry,
  Diverged,
  RankDeficient,
  Singular,
  OutOfBounds,
  NoProgress,
  MalformedCsv,
  Config,
  Io,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

[[noreturn]] inline void fail(ErrorKind kind, const std::string& what) { throw Error(kind, what); }

}  // namespace homog
