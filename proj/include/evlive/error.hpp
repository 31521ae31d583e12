// Copyright (C) 2026 The evlive Authors
// SPDX-License-Identifier: Apache-2.0
//

#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace evlive {

enum class ErrorCode {
  BadMagic,
  BadVersion,
  TruncatedRecord,
  OutOfBounds,
  NonMonotonic,
  MissingHeader,
  BadPolarity,
  ParseError,
  RoiOutOfBounds,
  InvalidInterval,
  InvalidArgument,
  EmptySeries,
  EmptyStream,
  NotUniform,
  GridMismatch,
  EmptyInput,
  NoWindows,
  OneClassOnly,
  MissingFeature,
  OverlappingMovements,
  Io,
};

std::string_view to_string(ErrorCode code) noexcept;

/// Every recoverable failure in the library is reported through this type.
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const noexcept { return code_; }

 private:
  ErrorCode code_;
};

}  // namespace evlive
