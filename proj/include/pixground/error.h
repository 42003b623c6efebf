// Copyright 2026 The pixground Authors.
// SPDX-License-Identifier: Apache-2.0

#pragma once

#include <stdexcept>
#include <string>

namespace pixground {

class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Malformed binary or JSON payloads (bad magic, truncation, bad RLE sums).
class FormatError : public Error {
 public:
  using Error::Error;
};

// Annotation / run documents that parse but violate an invariant.
class SchemaError : public Error {
 public:
  using Error::Error;
};

// Caller-side precondition violations.
class InvalidArgument : public Error {
 public:
  using Error::Error;
};

}  // namespace pixground
