// Copyright 2026 The TangentLab Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <stdexcept>
#include <string>

namespace tangentlab {

/// Base class of every error thrown by the library. The C API maps each
/// subclass onto one of the TL_ERR_* codes.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// An argument lies outside the domain of the operation.
class DomainError : public Error {
 public:
  using Error::Error;
};

/// A node or memory budget would be exceeded.
class ResourceError : public Error {
 public:
  using Error::Error;
};

class ConnectivityError : public Error {
 public:
  using Error::Error;
};

/// Zero measure where positive mass is required (normalisation of a ball).
class SupportError : public Error {
 public:
  using Error::Error;
};

/// Requested radii are below what the distance oracle can resolve.
class ResolutionError : public Error {
 public:
  using Error::Error;
};

class CalibrationError : public Error {
 public:
  using Error::Error;
};

class ConfigError : public Error {
 public:
  using Error::Error;
};

class IoError : public Error {
 public:
  using Error::Error;
};

}  // namespace tangentlab
