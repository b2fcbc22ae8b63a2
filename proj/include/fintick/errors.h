/* Copyright 2026 The Fintick Authors. All Rights Reserved.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
==============================================================================*/

#ifndef FINTICK_ERRORS_H_
#define FINTICK_ERRORS_H_

#include <stdexcept>
#include <string>

namespace fintick {

/// Bad configuration (unknown keys, out-of-range values, missing paths).
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Filesystem and format failures.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Inputs that do not line up (unregistered templates, id mismatches).
class DataMismatchError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// A pipeline stage could not run; carries the stage name.
class PipelineError : public std::runtime_error {
 public:
  PipelineError(const std::string& stage, const std::string& message)
      : std::runtime_error(stage + ": " + message), stage_(stage) {}
  const std::string& stage() const { return stage_; }

 private:
  std::string stage_;
};

/// Least-squares fit could not be computed (rank-deficient design).
class FitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

}  // namespace fintick

#endif  // FINTICK_ERRORS_H_
