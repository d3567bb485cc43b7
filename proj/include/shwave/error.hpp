// Copyright 2026 The shwave Authors
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
#include <utility>
#include <vector>

namespace shwave {

enum class ErrorKind {
  domain,            // argument outside the mathematical domain (y < 0, K <= 0, ...)
  validation,        // malformed input data or configuration
  precondition,      // call made outside the documented regime
  integration,       // ODE step-size underflow or step budget exhausted
  no_negative_tail,  // gamma_A never becomes negative on the scan grid
  convergence,       // iterative procedure did not settle
  consistency,       // internal cross-check failed
  oracle_unavailable,
  io,
};

const char* to_string(ErrorKind kind) noexcept;

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what) : std::runtime_error(what), kind_(kind) {}
  ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

// Carries the last accepted integrator state so callers can report where
// integration broke down.
class IntegrationError : public Error {
 public:
  IntegrationError(const std::string& what, double x, std::vector<double> state)
      : Error(ErrorKind::integration, what), x_(x), state_(std::move(state)) {}
  double last_x() const noexcept { return x_; }
  const std::vector<double>& last_state() const noexcept { return state_; }

 private:
  double x_;
  std::vector<double> state_;
};

}  // namespace shwave
