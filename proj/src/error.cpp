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

#include "shwave/error.hpp"

namespace shwave {

const char* to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::domain: return "domain";
    case ErrorKind::validation: return "validation";
    case ErrorKind::precondition: return "precondition";
    case ErrorKind::integration: return "integration";
    case ErrorKind::no_negative_tail: return "no_negative_tail";
    case ErrorKind::convergence: return "convergence";
    case ErrorKind::consistency: return "consistency";
    case ErrorKind::oracle_unavailable: return "oracle_unavailable";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

}  // namespace shwave
