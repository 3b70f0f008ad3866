/*
 * Copyright 2026 The ActorCheck Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "actorcheck/violation.hpp"

namespace actorcheck {

std::string_view to_string(ViolationKind kind) {
  switch (kind) {
    case ViolationKind::kAssertion:
      return "assertion";
    case ViolationKind::kSafetyMonitor:
      return "safety-monitor";
    case ViolationKind::kLivenessMonitor:
      return "liveness-monitor";
    case ViolationKind::kUnhandledError:
      return "unhandled-error";
  }
  return "unknown";
}

}  // namespace actorcheck
