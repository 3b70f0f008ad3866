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

#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>
#include <string_view>

namespace actorcheck {

enum class ViolationKind {
  kAssertion,
  kSafetyMonitor,
  kLivenessMonitor,
  kUnhandledError,
};

std::string_view to_string(ViolationKind kind);

struct Violation {
  ViolationKind kind = ViolationKind::kAssertion;
  std::string message;
  std::size_t step = 0;  // scheduler step at which the violation fired
};

// Thrown from inside handlers/mocks/monitors to end the current iteration.
class ViolationError : public std::runtime_error {
 public:
  ViolationError(ViolationKind kind, std::string message)
      : std::runtime_error(message), kind_(kind), message_(std::move(message)) {}

  ViolationKind kind() const { return kind_; }
  const std::string& message() const { return message_; }

 private:
  ViolationKind kind_;
  std::string message_;
};

// Misuse of the harness itself (duplicate monitor names, bad parameters, ...).
// These are programming errors surfaced to the caller, not test findings.
class SetupError : public std::runtime_error {
 public:
  explicit SetupError(const std::string& what) : std::runtime_error(what) {}
};

// Raised when a trace replay observes a decision that does not match the
// recorded one; the program is nondeterministic outside declared choices.
class ReplayDivergence : public std::runtime_error {
 public:
  ReplayDivergence(std::size_t step, const std::string& reason)
      : std::runtime_error("replay divergence at step " + std::to_string(step) + ": " + reason),
        step_(step) {}

  std::size_t step() const { return step_; }

 private:
  std::size_t step_;
};

}  // namespace actorcheck
