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

#include <functional>
#include <map>
#include <string>
#include <string_view>

#include "actorcheck/event.hpp"
#include "actorcheck/violation.hpp"

namespace actorcheck {

// Hot means an unfulfilled obligation exists; a monitor that stays hot past
// the liveness cool-down is a liveness violation.
enum class Temperature { kCold, kHot };

// A passive specification observer. Monitors receive observation events from
// any machine but never send events and never influence execution; their only
// outputs are assertions (safety) and temperature (liveness).
class Monitor {
 public:
  virtual ~Monitor() = default;

  const std::string& name() const { return name_; }
  Temperature temperature() const { return temperature_; }

  // Engine-side delivery; runs the observation handler for ev.kind, if any.
  // Unobserved kinds are a no-op.
  void deliver(const Event& ev) {
    auto it = table_.find(ev.kind);
    if (it != table_.end()) it->second(ev);
  }

  bool observes(const std::string& kind) const { return table_.count(kind) != 0; }

  // Called by the tester when an iteration reaches quiescence with no
  // violation; a natural place for whole-state safety checks.
  virtual void at_quiescence() {}

  // Human-readable account of why the monitor is hot, for liveness reports.
  virtual std::string hot_reason() const { return name_ + " is hot"; }

 protected:
  explicit Monitor(std::string name) : name_(std::move(name)) {}

  void on(std::string kind, std::function<void(const Event&)> handler) {
    table_[std::move(kind)] = std::move(handler);
  }

  void set_temperature(Temperature t) { temperature_ = t; }

  void assert_that(bool condition, std::string_view message) const {
    if (!condition) {
      throw ViolationError(ViolationKind::kSafetyMonitor,
                           name_ + ": " + std::string(message));
    }
  }

 private:
  std::string name_;
  Temperature temperature_ = Temperature::kCold;
  std::map<std::string, std::function<void(const Event&)>> table_;
};

}  // namespace actorcheck
