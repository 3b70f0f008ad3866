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

#include <any>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

namespace actorcheck {

// Identity of a machine. Ordinals are unique for the lifetime of a runtime
// instance and assigned in creation order, so in test mode they are stable
// across replays of the same trace.
struct MachineId {
  std::uint64_t ordinal = 0;
  std::string type_name;

  bool valid() const { return ordinal != 0; }

  friend bool operator==(const MachineId& a, const MachineId& b) {
    return a.ordinal == b.ordinal;
  }
  friend bool operator<(const MachineId& a, const MachineId& b) {
    return a.ordinal < b.ordinal;
  }
};

// A message between machines: a kind string plus an opaque payload. Payloads
// are copied on send; no mutable state crosses a machine boundary.
struct Event {
  std::string kind;
  std::any payload;

  Event() = default;
  explicit Event(std::string k) : kind(std::move(k)) {}
  Event(std::string k, std::any p) : kind(std::move(k)), payload(std::move(p)) {}
};

namespace events {
// Delivered to a timer's owner when the timer fires; payload is the timer id.
inline constexpr const char* kTimerFired = "timer-fired";
// Runtime-internal: sent to a parent when a service child halts. Dropped
// silently by machines that do not handle it.
inline constexpr const char* kChildHalted = "__child-halted";
}  // namespace events

template <typename T>
const T& payload_as(const Event& ev) {
  const T* p = std::any_cast<T>(&ev.payload);
  if (p == nullptr) {
    throw std::runtime_error("event '" + ev.kind + "' carries an unexpected payload type");
  }
  return *p;
}

template <typename T>
bool payload_is(const Event& ev) {
  return std::any_cast<T>(&ev.payload) != nullptr;
}

}  // namespace actorcheck
