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
#include <coroutine>
#include <cstdint>
#include <deque>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <string_view>
#include <utility>

#include "actorcheck/event.hpp"
#include "actorcheck/task.hpp"
#include "actorcheck/violation.hpp"

namespace actorcheck {

class Machine;
class Monitor;

enum class Mode { kProduction, kTest };

// What a machine is, from the harness' point of view. Service machines take
// part in children tracking and Terminate forwarding; mock machines stand in
// for external dependencies and survive injected failures; harness machines
// drive tests; infra machines are runtime-internal (timers, shared-object
// owners) and are hidden from user-visible machine counts.
enum class MachineKind { kService, kMock, kHarness, kInfra };

struct MachineOptions {
  MachineKind kind = MachineKind::kService;
};

namespace detail {

// Per-machine bookkeeping owned by the runtime.
struct MachineRecord {
  MachineId id;
  MachineKind kind = MachineKind::kService;

  enum class Status { kActive, kHalted };
  Status status = Status::kActive;

  std::deque<std::pair<Event, std::uint64_t>> inbox;  // (event, sender ordinal)
  std::unique_ptr<Machine> impl;

  std::uint64_t parent = 0;
  std::set<std::uint64_t> children;  // live children, pruned on halt

  // Test-mode execution state.
  Task<> activation;                          // top-level handler frame
  std::coroutine_handle<> resume_point;       // innermost suspended frame
  bool waiting_completion = false;
  std::any completion_value;
  bool halt_requested = false;
  std::uint64_t current_sender = 0;

  // Production-mode state.
  std::mutex mu;
  bool scheduled = false;

  MachineRecord();
  ~MachineRecord();
  MachineRecord(const MachineRecord&) = delete;
  MachineRecord& operator=(const MachineRecord&) = delete;
};

}  // namespace detail

// The single handle through which all machine creation, sends, nondet calls
// and monitor notifications flow. Two implementations exist: TestRuntime
// (serialized under a scheduling strategy) and ProductionRuntime (concurrent).
class Runtime {
 public:
  virtual ~Runtime() = default;

  virtual Mode mode() const = 0;
  bool is_test() const { return mode() == Mode::kTest; }

  // ---- harness-side API (used outside handlers) ----

  template <typename M, typename... Args>
  MachineId spawn(std::string type_name, MachineOptions opts, Args&&... args) {
    return create_from(nullptr, std::make_unique<M>(std::forward<Args>(args)...),
                       std::move(type_name), opts, std::nullopt);
  }

  template <typename M, typename... Args>
  MachineId spawn_with_init(std::string type_name, MachineOptions opts, Event init,
                            Args&&... args) {
    return create_from(nullptr, std::make_unique<M>(std::forward<Args>(args)...),
                       std::move(type_name), opts, std::move(init));
  }

  // Fire-and-forget send from outside any machine (sender ordinal 0).
  void post(const MachineId& to, Event ev) { send_from(nullptr, to, std::move(ev)); }

  // Named machine factories; unknown names fail at spawn time with SetupError.
  void register_machine_type(std::string type_name,
                             std::function<std::unique_ptr<Machine>()> factory);
  MachineId spawn_by_name(const std::string& type_name, std::optional<Event> init);
  MachineId create_by_name_from(Machine* creator, const std::string& type_name,
                                std::optional<Event> init);

  virtual void register_monitor(std::unique_ptr<Monitor> monitor) = 0;
  virtual void notify_monitors(const Event& ev) = 0;
  virtual void notify_monitor(const std::string& name, const Event& ev) = 0;

  // ---- machine-facing effect API (called through Machine and awaitables) ----

  virtual MachineId create_from(Machine* creator, std::unique_ptr<Machine> impl,
                                std::string type_name, MachineOptions opts,
                                std::optional<Event> init) = 0;
  virtual void send_from(Machine* sender, const MachineId& to, Event ev) = 0;
  virtual bool nondet_bool_from(Machine* ctx, std::optional<bool> progress) = 0;
  virtual std::int64_t nondet_int_from(Machine* ctx, std::int64_t max) = 0;
  virtual void timer_start_from(Machine* owner, const std::string& timer_id) = 0;
  virtual void timer_cancel_from(Machine* owner, const std::string& timer_id) = 0;
  virtual void request_halt(Machine* m) = 0;
  virtual void delegate_children_from(Machine* from, const MachineId& to) = 0;

  // True when runtime API calls must suspend the calling handler (test mode).
  virtual bool needs_suspend() const = 0;

  // Failed assertions end the current test iteration as a safety violation.
  virtual void assert_that(bool condition, std::string_view message) = 0;

  // Completion plumbing used by shared objects: wake a machine suspended in
  // a request/reply round trip and hand it the reply value.
  virtual void complete_wait(std::uint64_t waiter_ordinal, std::any value) = 0;

  // Monotonic correlation tokens (deterministic in test mode).
  virtual std::uint64_t fresh_token() = 0;

  // Currently executing machine, if any (test mode: the machine being stepped).
  virtual Machine* current_machine() const = 0;

 protected:
  std::map<std::string, std::function<std::unique_ptr<Machine>()>> factories_;
  std::mutex factories_mu_;
};

}  // namespace actorcheck
