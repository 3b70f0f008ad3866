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
#include <memory>
#include <set>
#include <string>
#include <vector>

#include "actorcheck/machine.hpp"

namespace actorcheck {

namespace events {
inline constexpr const char* kTerminate = "terminate";
inline constexpr const char* kServiceRestarted = "service-restarted";
inline constexpr const char* kInjectNow = "inject-now";
// Observation kinds emitted by the injector for failover-aware monitors.
inline constexpr const char* kObsTerminateInjected = "obs-terminate-injected";
inline constexpr const char* kObsServiceRestarted = "obs-service-restarted";
}  // namespace events

struct ServiceRestarted {
  MachineId new_root;
};

// Terminate cascade: on receiving Terminate, a machine forwards it to its
// live service children and waits for each one's halt notification (the
// runtime emits it atomically at the child's halt, so it doubles as the
// acknowledgement and can never race the child's own shutdown). Once every
// child is down it halts itself; its own halt notification acks the
// requester. The same code path serves injected failures and legal teardown.
class TerminatingMachine : public Machine {
 public:
  bool draining() const { return draining_; }

 protected:
  TerminatingMachine();

  // Hook invoked when the Terminate first arrives, before forwarding.
  virtual void on_terminate_received() {}

 private:
  Task<> handle_terminate(Event ev);
  Task<> handle_child_halted(Event ev);
  Task<> forward_or_finish();
  std::vector<std::uint64_t> live_service_children() const;

  bool draining_ = false;
  std::set<std::uint64_t> pending_acks_;
};

// Programmatic failure injection: sends Terminate to the service root at a
// nondeterministically chosen scheduling point, waits for the cascade to
// drain, then immediately restarts the root from the same factory. The
// restarted machine recovers from whatever the mocks persisted.
class FailureInjector : public Machine {
 public:
  struct Config {
    unsigned failures = 1;  // total injections per iteration
    bool manual = false;    // inject only on an explicit "inject-now" event
    std::string root_type_name;
    std::function<std::unique_ptr<Machine>()> root_factory;
    Event root_init;
    // Harness machines told about restarts so they can re-send lost requests.
    std::vector<std::uint64_t> notify_on_restart;
  };

  explicit FailureInjector(Config config);

  bool has_internal_work() const override;
  Task<> internal_activation() override;

  const MachineId& root() const { return root_; }
  unsigned injections() const { return injected_; }

 private:
  Task<> handle_start(Event ev);
  Task<> handle_root_halted(Event ev);
  Task<> handle_inject_now(Event ev);
  Task<> inject();
  Task<> start_root();

  Config config_;
  MachineId root_;
  unsigned injected_ = 0;
  bool service_up_ = false;
};

// Event that boots the injector (spawn it with this as init event).
inline Event injector_start_event() { return Event{"injector-start"}; }

}  // namespace actorcheck
