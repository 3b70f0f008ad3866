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

#include "actorcheck/failover.hpp"

#include "actorcheck/test_runtime.hpp"

namespace actorcheck {

TerminatingMachine::TerminatingMachine() {
  on(events::kTerminate, [this](Event ev) { return handle_terminate(std::move(ev)); });
  on(events::kChildHalted, [this](Event ev) { return handle_child_halted(std::move(ev)); });
}

std::vector<std::uint64_t> TerminatingMachine::live_service_children() const {
  std::vector<std::uint64_t> children;
  if (auto* trt = dynamic_cast<const TestRuntime*>(&runtime())) {
    trt->live_service_children_of(id().ordinal, &children);
  }
  return children;
}

Task<> TerminatingMachine::handle_terminate(Event) {
  if (draining_) co_return;  // duplicate Terminate
  draining_ = true;
  on_terminate_received();
  co_await forward_or_finish();
}

Task<> TerminatingMachine::handle_child_halted(Event ev) {
  // The halt notification is the acknowledgement: it is emitted by the
  // runtime at the instant the child halts, so a parent acting on it can
  // never abandon a still-live child.
  pending_acks_.erase(payload_as<std::uint64_t>(ev));
  if (draining_ && pending_acks_.empty()) {
    co_await forward_or_finish();
  }
}

Task<> TerminatingMachine::forward_or_finish() {
  // Re-snapshot on every pass: children delegated to us mid-cascade must be
  // drained too before we may halt.
  auto children = live_service_children();
  std::vector<std::uint64_t> fresh;
  for (auto child : children) {
    if (pending_acks_.insert(child).second) fresh.push_back(child);
  }
  for (auto child : fresh) {
    co_await send(MachineId{child, ""}, Event{events::kTerminate});
  }
  if (pending_acks_.empty()) {
    halt_self();  // our own halt notification acks our requester
  }
}

// ---------------------------------------------------------------------------

FailureInjector::FailureInjector(Config config) : config_(std::move(config)) {
  on("injector-start", [this](Event ev) { return handle_start(std::move(ev)); });
  on(events::kChildHalted, [this](Event ev) { return handle_root_halted(std::move(ev)); });
  on(events::kInjectNow, [this](Event ev) { return handle_inject_now(std::move(ev)); });
}

bool FailureInjector::has_internal_work() const {
  return !config_.manual && service_up_ && injected_ < config_.failures;
}

Task<> FailureInjector::internal_activation() { return inject(); }

Task<> FailureInjector::handle_start(Event) { return start_root(); }

Task<> FailureInjector::start_root() {
  auto impl = config_.root_factory();
  root_ = co_await detail::ValueAwait(
      this, [this, impl = std::move(impl)]() mutable -> MachineId {
        return runtime().create_from(this, std::move(impl), config_.root_type_name,
                                     MachineOptions{MachineKind::kService}, config_.root_init);
      });
  service_up_ = true;
}

Task<> FailureInjector::inject() {
  if (!service_up_ || injected_ >= config_.failures) co_return;
  service_up_ = false;
  ++injected_;
  observe(Event{events::kObsTerminateInjected, root_.ordinal});
  co_await send(root_, Event{events::kTerminate});
}

Task<> FailureInjector::handle_root_halted(Event ev) {
  if (payload_as<std::uint64_t>(ev) != root_.ordinal || service_up_) co_return;
  // The whole service tree is halted; restart immediately so the mocks see
  // no window between cascade completion and recovery.
  co_await start_root();
  observe(Event{events::kObsServiceRestarted, root_.ordinal});
  for (auto client : config_.notify_on_restart) {
    co_await send(MachineId{client, ""},
                  Event{events::kServiceRestarted, ServiceRestarted{root_}});
  }
}

Task<> FailureInjector::handle_inject_now(Event) { return inject(); }

}  // namespace actorcheck
