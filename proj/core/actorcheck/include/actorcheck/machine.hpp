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

#include <coroutine>
#include <cstdint>
#include <functional>
#include <map>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <type_traits>
#include <utility>

#include "actorcheck/event.hpp"
#include "actorcheck/runtime.hpp"
#include "actorcheck/task.hpp"

namespace actorcheck {

// Marks one arm of a nondeterministic boolean as the one that represents
// forward progress. During liveness cool-down the scheduler resolves hinted
// choices toward progress.
struct Progress {
  bool favored;
};

namespace detail {

// Awaitable for runtime calls that have an effect but no result (send,
// timer start). The effect runs in await_ready; in test mode the handler
// then suspends so the scheduler can interleave other machines.
template <typename F>
class EffectAwait {
 public:
  EffectAwait(Machine* m, F effect) : machine_(m), effect_(std::move(effect)) {}

  bool await_ready();
  void await_suspend(std::coroutine_handle<> h);
  void await_resume() {}

 private:
  Machine* machine_;
  F effect_;
};

template <typename F>
class ValueAwait {
 public:
  using Result = std::invoke_result_t<F&>;

  ValueAwait(Machine* m, F effect) : machine_(m), effect_(std::move(effect)) {}

  bool await_ready();
  void await_suspend(std::coroutine_handle<> h);
  Result await_resume() { return std::move(*value_); }

 private:
  Machine* machine_;
  F effect_;
  std::optional<Result> value_;
};

// Awaitable for shared-object round trips. In production the operation
// applies immediately; in test mode it sends a request to the hidden owner
// machine and suspends the caller until the owner completes the wait.
class CompletionAwait {
 public:
  CompletionAwait(Runtime* rt, std::function<std::any()> immediate,
                  std::function<void(std::uint64_t waiter)> send_request)
      : runtime_(rt), immediate_(std::move(immediate)), send_request_(std::move(send_request)) {}

  bool await_ready();
  void await_suspend(std::coroutine_handle<> h);
  std::any await_resume();

 private:
  Runtime* runtime_;
  Machine* machine_ = nullptr;
  std::function<std::any()> immediate_;
  std::function<void(std::uint64_t)> send_request_;
  std::any value_;
};

}  // namespace detail

// Base class for all machines: private state, an inbox, and sequential event
// handlers. Handlers are coroutines; every runtime API call inside a handler
// is a scheduling point in test mode.
class Machine {
 public:
  using Handler = std::function<Task<>(Event)>;

  virtual ~Machine() = default;

  const MachineId& id() const { return record_->id; }
  MachineKind kind() const { return record_->kind; }

  // Runtime wiring; called once by the runtime before any handler runs.
  void attach(Runtime* rt, detail::MachineRecord* rec) {
    runtime_ = rt;
    record_ = rec;
  }

  const Handler* find_handler(const std::string& kind) const {
    auto it = handlers_.find(kind);
    return it == handlers_.end() ? nullptr : &it->second;
  }

  // Machines with internal work (armed timers, pending mock operations) are
  // schedulable even with an empty inbox; the scheduler runs the internal
  // activation when it picks them while idle.
  virtual bool has_internal_work() const { return false; }
  virtual Task<> internal_activation();

 protected:
  Machine() = default;

  void on(std::string kind, Handler handler) {
    handlers_[std::move(kind)] = std::move(handler);
  }

  // ---- runtime API; all of these are scheduling points in test mode ----

  [[nodiscard]] auto send(MachineId to, Event ev) {
    return detail::EffectAwait(this, [this, to = std::move(to), ev = std::move(ev)]() mutable {
      runtime_->send_from(this, to, std::move(ev));
    });
  }

  [[nodiscard]] auto send(std::uint64_t to_ordinal, Event ev) {
    return send(MachineId{to_ordinal, ""}, std::move(ev));
  }

  template <typename M, typename... Args>
  [[nodiscard]] auto create_machine(std::string type_name, MachineOptions opts, Args&&... args) {
    auto impl = std::make_unique<M>(std::forward<Args>(args)...);
    return detail::ValueAwait(
        this, [this, impl = std::move(impl), type_name = std::move(type_name),
               opts]() mutable -> MachineId {
          return runtime_->create_from(this, std::move(impl), std::move(type_name), opts,
                                       std::nullopt);
        });
  }

  template <typename M, typename... Args>
  [[nodiscard]] auto create_machine_with_init(std::string type_name, MachineOptions opts,
                                              Event init, Args&&... args) {
    auto impl = std::make_unique<M>(std::forward<Args>(args)...);
    return detail::ValueAwait(
        this, [this, impl = std::move(impl), type_name = std::move(type_name), opts,
               init = std::move(init)]() mutable -> MachineId {
          return runtime_->create_from(this, std::move(impl), std::move(type_name), opts,
                                       std::move(init));
        });
  }

  [[nodiscard]] auto create_machine_by_name(std::string type_name, std::optional<Event> init) {
    return detail::ValueAwait(
        this, [this, type_name = std::move(type_name), init = std::move(init)]() mutable {
          return runtime_->create_by_name_from(this, type_name, std::move(init));
        });
  }

  [[nodiscard]] auto nondet_bool() {
    return detail::ValueAwait(
        this, [this]() { return runtime_->nondet_bool_from(this, std::nullopt); });
  }

  [[nodiscard]] auto nondet_bool(Progress progress) {
    return detail::ValueAwait(this, [this, progress]() {
      return runtime_->nondet_bool_from(this, progress.favored);
    });
  }

  [[nodiscard]] auto nondet_int(std::int64_t max) {
    return detail::ValueAwait(this,
                              [this, max]() { return runtime_->nondet_int_from(this, max); });
  }

  [[nodiscard]] auto start_timer(std::string timer_id) {
    return detail::EffectAwait(this, [this, timer_id = std::move(timer_id)]() {
      runtime_->timer_start_from(this, timer_id);
    });
  }

  // Cancellation consumes an un-fired timer; takes effect immediately and is
  // not a scheduling point.
  void cancel_timer(const std::string& timer_id) { runtime_->timer_cancel_from(this, timer_id); }

  // The machine halts after the current handler returns; queued events are
  // discarded.
  void halt_self() { runtime_->request_halt(this); }

  void assert_that(bool condition, std::string_view message) {
    runtime_->assert_that(condition, message);
  }

  // Observation broadcast to all registered monitors (no-op in production).
  void observe(Event ev) { runtime_->notify_monitors(ev); }
  void notify_monitor(const std::string& name, Event ev) {
    runtime_->notify_monitor(name, ev);
  }

  void delegate_children(const MachineId& to) { runtime_->delegate_children_from(this, to); }

  // Sender of the event the current handler is processing (0 for harness).
  std::uint64_t current_sender() const { return record_->current_sender; }

  Runtime& runtime() { return *runtime_; }
  const Runtime& runtime() const { return *runtime_; }

  template <typename F>
  friend class detail::EffectAwait;
  template <typename F>
  friend class detail::ValueAwait;
  friend class detail::CompletionAwait;

  Runtime* runtime_ = nullptr;
  detail::MachineRecord* record_ = nullptr;

 private:
  std::map<std::string, Handler> handlers_;
};

namespace detail {

template <typename F>
bool EffectAwait<F>::await_ready() {
  effect_();
  return !machine_->runtime_->needs_suspend();
}

template <typename F>
void EffectAwait<F>::await_suspend(std::coroutine_handle<> h) {
  machine_->record_->resume_point = h;
}

template <typename F>
bool ValueAwait<F>::await_ready() {
  value_ = effect_();
  return !machine_->runtime_->needs_suspend();
}

template <typename F>
void ValueAwait<F>::await_suspend(std::coroutine_handle<> h) {
  machine_->record_->resume_point = h;
}

inline bool CompletionAwait::await_ready() {
  if (!runtime_->needs_suspend()) {
    value_ = immediate_();
    return true;
  }
  machine_ = runtime_->current_machine();
  if (machine_ == nullptr) {
    throw SetupError("shared-object operations must run inside a machine handler in test mode");
  }
  send_request_(machine_->record_->id.ordinal);
  return false;
}

inline void CompletionAwait::await_suspend(std::coroutine_handle<> h) {
  machine_->record_->waiting_completion = true;
  machine_->record_->resume_point = h;
}

inline std::any CompletionAwait::await_resume() {
  if (machine_ != nullptr) {
    return std::move(machine_->record_->completion_value);
  }
  return std::move(value_);
}

}  // namespace detail

}  // namespace actorcheck
