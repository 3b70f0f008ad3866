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

#include "actorcheck/shared_objects.hpp"

namespace actorcheck {

namespace {

struct CounterOp {
  std::int64_t delta = 0;
  bool read_only = false;
  std::uint64_t waiter = 0;
};

// Hidden owner machine serializing counter operations in test mode, so the
// tester sees nothing but message passing.
class SharedCounterOwner : public Machine {
 public:
  explicit SharedCounterOwner(std::shared_ptr<SharedCounter::State> state)
      : state_(std::move(state)) {
    on("__counter-op", [this](Event ev) { return handle(std::move(ev)); });
  }

 private:
  Task<> handle(Event ev) {
    const auto& op = payload_as<CounterOp>(ev);
    std::int64_t result;
    if (op.read_only) {
      result = state_->value.load(std::memory_order_relaxed);
    } else {
      result = state_->value.fetch_add(op.delta, std::memory_order_relaxed) + op.delta;
    }
    runtime().complete_wait(op.waiter, result);
    co_return;
  }

  std::shared_ptr<SharedCounter::State> state_;
};

}  // namespace

SharedCounter::Op SharedCounter::op(std::int64_t delta, bool read_only) {
  auto state = state_;
  return Op(detail::CompletionAwait(
      state->runtime,
      [state, delta, read_only]() -> std::any {
        if (read_only) return state->value.load(std::memory_order_seq_cst);
        return state->value.fetch_add(delta, std::memory_order_seq_cst) + delta;
      },
      [state, delta, read_only](std::uint64_t waiter) {
        Machine* caller = state->runtime->current_machine();
        state->runtime->send_from(caller, state->owner,
                                  Event{"__counter-op", CounterOp{delta, read_only, waiter}});
      }));
}

std::int64_t SharedCounter::increment_sync() { return add_sync(1); }

std::int64_t SharedCounter::add_sync(std::int64_t delta) {
  if (state_->runtime->is_test()) {
    throw SetupError("SharedCounter::add_sync is production-only; use co_await add() in tests");
  }
  return state_->value.fetch_add(delta, std::memory_order_seq_cst) + delta;
}

std::int64_t SharedCounter::get_sync() const {
  if (state_->runtime->is_test()) {
    throw SetupError("SharedCounter::get_sync is production-only; use co_await get() in tests");
  }
  return state_->value.load(std::memory_order_seq_cst);
}

std::int64_t SharedCounter::unsafe_read() const {
  return state_->value.load(std::memory_order_seq_cst);
}

SharedCounter make_shared_counter(Runtime& rt) {
  SharedCounter counter;
  counter.state_ = std::make_shared<SharedCounter::State>();
  counter.state_->runtime = &rt;
  if (rt.is_test()) {
    counter.state_->owner = rt.spawn<SharedCounterOwner>(
        "SharedCounterOwner", MachineOptions{MachineKind::kInfra}, counter.state_);
  }
  return counter;
}

}  // namespace actorcheck
