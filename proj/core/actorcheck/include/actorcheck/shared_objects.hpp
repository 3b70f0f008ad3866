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

#include <atomic>
#include <cstdint>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>

#include "actorcheck/machine.hpp"
#include "actorcheck/runtime.hpp"

namespace actorcheck {

// Linearizable counter shared between machines. In production it is a single
// atomic; under the tester every operation is a send/receive round trip to a
// hidden owner machine, so all synchronization is visible to the scheduler.
class SharedCounter {
 public:
  SharedCounter() = default;

  class Op {
   public:
    Op(detail::CompletionAwait inner) : inner_(std::move(inner)) {}
    bool await_ready() { return inner_.await_ready(); }
    void await_suspend(std::coroutine_handle<> h) { inner_.await_suspend(h); }
    std::int64_t await_resume() { return std::any_cast<std::int64_t>(inner_.await_resume()); }

   private:
    detail::CompletionAwait inner_;
  };

  [[nodiscard]] Op increment() { return op(+1, /*read_only=*/false); }
  [[nodiscard]] Op add(std::int64_t delta) { return op(delta, /*read_only=*/false); }
  [[nodiscard]] Op get() { return op(0, /*read_only=*/true); }

  // Production-only direct operations for use outside machine handlers.
  std::int64_t increment_sync();
  std::int64_t add_sync(std::int64_t delta);
  std::int64_t get_sync() const;

  // Harness-side peek; only meaningful when the program is quiescent.
  std::int64_t unsafe_read() const;

  bool valid() const { return state_ != nullptr; }

  struct State {
    std::atomic<std::int64_t> value{0};
    Runtime* runtime = nullptr;
    MachineId owner;  // test mode only
  };

 private:
  friend SharedCounter make_shared_counter(Runtime& rt);

  Op op(std::int64_t delta, bool read_only);

  std::shared_ptr<State> state_;
};

SharedCounter make_shared_counter(Runtime& rt);

namespace detail {

template <typename K, typename V>
struct MapState {
  std::mutex mu;
  std::map<K, V> entries;
  Runtime* runtime = nullptr;
  MachineId owner;
};

template <typename K, typename V>
struct MapOp {
  enum class Kind { kPut, kGet, kUpdateIf } kind;
  K key;
  std::optional<V> value;     // put / update_if desired
  std::optional<V> expected;  // update_if
  std::uint64_t waiter = 0;
};

// Hidden owner machine serializing all map operations in test mode.
template <typename K, typename V>
class SharedMapOwner : public Machine {
 public:
  explicit SharedMapOwner(std::shared_ptr<MapState<K, V>> state) : state_(std::move(state)) {
    this->on("__map-op", [this](Event ev) { return handle(std::move(ev)); });
  }

 private:
  Task<> handle(Event ev) {
    const auto& op = payload_as<MapOp<K, V>>(ev);
    std::any result;
    switch (op.kind) {
      case MapOp<K, V>::Kind::kPut:
        state_->entries[op.key] = *op.value;
        result = true;
        break;
      case MapOp<K, V>::Kind::kGet: {
        auto it = state_->entries.find(op.key);
        result = it == state_->entries.end() ? std::optional<V>{} : std::optional<V>{it->second};
        break;
      }
      case MapOp<K, V>::Kind::kUpdateIf: {
        auto it = state_->entries.find(op.key);
        bool applied = it != state_->entries.end() && it->second == *op.expected;
        if (applied) it->second = *op.value;
        result = applied;
        break;
      }
    }
    runtime().complete_wait(op.waiter, std::move(result));
    co_return;
  }

  std::shared_ptr<MapState<K, V>> state_;
};

}  // namespace detail

// Linearizable map with single-key operations, following the same
// production/test split as SharedCounter.
template <typename K, typename V>
class SharedMap {
 public:
  SharedMap() = default;

  template <typename R>
  class Op {
   public:
    Op(detail::CompletionAwait inner) : inner_(std::move(inner)) {}
    bool await_ready() { return inner_.await_ready(); }
    void await_suspend(std::coroutine_handle<> h) { inner_.await_suspend(h); }
    R await_resume() { return std::any_cast<R>(inner_.await_resume()); }

   private:
    detail::CompletionAwait inner_;
  };

  [[nodiscard]] Op<bool> put(K key, V value) {
    return make_op<bool>({detail::MapOp<K, V>::Kind::kPut, std::move(key), std::move(value),
                          std::nullopt, 0});
  }

  [[nodiscard]] Op<std::optional<V>> get(K key) {
    return make_op<std::optional<V>>(
        {detail::MapOp<K, V>::Kind::kGet, std::move(key), std::nullopt, std::nullopt, 0});
  }

  // Succeeds iff the current value equals `expected`.
  [[nodiscard]] Op<bool> update_if(K key, V expected, V desired) {
    return make_op<bool>({detail::MapOp<K, V>::Kind::kUpdateIf, std::move(key),
                          std::move(desired), std::move(expected), 0});
  }

  std::optional<V> unsafe_get(const K& key) const {
    std::lock_guard lk(state_->mu);
    auto it = state_->entries.find(key);
    return it == state_->entries.end() ? std::optional<V>{} : std::optional<V>{it->second};
  }

  std::size_t unsafe_size() const {
    std::lock_guard lk(state_->mu);
    return state_->entries.size();
  }

  bool valid() const { return state_ != nullptr; }

 private:
  template <typename KK, typename VV>
  friend SharedMap<KK, VV> make_shared_map(Runtime& rt);

  template <typename R>
  Op<R> make_op(detail::MapOp<K, V> op) {
    auto state = state_;
    return Op<R>(detail::CompletionAwait(
        state->runtime,
        [state, op]() -> std::any {
          std::lock_guard lk(state->mu);
          switch (op.kind) {
            case detail::MapOp<K, V>::Kind::kPut:
              state->entries[op.key] = *op.value;
              return true;
            case detail::MapOp<K, V>::Kind::kGet: {
              auto it = state->entries.find(op.key);
              return it == state->entries.end() ? std::optional<V>{}
                                                : std::optional<V>{it->second};
            }
            case detail::MapOp<K, V>::Kind::kUpdateIf: {
              auto it = state->entries.find(op.key);
              bool applied = it != state->entries.end() && it->second == *op.expected;
              if (applied) it->second = *op.value;
              return applied;
            }
          }
          return {};
        },
        [state, op](std::uint64_t waiter) mutable {
          op.waiter = waiter;
          Machine* caller = state->runtime->current_machine();
          state->runtime->send_from(caller, state->owner,
                                    Event{"__map-op", std::move(op)});
        }));
  }

  std::shared_ptr<detail::MapState<K, V>> state_;
};

template <typename K, typename V>
SharedMap<K, V> make_shared_map(Runtime& rt) {
  SharedMap<K, V> map;
  auto state = std::make_shared<detail::MapState<K, V>>();
  state->runtime = &rt;
  map.state_ = state;
  if (rt.is_test()) {
    state->owner = rt.spawn<detail::SharedMapOwner<K, V>>(
        "SharedMapOwner", MachineOptions{MachineKind::kInfra}, state);
  }
  return map;
}

}  // namespace actorcheck
