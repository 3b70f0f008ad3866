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
#include <chrono>
#include <condition_variable>
#include <cstdint>
#include <deque>
#include <map>
#include <memory>
#include <mutex>
#include <thread>
#include <vector>

#include "actorcheck/runtime.hpp"

namespace actorcheck {

struct ProductionRuntimeOptions {
  unsigned workers = 0;   // 0 = hardware concurrency
  std::uint64_t seed = 0;  // 0 = nondeterministic seeding
  unsigned timer_ms = 25;  // wall-clock duration of timers
};

// Concurrent runtime: machines execute on a worker pool, each machine's
// handlers serialized, sends safe from any thread. Monitors are a test-only
// facility and are inert here.
class ProductionRuntime : public Runtime {
 public:
  explicit ProductionRuntime(ProductionRuntimeOptions options = {});
  ~ProductionRuntime() override;

  Mode mode() const override { return Mode::kProduction; }

  void register_monitor(std::unique_ptr<Monitor> monitor) override;
  void notify_monitors(const Event& ev) override {}
  void notify_monitor(const std::string& name, const Event& ev) override {}

  MachineId create_from(Machine* creator, std::unique_ptr<Machine> impl, std::string type_name,
                        MachineOptions opts, std::optional<Event> init) override;
  void send_from(Machine* sender, const MachineId& to, Event ev) override;
  bool nondet_bool_from(Machine* ctx, std::optional<bool> progress) override;
  std::int64_t nondet_int_from(Machine* ctx, std::int64_t max) override;
  void timer_start_from(Machine* owner, const std::string& timer_id) override;
  void timer_cancel_from(Machine* owner, const std::string& timer_id) override;
  void request_halt(Machine* m) override;
  void delegate_children_from(Machine* from, const MachineId& to) override;
  bool needs_suspend() const override { return false; }
  void assert_that(bool condition, std::string_view message) override;
  void complete_wait(std::uint64_t waiter_ordinal, std::any value) override;
  std::uint64_t fresh_token() override { return ++token_counter_; }
  Machine* current_machine() const override;

  // Blocks until no events are queued and no handler is running, or the
  // timeout elapses. Returns true if quiescent.
  bool wait_quiescent(std::chrono::milliseconds timeout);

  // Stops the workers; pending events are abandoned.
  void shutdown();

 private:
  void worker_loop();
  void timer_loop();
  void activate(detail::MachineRecord* rec);
  void run_activation(detail::MachineRecord* rec);

  ProductionRuntimeOptions options_;

  mutable std::mutex registry_mu_;
  std::map<std::uint64_t, std::unique_ptr<detail::MachineRecord>> machines_;
  std::uint64_t next_ordinal_ = 1;

  std::mutex queue_mu_;
  std::condition_variable queue_cv_;
  std::deque<detail::MachineRecord*> ready_;
  bool stopping_ = false;

  std::atomic<std::int64_t> pending_work_{0};  // queued events + running activations
  std::mutex quiesce_mu_;
  std::condition_variable quiesce_cv_;

  std::vector<std::thread> workers_;

  // Wall-clock timers.
  struct PendingTimer {
    std::uint64_t owner;
    std::string timer_id;
    std::chrono::steady_clock::time_point deadline;
    bool cancelled = false;
  };
  std::mutex timer_mu_;
  std::condition_variable timer_cv_;
  std::vector<std::shared_ptr<PendingTimer>> timers_;
  std::thread timer_thread_;

  std::atomic<std::uint64_t> token_counter_{0};
};

}  // namespace actorcheck
