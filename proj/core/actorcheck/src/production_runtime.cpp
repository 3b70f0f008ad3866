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

#include "actorcheck/production_runtime.hpp"

#include <fmt/format.h>

#include <algorithm>
#include <cstdlib>
#include <random>

#include "actorcheck/machine.hpp"
#include "actorcheck/monitor.hpp"

namespace actorcheck {

namespace {

thread_local Machine* t_current_machine = nullptr;
thread_local std::mt19937_64* t_rng = nullptr;

[[noreturn]] void production_failure(std::string_view what) {
  fmt::print(stderr, "fatal: {}\n", what);
  std::abort();
}

}  // namespace

ProductionRuntime::ProductionRuntime(ProductionRuntimeOptions options) : options_(options) {
  unsigned workers = options_.workers != 0 ? options_.workers
                                           : std::max(2u, std::thread::hardware_concurrency());
  for (unsigned i = 0; i < workers; ++i) {
    workers_.emplace_back([this, i] {
      std::mt19937_64 rng(options_.seed != 0 ? options_.seed + i + 1
                                             : std::random_device{}() + i);
      t_rng = &rng;
      worker_loop();
      t_rng = nullptr;
    });
  }
  timer_thread_ = std::thread([this] { timer_loop(); });
}

ProductionRuntime::~ProductionRuntime() { shutdown(); }

void ProductionRuntime::shutdown() {
  {
    std::lock_guard lk(queue_mu_);
    if (stopping_) return;
    stopping_ = true;
  }
  queue_cv_.notify_all();
  {
    std::lock_guard lk(timer_mu_);
    timer_cv_.notify_all();
  }
  for (auto& w : workers_) {
    if (w.joinable()) w.join();
  }
  if (timer_thread_.joinable()) timer_thread_.join();
}

void ProductionRuntime::register_monitor(std::unique_ptr<Monitor> monitor) {
  // Monitors are a test-only facility; accepted but inert in production.
  (void)monitor;
}

MachineId ProductionRuntime::create_from(Machine* creator, std::unique_ptr<Machine> impl,
                                         std::string type_name, MachineOptions opts,
                                         std::optional<Event> init) {
  detail::MachineRecord* raw = nullptr;
  MachineId id;
  {
    std::lock_guard lk(registry_mu_);
    const std::uint64_t ordinal = next_ordinal_++;
    auto rec = std::make_unique<detail::MachineRecord>();
    rec->id = MachineId{ordinal, std::move(type_name)};
    rec->kind = opts.kind;
    rec->impl = std::move(impl);
    rec->impl->attach(this, rec.get());
    if (creator != nullptr) {
      rec->parent = creator->id().ordinal;
      auto it = machines_.find(rec->parent);
      if (it != machines_.end()) it->second->children.insert(ordinal);
    }
    raw = rec.get();
    id = rec->id;
    machines_.emplace(ordinal, std::move(rec));
  }
  if (init) send_from(creator, id, std::move(*init));
  return id;
}

void ProductionRuntime::send_from(Machine* sender, const MachineId& to, Event ev) {
  detail::MachineRecord* rec = nullptr;
  {
    std::lock_guard lk(registry_mu_);
    auto it = machines_.find(to.ordinal);
    if (it == machines_.end()) {
      throw SetupError(fmt::format("send to unknown machine ordinal {}", to.ordinal));
    }
    rec = it->second.get();
  }
  const std::uint64_t from = sender ? sender->id().ordinal : 0;
  bool need_activation = false;
  {
    std::lock_guard lk(rec->mu);
    if (rec->status == detail::MachineRecord::Status::kHalted) return;  // dropped
    rec->inbox.emplace_back(std::move(ev), from);
    pending_work_.fetch_add(1, std::memory_order_relaxed);
    if (!rec->scheduled) {
      rec->scheduled = true;
      need_activation = true;
    }
  }
  if (need_activation) activate(rec);
}

void ProductionRuntime::activate(detail::MachineRecord* rec) {
  {
    std::lock_guard lk(queue_mu_);
    ready_.push_back(rec);
  }
  queue_cv_.notify_one();
}

void ProductionRuntime::worker_loop() {
  while (true) {
    detail::MachineRecord* rec = nullptr;
    {
      std::unique_lock lk(queue_mu_);
      queue_cv_.wait(lk, [this] { return stopping_ || !ready_.empty(); });
      if (stopping_) return;
      rec = ready_.front();
      ready_.pop_front();
    }
    run_activation(rec);
  }
}

void ProductionRuntime::run_activation(detail::MachineRecord* rec) {
  // Drain a bounded batch of events, then requeue for fairness.
  constexpr int kBatch = 16;
  for (int i = 0; i < kBatch; ++i) {
    Event ev;
    std::uint64_t sender = 0;
    {
      std::lock_guard lk(rec->mu);
      if (rec->inbox.empty() || rec->status == detail::MachineRecord::Status::kHalted) {
        rec->scheduled = false;
        if (!rec->inbox.empty()) {
          // Halted: drop the leftovers.
          auto n = static_cast<std::int64_t>(rec->inbox.size());
          rec->inbox.clear();
          if (pending_work_.fetch_sub(n, std::memory_order_acq_rel) == n) {
            std::lock_guard qlk(quiesce_mu_);
            quiesce_cv_.notify_all();
          }
        }
        return;
      }
      ev = std::move(rec->inbox.front().first);
      sender = rec->inbox.front().second;
      rec->inbox.pop_front();
    }

    rec->current_sender = sender;
    const Machine::Handler* handler = rec->impl->find_handler(ev.kind);
    if (handler == nullptr) {
      if (ev.kind.rfind("__", 0) != 0) {
        production_failure(fmt::format("machine {} ({}) has no handler for event '{}'",
                                       rec->id.ordinal, rec->id.type_name, ev.kind));
      }
    } else {
      t_current_machine = rec->impl.get();
      Task<> activation = (*handler)(std::move(ev));
      activation.handle().resume();
      t_current_machine = nullptr;
      if (!activation.handle().done()) {
        production_failure(fmt::format("handler of machine {} suspended in production mode",
                                       rec->id.ordinal));
      }
      if (auto error = activation.handle().promise().error) {
        try {
          std::rethrow_exception(error);
        } catch (const std::exception& e) {
          production_failure(fmt::format("machine {} ({}): {}", rec->id.ordinal,
                                         rec->id.type_name, e.what()));
        }
      }
    }

    if (pending_work_.fetch_sub(1, std::memory_order_acq_rel) == 1) {
      std::lock_guard qlk(quiesce_mu_);
      quiesce_cv_.notify_all();
    }

    if (rec->halt_requested) {
      std::lock_guard lk(rec->mu);
      rec->status = detail::MachineRecord::Status::kHalted;
      rec->halt_requested = false;
      auto n = static_cast<std::int64_t>(rec->inbox.size());
      rec->inbox.clear();
      rec->scheduled = false;
      if (n > 0 && pending_work_.fetch_sub(n, std::memory_order_acq_rel) == n) {
        std::lock_guard qlk(quiesce_mu_);
        quiesce_cv_.notify_all();
      }
      return;
    }
  }
  // Batch exhausted; requeue if more work remains.
  bool more = false;
  {
    std::lock_guard lk(rec->mu);
    if (rec->inbox.empty()) {
      rec->scheduled = false;
    } else {
      more = true;
    }
  }
  if (more) activate(rec);
}

bool ProductionRuntime::nondet_bool_from(Machine*, std::optional<bool>) {
  if (t_rng != nullptr) return ((*t_rng)() & 1) != 0;
  static std::mutex mu;
  static std::mt19937_64 rng(std::random_device{}());
  std::lock_guard lk(mu);
  return (rng() & 1) != 0;
}

std::int64_t ProductionRuntime::nondet_int_from(Machine*, std::int64_t max) {
  if (max <= 0) throw std::invalid_argument("nondet_int: max must be positive");
  std::uniform_int_distribution<std::int64_t> dist(0, max - 1);
  if (t_rng != nullptr) return dist(*t_rng);
  static std::mutex mu;
  static std::mt19937_64 rng(std::random_device{}());
  std::lock_guard lk(mu);
  return dist(rng);
}

void ProductionRuntime::timer_start_from(Machine* owner, const std::string& timer_id) {
  auto timer = std::make_shared<PendingTimer>();
  timer->owner = owner->id().ordinal;
  timer->timer_id = timer_id;
  timer->deadline = std::chrono::steady_clock::now() + std::chrono::milliseconds(options_.timer_ms);
  {
    std::lock_guard lk(timer_mu_);
    for (const auto& t : timers_) {
      if (!t->cancelled && t->owner == timer->owner && t->timer_id == timer_id) {
        throw SetupError(fmt::format("timer '{}' of machine {} is already armed", timer_id,
                                     timer->owner));
      }
    }
    timers_.push_back(timer);
  }
  timer_cv_.notify_all();
}

void ProductionRuntime::timer_cancel_from(Machine* owner, const std::string& timer_id) {
  std::lock_guard lk(timer_mu_);
  for (auto& t : timers_) {
    if (t->owner == owner->id().ordinal && t->timer_id == timer_id) t->cancelled = true;
  }
}

void ProductionRuntime::timer_loop() {
  std::unique_lock lk(timer_mu_);
  while (true) {
    if (stopping_) return;
    auto now = std::chrono::steady_clock::now();
    std::vector<std::shared_ptr<PendingTimer>> due;
    auto next_deadline = now + std::chrono::hours(1);
    for (auto it = timers_.begin(); it != timers_.end();) {
      if ((*it)->cancelled) {
        it = timers_.erase(it);
      } else if ((*it)->deadline <= now) {
        due.push_back(*it);
        it = timers_.erase(it);
      } else {
        next_deadline = std::min(next_deadline, (*it)->deadline);
        ++it;
      }
    }
    if (!due.empty()) {
      lk.unlock();
      for (auto& t : due) {
        MachineId target{t->owner, ""};
        try {
          send_from(nullptr, target, Event{events::kTimerFired, t->timer_id});
        } catch (const SetupError&) {
          // Owner unknown; nothing to deliver.
        }
      }
      lk.lock();
      continue;
    }
    timer_cv_.wait_until(lk, next_deadline, [this] { return stopping_; });
    if (stopping_) return;
  }
}

void ProductionRuntime::request_halt(Machine* m) {
  auto it = machines_.end();
  {
    std::lock_guard lk(registry_mu_);
    it = machines_.find(m->id().ordinal);
    if (it == machines_.end()) return;
  }
  it->second->halt_requested = true;
}

void ProductionRuntime::delegate_children_from(Machine* from, const MachineId& to) {
  std::lock_guard lk(registry_mu_);
  auto src = machines_.find(from->id().ordinal);
  auto dst = machines_.find(to.ordinal);
  if (src == machines_.end() || dst == machines_.end()) return;
  for (auto child : src->second->children) {
    auto crec = machines_.find(child);
    if (crec != machines_.end()) crec->second->parent = to.ordinal;
    dst->second->children.insert(child);
  }
  src->second->children.clear();
}

void ProductionRuntime::assert_that(bool condition, std::string_view message) {
  if (!condition) {
    throw ViolationError(ViolationKind::kAssertion, std::string(message));
  }
}

void ProductionRuntime::complete_wait(std::uint64_t, std::any) {
  throw SetupError("complete_wait has no meaning in production mode");
}

Machine* ProductionRuntime::current_machine() const { return t_current_machine; }

bool ProductionRuntime::wait_quiescent(std::chrono::milliseconds timeout) {
  std::unique_lock lk(quiesce_mu_);
  return quiesce_cv_.wait_for(lk, timeout, [this] {
    return pending_work_.load(std::memory_order_acquire) == 0;
  });
}

}  // namespace actorcheck
