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

// Monitor engine: registration, broadcast order, temperature, liveness
// cool-down, and non-interference with machine execution.

#include <gtest/gtest.h>

#include <fmt/format.h>

#include "actorcheck/tester.hpp"

namespace actorcheck {
namespace {

std::vector<std::string>* g_order = nullptr;

class OrderMonitor : public Monitor {
 public:
  explicit OrderMonitor(std::string name) : Monitor(std::move(name)) {
    on("obs", [this](const Event&) {
      if (g_order != nullptr) g_order->push_back(this->name());
    });
  }
};

class Observer : public Machine {
 public:
  Observer() {
    on("go", [this](Event ev) { return handle(std::move(ev)); });
  }

 private:
  Task<> handle(Event) {
    observe(Event{"obs"});
    co_return;
  }
};

TEST(MonitorEngine, BroadcastRunsInRegistrationOrder) {
  std::vector<std::string> order;
  g_order = &order;
  TestOptions opts;
  opts.strategy = {"random", 0};
  opts.iterations = 1;
  run_test(
      [](TestRuntime& rt) {
        rt.register_monitor(std::make_unique<OrderMonitor>("first"));
        rt.register_monitor(std::make_unique<OrderMonitor>("second"));
        auto m = rt.spawn<Observer>("Observer", MachineOptions{});
        rt.post(m, Event{"go"});
      },
      opts);
  g_order = nullptr;
  EXPECT_EQ(order, (std::vector<std::string>{"first", "second"}));
}

TEST(MonitorEngine, DuplicateNameIsSetupError) {
  TestOptions opts;
  opts.strategy = {"random", 0};
  opts.iterations = 1;
  EXPECT_THROW(run_test(
                   [](TestRuntime& rt) {
                     rt.register_monitor(std::make_unique<OrderMonitor>("m"));
                     rt.register_monitor(std::make_unique<OrderMonitor>("m"));
                   },
                   opts),
               SetupError);
}

TEST(MonitorEngine, UnobservedKindIsNoOp) {
  TestOptions opts;
  opts.strategy = {"random", 0};
  opts.iterations = 1;
  TestReport report = run_test(
      [](TestRuntime& rt) {
        rt.register_monitor(std::make_unique<OrderMonitor>("m"));
        auto m = rt.spawn<Observer>("Observer", MachineOptions{});
        rt.post(m, Event{"go"});
        rt.notify_monitors(Event{"unmatched-kind"});
      },
      opts);
  EXPECT_FALSE(report.found_bug());
}

// Safety assertion inside an observation handler is attributed to the monitor.
class PickyMonitor : public Monitor {
 public:
  PickyMonitor() : Monitor("picky") {
    on("obs", [this](const Event&) { assert_that(false, "rejected"); });
  }
};

TEST(MonitorEngine, MonitorAssertionIsSafetyViolation) {
  TestOptions opts;
  opts.strategy = {"random", 0};
  opts.iterations = 1;
  TestReport report = run_test(
      [](TestRuntime& rt) {
        rt.register_monitor(std::make_unique<PickyMonitor>());
        auto m = rt.spawn<Observer>("Observer", MachineOptions{});
        rt.post(m, Event{"go"});
      },
      opts);
  ASSERT_TRUE(report.found_bug());
  EXPECT_EQ(report.bugs[0].violation.kind, ViolationKind::kSafetyMonitor);
  EXPECT_EQ(report.bugs[0].violation.message, "picky: rejected");
}

// ---------------------------------------------------------------------------
// Replication liveness: hot when replicas < 3, cold when back to 3.
// ---------------------------------------------------------------------------

class ReplicationMonitor : public Monitor {
 public:
  ReplicationMonitor() : Monitor("replication") {
    on("replica-down", [this](const Event&) {
      --live_;
      set_temperature(Temperature::kHot);
    });
    on("replica-up", [this](const Event&) {
      if (++live_ >= 3) set_temperature(Temperature::kCold);
    });
  }
  std::string hot_reason() const override {
    return fmt::format("replication: {} of 3 replicas live", live_);
  }

 private:
  int live_ = 3;
};

// Kills two replicas, one per handler activation.
class Killer : public Machine {
 public:
  explicit Killer(MachineId repairer) : repairer_(repairer) {
    on("kill", [this](Event ev) { return handle(std::move(ev)); });
  }

 private:
  Task<> handle(Event) {
    observe(Event{"replica-down"});
    co_await send(repairer_, Event{"replica-died"});
    if (++kills_ < 2) co_await send(id(), Event{"kill"});
  }

  MachineId repairer_;
  int kills_ = 0;
};

class Repairer : public Machine {
 public:
  explicit Repairer(bool buggy) : buggy_(buggy) {
    on("replica-died", [this](Event ev) { return handle(std::move(ev)); });
  }

 private:
  Task<> handle(Event) {
    if (buggy_ && repaired_once_) co_return;  // forgets later failures
    repaired_once_ = true;
    observe(Event{"replica-up"});
  }

  bool buggy_;
  bool repaired_once_ = false;
};

TestBody replication_body(bool buggy) {
  return [buggy](TestRuntime& rt) {
    rt.register_monitor(std::make_unique<ReplicationMonitor>());
    auto repairer = rt.spawn<Repairer>("Repairer", MachineOptions{}, buggy);
    auto killer = rt.spawn<Killer>("Killer", MachineOptions{}, repairer);
    rt.post(killer, Event{"kill"});
  };
}

TEST(Liveness, CorrectRepairerCoolsDown) {
  TestOptions opts;
  opts.strategy = {"random", 0};
  opts.iterations = 200;
  TestReport report = run_test(replication_body(/*buggy=*/false), opts);
  EXPECT_FALSE(report.found_bug());
}

TEST(Liveness, DisabledRepairerIsALivenessViolation) {
  TestOptions opts;
  opts.strategy = {"random", 0};
  opts.iterations = 50;
  TestReport report = run_test(replication_body(/*buggy=*/true), opts);
  ASSERT_TRUE(report.found_bug());
  EXPECT_EQ(report.bugs[0].violation.kind, ViolationKind::kLivenessMonitor);
  EXPECT_NE(report.bugs[0].violation.message.find("replication"), std::string::npos);
}

// Hot at the step bound enters cool-down; if the obligation can complete
// under fair scheduling the iteration ends clean.
class SlowFinisher : public Machine {
 public:
  SlowFinisher() {
    on("tick", [this](Event ev) { return handle(std::move(ev)); });
  }

 private:
  Task<> handle(Event) {
    ++ticks_;
    if (ticks_ == 1) observe(Event{"replica-down"});
    if (ticks_ < 120) {
      co_await send(id(), Event{"tick"});
    } else {
      observe(Event{"replica-up"});
      observe(Event{"replica-up"});
      observe(Event{"replica-up"});
    }
  }
  int ticks_ = 0;
};

TEST(Liveness, CoolDownLetsSlowObligationsFinish) {
  TestOptions opts;
  opts.strategy = {"random", 0};
  opts.iterations = 1;
  opts.max_steps = 100;       // bound hits mid-work
  opts.cool_down_steps = 400; // enough room to finish
  TestReport report = run_test(
      [](TestRuntime& rt) {
        rt.register_monitor(std::make_unique<ReplicationMonitor>());
        auto m = rt.spawn<SlowFinisher>("SlowFinisher", MachineOptions{});
        rt.post(m, Event{"tick"});
      },
      opts);
  EXPECT_FALSE(report.found_bug());
}

TEST(Liveness, CoolDownExhaustionReportsViolation) {
  TestOptions opts;
  opts.strategy = {"random", 0};
  opts.iterations = 1;
  opts.max_steps = 100;
  opts.cool_down_steps = 20;  // not enough
  TestReport report = run_test(
      [](TestRuntime& rt) {
        rt.register_monitor(std::make_unique<ReplicationMonitor>());
        auto m = rt.spawn<SlowFinisher>("SlowFinisher", MachineOptions{});
        rt.post(m, Event{"tick"});
      },
      opts);
  ASSERT_TRUE(report.found_bug());
  EXPECT_EQ(report.bugs[0].violation.kind, ViolationKind::kLivenessMonitor);
}

// ---------------------------------------------------------------------------
// Non-interference: the machine execution log is identical with and without
// monitors under the same trace.
// ---------------------------------------------------------------------------

TEST(MonitorEngine, RemovingMonitorsDoesNotChangeExecution) {
  auto machines_only = [](TestRuntime& rt) {
    auto m = rt.spawn<Observer>("Observer", MachineOptions{});
    rt.post(m, Event{"go"});
    rt.post(m, Event{"go"});
  };
  auto with_monitor = [&](TestRuntime& rt) {
    rt.register_monitor(std::make_unique<OrderMonitor>("m"));
    machines_only(rt);
  };

  TestOptions opts;
  opts.strategy = {"random", 0};
  opts.seed = 3;
  opts.iterations = 1;
  opts.record_log = true;
  std::vector<std::string> log_with;
  Trace trace;
  opts.on_iteration = [&](TestRuntime&, const IterationOutcome& out, std::uint64_t) {
    log_with = out.log;
    trace.records = out.records;
  };
  run_test(with_monitor, opts);
  trace.strategy = "random";
  trace.max_steps = 5000;

  ReplayReport replay = replay_trace(trace, machines_only, /*record_log=*/true);
  ASSERT_FALSE(replay.diverged) << replay.divergence_reason;
  EXPECT_EQ(replay.outcome.log, log_with);
}

}  // namespace
}  // namespace actorcheck
