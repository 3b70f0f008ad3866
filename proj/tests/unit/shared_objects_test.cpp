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

#include <gtest/gtest.h>

#include <fmt/format.h>

#include <algorithm>
#include <set>
#include <thread>

#include "actorcheck/production_runtime.hpp"
#include "actorcheck/shared_objects.hpp"
#include "actorcheck/tester.hpp"
#include "interleave_oracle.hpp"

namespace actorcheck {
namespace {

class Incrementer : public Machine {
 public:
  Incrementer(SharedCounter counter, int times, std::string tag)
      : counter_(std::move(counter)), times_(times), tag_(std::move(tag)) {
    on("go", [this](Event ev) { return handle(std::move(ev)); });
  }

 private:
  Task<> handle(Event) {
    std::string returns;
    for (int i = 0; i < times_; ++i) {
      auto v = co_await counter_.increment();
      if (!returns.empty()) returns += ",";
      returns += fmt::format("{}", v);
    }
    auto* rt = dynamic_cast<TestRuntime*>(&runtime());
    rt->scratch()[tag_] = returns;
  }

  SharedCounter counter_;
  int times_;
  std::string tag_;
};

class CounterHarness {
 public:
  static TestBody body(int per_machine, SharedCounter* out = nullptr) {
    return [per_machine, out](TestRuntime& rt) {
      auto counter = make_shared_counter(rt);
      if (out != nullptr) *out = counter;
      for (int m = 0; m < 2; ++m) {
        auto id = rt.spawn<Incrementer>("Incrementer", MachineOptions{}, counter, per_machine,
                                        fmt::format("m{}", m));
        rt.post(id, Event{"go"});
      }
    };
  }
};

TEST(SharedCounter, SingleIncrementReturnsOne) {
  TestOptions opts;
  opts.strategy = {"random", 0};
  opts.iterations = 1;
  SharedCounter counter;
  auto body = [&counter](TestRuntime& rt) {
    counter = make_shared_counter(rt);
    auto id = rt.spawn<Incrementer>("Incrementer", MachineOptions{}, counter, 1,
                                    std::string("m0"));
    rt.post(id, Event{"go"});
  };
  std::string r;
  opts.on_iteration = [&](TestRuntime& rt, const IterationOutcome& out, std::uint64_t) {
    ASSERT_TRUE(out.ok());
    r = rt.scratch()["m0"];
    EXPECT_EQ(counter.unsafe_read(), 1);
  };
  run_test(body, opts);
  EXPECT_EQ(r, "1");
}

TEST(SharedCounter, OwnerMachineIsHiddenFromVisibleCount) {
  TestOptions opts;
  opts.strategy = {"random", 0};
  opts.iterations = 1;
  opts.on_iteration = [&](TestRuntime& rt, const IterationOutcome&, std::uint64_t) {
    // Two incrementers visible; owner machine is infra and hidden.
    EXPECT_EQ(rt.visible_machine_count(), 2u);
    EXPECT_EQ(rt.machine_count(), 3u);
  };
  run_test(CounterHarness::body(1), opts);
}

// Exhaustive exploration of 2 machines x 1 increment: final value always 2
// and the return values are {1,2} split between the machines.
TEST(SharedCounter, TwoIncrementsLinearizeUnderEveryInterleaving) {
  SharedCounter counter;
  TestOptions opts;
  opts.strategy = {"exhaustive", 0};
  opts.iterations = 1000000;
  opts.max_steps = 100;
  std::set<std::pair<std::string, std::string>> outcomes;
  opts.on_iteration = [&](TestRuntime& rt, const IterationOutcome& out, std::uint64_t) {
    ASSERT_TRUE(out.ok());
    EXPECT_EQ(counter.unsafe_read(), 2);
    outcomes.insert({rt.scratch()["m0"], rt.scratch()["m1"]});
  };
  TestReport report = run_test(CounterHarness::body(1, &counter), opts);
  EXPECT_TRUE(report.exploration_complete);
  // Sequential specification over some linear order of the two increments.
  EXPECT_EQ(outcomes, (std::set<std::pair<std::string, std::string>>{{"1", "2"}, {"2", "1"}}));
}

// Mode equivalence at <= 6 operations: the outcome set under the test
// implementation equals the sequential-specification outcome set over all
// linear orders of the operations (the FIFO-merge oracle over the two
// machines' return sequences).
TEST(SharedCounter, OutcomeSetMatchesSequentialSpecAtThreeEach) {
  SharedCounter counter;
  TestOptions opts;
  opts.strategy = {"exhaustive", 0};
  opts.iterations = 4000000;
  opts.max_steps = 200;
  std::set<std::pair<std::string, std::string>> outcomes;
  opts.on_iteration = [&](TestRuntime& rt, const IterationOutcome& out, std::uint64_t) {
    ASSERT_TRUE(out.ok());
    EXPECT_EQ(counter.unsafe_read(), 6);
    outcomes.insert({rt.scratch()["m0"], rt.scratch()["m1"]});
  };
  TestReport report = run_test(CounterHarness::body(3, &counter), opts);
  EXPECT_TRUE(report.exploration_complete);

  // Oracle: enumerate merges of the two op sequences; the k-th operation in
  // the merged order returns k; project per machine.
  std::set<std::pair<std::string, std::string>> expected;
  for (const auto& merge : oracles::fifo_merges({{"a", "a", "a"}, {"b", "b", "b"}})) {
    std::string ra, rb;
    for (std::size_t i = 0; i < merge.size(); ++i) {
      std::string& r = merge[i] == "a" ? ra : rb;
      if (!r.empty()) r += ",";
      r += fmt::format("{}", i + 1);
    }
    expected.insert({ra, rb});
  }
  EXPECT_EQ(expected.size(), 20u);  // C(6,3)
  EXPECT_EQ(outcomes, expected);
}

TEST(SharedCounter, ProductionStressEightWorkers) {
  ProductionRuntime rt;
  auto counter = make_shared_counter(rt);
  std::vector<std::thread> workers;
  for (int w = 0; w < 8; ++w) {
    workers.emplace_back([&counter] {
      for (int i = 0; i < 10000; ++i) counter.increment_sync();
    });
  }
  for (auto& t : workers) t.join();
  EXPECT_EQ(counter.get_sync(), 80000);
  rt.shutdown();
}

// ---------------------------------------------------------------------------
// SharedMap
// ---------------------------------------------------------------------------

class MapUser : public Machine {
 public:
  MapUser(SharedMap<std::string, int> map, std::string tag)
      : map_(std::move(map)), tag_(std::move(tag)) {
    on("go", [this](Event ev) { return handle(std::move(ev)); });
  }

 private:
  Task<> handle(Event) {
    bool won = co_await map_.update_if("k", 0, 1);
    auto* rt = dynamic_cast<TestRuntime*>(&runtime());
    rt->scratch()[tag_] = won ? "won" : "lost";
  }

  SharedMap<std::string, int> map_;
  std::string tag_;
};

class MapSeeder : public Machine {
 public:
  MapSeeder(SharedMap<std::string, int> map, MachineId u0, MachineId u1)
      : map_(std::move(map)), u0_(u0), u1_(u1) {
    on("go", [this](Event ev) { return handle(std::move(ev)); });
  }

 private:
  Task<> handle(Event) {
    co_await map_.put("k", 0);
    co_await send(u0_, Event{"go"});
    co_await send(u1_, Event{"go"});
  }
  SharedMap<std::string, int> map_;
  MachineId u0_, u1_;
};

class MapDriver : public Machine {
 public:
  explicit MapDriver(SharedMap<std::string, int> map) : map_(std::move(map)) {
    on("go", [this](Event ev) { return handle(std::move(ev)); });
  }

 private:
  Task<> handle(Event) {
    co_await map_.put("k", 7);
    auto v = co_await map_.get("k");
    runtime().assert_that(v.has_value() && *v == 7, "get after put");
    auto absent = co_await map_.get("never");
    runtime().assert_that(!absent.has_value(), "absent key");
  }
  SharedMap<std::string, int> map_;
};

TEST(SharedMap, PutGetAndAbsentKey) {
  TestOptions opts;
  opts.strategy = {"random", 0};
  opts.iterations = 1;
  TestReport report = run_test(
      [](TestRuntime& rt) {
        auto map = make_shared_map<std::string, int>(rt);
        auto id = rt.spawn<MapDriver>("MapDriver", MachineOptions{}, map);
        rt.post(id, Event{"go"});
      },
      opts);
  EXPECT_FALSE(report.found_bug());
}

TEST(SharedMap, ConcurrentUpdateIfExactlyOneWinsUnderEveryInterleaving) {
  TestOptions opts;
  opts.strategy = {"exhaustive", 0};
  opts.iterations = 1000000;
  opts.max_steps = 100;
  std::set<std::pair<std::string, std::string>> outcomes;
  opts.on_iteration = [&](TestRuntime& rt, const IterationOutcome& out, std::uint64_t) {
    ASSERT_TRUE(out.ok());
    outcomes.insert({rt.scratch()["u0"], rt.scratch()["u1"]});
  };
  TestReport report = run_test(
      [](TestRuntime& rt) {
        auto map = make_shared_map<std::string, int>(rt);
        auto u0 = rt.spawn<MapUser>("MapUser", MachineOptions{}, map, std::string("u0"));
        auto u1 = rt.spawn<MapUser>("MapUser", MachineOptions{}, map, std::string("u1"));
        auto seeder = rt.spawn<MapSeeder>("MapSeeder", MachineOptions{}, map, u0, u1);
        rt.post(seeder, Event{"go"});
      },
      opts);
  EXPECT_TRUE(report.exploration_complete);
  EXPECT_EQ(outcomes,
            (std::set<std::pair<std::string, std::string>>{{"won", "lost"}, {"lost", "won"}}));
}

}  // namespace
}  // namespace actorcheck
