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

#include <cstdint>
#include <map>
#include <memory>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "actorcheck/trace.hpp"

namespace actorcheck {

class TestRuntime;

// Read-only view of the scheduler state offered to strategies alongside the
// enabled set. Built-in strategies ignore it; directed test strategies may
// use it to steer execution.
struct SchedulerView {
  const TestRuntime* runtime = nullptr;
};

// A search strategy owns every scheduling and nondeterministic decision of a
// test iteration. Given identical (seed, parameters, sequence of choice
// requests), a strategy returns identical choices.
class Strategy {
 public:
  virtual ~Strategy() = default;

  virtual std::string name() const = 0;

  // Called before each iteration with a per-iteration derived seed.
  virtual void begin_iteration(std::uint64_t iteration, std::uint64_t seed,
                               std::uint32_t max_steps) = 0;
  virtual void end_iteration() {}

  // Picks one of the enabled machine ordinals (sorted ascending, non-empty).
  virtual std::uint64_t choose_next(const std::vector<std::uint64_t>& enabled,
                                    const SchedulerView& view) = 0;
  virtual bool next_bool() = 0;
  virtual std::int64_t next_int(std::int64_t max) = 0;

  // True once the whole decision tree has been explored (exhaustive only).
  virtual bool exploration_complete() const { return false; }
};

// Uniform random choice over enabled machines and nondet values.
class RandomStrategy : public Strategy {
 public:
  RandomStrategy() = default;

  std::string name() const override { return "random"; }
  void begin_iteration(std::uint64_t iteration, std::uint64_t seed,
                       std::uint32_t max_steps) override;
  std::uint64_t choose_next(const std::vector<std::uint64_t>& enabled,
                            const SchedulerView& view) override;
  bool next_bool() override;
  std::int64_t next_int(std::int64_t max) override;

 private:
  std::mt19937_64 rng_;
};

// Priority-based probabilistic scheduling: machines get random priorities on
// first sight; the highest-priority enabled machine always runs. At `depth`
// random step indices per iteration the current highest-priority enabled
// machine is demoted below all others.
class PctStrategy : public Strategy {
 public:
  explicit PctStrategy(unsigned depth) : depth_(depth) {}

  std::string name() const override { return "pct"; }
  unsigned depth() const { return depth_; }

  void begin_iteration(std::uint64_t iteration, std::uint64_t seed,
                       std::uint32_t max_steps) override;
  std::uint64_t choose_next(const std::vector<std::uint64_t>& enabled,
                            const SchedulerView& view) override;
  bool next_bool() override;
  std::int64_t next_int(std::int64_t max) override;

 private:
  unsigned depth_;
  std::mt19937_64 rng_;
  std::map<std::uint64_t, std::uint64_t> priority_;  // ordinal -> priority
  std::set<std::uint32_t> change_points_;
  std::uint32_t sched_steps_ = 0;
  std::uint64_t low_water_ = 0;  // demoted machines go below this
};

// Depth-first enumeration of every choice. Feasible only at tiny bounds;
// one iteration explores one path through the decision tree.
class ExhaustiveStrategy : public Strategy {
 public:
  ExhaustiveStrategy() = default;

  std::string name() const override { return "exhaustive"; }
  void begin_iteration(std::uint64_t iteration, std::uint64_t seed,
                       std::uint32_t max_steps) override;
  void end_iteration() override;
  std::uint64_t choose_next(const std::vector<std::uint64_t>& enabled,
                            const SchedulerView& view) override;
  bool next_bool() override;
  std::int64_t next_int(std::int64_t max) override;
  bool exploration_complete() const override { return complete_; }

 private:
  std::size_t decide(std::size_t alternatives);

  struct Node {
    std::size_t chosen;
    std::size_t alternatives;
  };
  std::vector<Node> path_;
  std::size_t cursor_ = 0;
  bool complete_ = false;
};

// Feeds decisions back from a recorded trace. Any mismatch between the next
// record and the requested decision raises ReplayDivergence.
class ReplayStrategy : public Strategy {
 public:
  explicit ReplayStrategy(Trace trace) : trace_(std::move(trace)) {}

  std::string name() const override { return "replay"; }
  void begin_iteration(std::uint64_t iteration, std::uint64_t seed,
                       std::uint32_t max_steps) override;
  std::uint64_t choose_next(const std::vector<std::uint64_t>& enabled,
                            const SchedulerView& view) override;
  bool next_bool() override;
  std::int64_t next_int(std::int64_t max) override;

  // Throws ReplayDivergence if unconsumed records remain.
  void finish() const;
  std::size_t consumed() const { return cursor_; }

 private:
  const TraceRecord& next(TraceRecord::Kind expected);

  Trace trace_;
  std::size_t cursor_ = 0;
  std::size_t sched_steps_ = 0;
};

struct StrategySpec {
  std::string name = "random";  // random | pct | exhaustive | portfolio
  unsigned pct_depth = 3;
};

// Builds a strategy from a spec. Throws SetupError for unknown names.
std::unique_ptr<Strategy> make_strategy(const StrategySpec& spec);

}  // namespace actorcheck
