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
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "actorcheck/strategy.hpp"
#include "actorcheck/test_runtime.hpp"
#include "actorcheck/trace.hpp"
#include "actorcheck/violation.hpp"

namespace actorcheck {

// A test body builds the whole program under test from scratch: machines,
// mocks and monitors. It runs once per iteration against a fresh runtime.
using TestBody = std::function<void(TestRuntime&)>;

struct TestOptions {
  StrategySpec strategy;
  std::uint64_t seed = 0;
  std::uint64_t iterations = 10000;
  std::uint32_t max_steps = 5000;
  std::optional<std::uint32_t> cool_down_steps;  // defaults to max_steps
  bool stop_on_first_bug = true;
  bool record_log = false;
  std::atomic<bool>* stop_flag = nullptr;  // cooperative early stop (portfolio)
  // Invoked after every iteration, before the runtime is torn down.
  std::function<void(TestRuntime&, const IterationOutcome&, std::uint64_t)> on_iteration;
};

struct BugReport {
  std::uint64_t iteration = 0;
  Violation violation;
  Trace trace;
};

struct TestReport {
  std::string strategy;
  std::uint64_t seed = 0;
  std::uint64_t iterations_run = 0;
  std::vector<BugReport> bugs;
  std::uint64_t distinct_schedules = 0;
  std::size_t max_steps_seen = 0;
  bool exploration_complete = false;
  double elapsed_seconds = 0.0;

  bool found_bug() const { return !bugs.empty(); }
};

// Repeatedly executes the test body, each iteration exploring a different
// interleaving and different nondet values per the strategy. Stops early on
// the first bug unless configured otherwise. Every reported bug carries a
// trace that reproduces it under replay.
TestReport run_test(const TestBody& body, const TestOptions& options);

// Variant taking a caller-owned strategy (directed tests).
TestReport run_test_with_strategy(const TestBody& body, Strategy& strategy,
                                  const TestOptions& options);

struct ReplayReport {
  IterationOutcome outcome;
  bool diverged = false;
  std::size_t divergence_step = 0;
  std::string divergence_reason;

  bool reproduced_violation() const { return outcome.violation.has_value(); }
};

// Deterministically re-executes a recorded trace: every scheduling point
// consumes the next sch record, every nondet call the next nb/ni record.
// Divergence means the program is nondeterministic outside declared choices.
ReplayReport replay_trace(const Trace& trace, const TestBody& body, bool record_log = false);

struct PortfolioOptions {
  std::uint64_t seed = 0;
  std::uint64_t iterations_per_strategy = 2000;
  std::uint32_t max_steps = 5000;
  std::optional<std::uint32_t> cool_down_steps;
  unsigned parallelism = 0;  // 0 = hardware concurrency
  bool stop_on_first_bug = true;
  std::function<void(TestRuntime&, const IterationOutcome&, std::uint64_t)> on_iteration;

  // Exhaustive joins the portfolio only when the step bound is this small.
  std::uint32_t exhaustive_step_limit = 12;
};

// Runs independent (strategy, seed) instances in parallel: random with
// several seeds plus pct with depths 1..3, and exhaustive at tiny bounds.
// The first bug found wins; instances share nothing but the report.
TestReport run_portfolio(const TestBody& body, const PortfolioOptions& options);

// The (strategy, seed) instances a portfolio launches, in order.
std::vector<StrategySpec> portfolio_members(const PortfolioOptions& options);

// Derives the per-iteration seed from the campaign seed.
std::uint64_t iteration_seed(std::uint64_t campaign_seed, std::uint64_t iteration);

}  // namespace actorcheck
