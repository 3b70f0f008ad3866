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

#include "actorcheck/tester.hpp"

#include <algorithm>
#include <chrono>
#include <mutex>
#include <set>
#include <thread>

namespace actorcheck {

namespace {

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

Trace make_trace(const TestOptions& options, const std::string& strategy_name,
                 std::vector<TraceRecord> records) {
  Trace trace;
  trace.seed = options.seed;
  trace.strategy = strategy_name;
  trace.max_steps = options.max_steps;
  trace.records = std::move(records);
  return trace;
}

}  // namespace

std::uint64_t iteration_seed(std::uint64_t campaign_seed, std::uint64_t iteration) {
  return splitmix64(campaign_seed ^ splitmix64(iteration + 1));
}

TestReport run_test_with_strategy(const TestBody& body, Strategy& strategy,
                                  const TestOptions& options) {
  const auto started = std::chrono::steady_clock::now();

  TestReport report;
  report.strategy = strategy.name();
  report.seed = options.seed;

  TestRuntimeOptions rt_options;
  rt_options.max_steps = options.max_steps;
  rt_options.cool_down_steps = options.cool_down_steps.value_or(options.max_steps);
  rt_options.record_log = options.record_log;

  std::set<std::uint64_t> schedule_hashes;

  for (std::uint64_t iter = 0; iter < options.iterations; ++iter) {
    if (options.stop_flag != nullptr && options.stop_flag->load(std::memory_order_relaxed)) break;
    if (strategy.exploration_complete()) {
      report.exploration_complete = true;
      break;
    }

    const std::uint64_t seed = iteration_seed(options.seed, iter);
    strategy.begin_iteration(iter, seed, options.max_steps);
    TestRuntime runtime(&strategy, seed, rt_options);
    IterationOutcome outcome = runtime.run(body);
    strategy.end_iteration();

    ++report.iterations_run;
    report.max_steps_seen = std::max(report.max_steps_seen, outcome.steps);
    {
      Trace t = make_trace(options, strategy.name(), outcome.records);
      schedule_hashes.insert(t.hash());
      if (outcome.violation) {
        report.bugs.push_back(BugReport{iter, *outcome.violation, std::move(t)});
      }
    }
    if (options.on_iteration) options.on_iteration(runtime, outcome, iter);

    if (!report.bugs.empty() && options.stop_on_first_bug) break;
  }

  if (strategy.exploration_complete()) {
    report.exploration_complete = true;
  }
  report.distinct_schedules = schedule_hashes.size();
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

TestReport run_test(const TestBody& body, const TestOptions& options) {
  if (options.strategy.name == "portfolio") {
    PortfolioOptions popts;
    popts.seed = options.seed;
    popts.iterations_per_strategy = options.iterations;
    popts.max_steps = options.max_steps;
    popts.cool_down_steps = options.cool_down_steps;
    popts.stop_on_first_bug = options.stop_on_first_bug;
    popts.on_iteration = options.on_iteration;
    return run_portfolio(body, popts);
  }
  auto strategy = make_strategy(options.strategy);
  return run_test_with_strategy(body, *strategy, options);
}

ReplayReport replay_trace(const Trace& trace, const TestBody& body, bool record_log) {
  ReplayStrategy strategy(trace);
  strategy.begin_iteration(0, trace.seed, trace.max_steps);

  TestRuntimeOptions rt_options;
  rt_options.max_steps = trace.max_steps;
  rt_options.cool_down_steps = trace.max_steps;
  rt_options.record_log = record_log;
  rt_options.replay_mode = true;

  TestRuntime runtime(&strategy, trace.seed, rt_options);
  ReplayReport report;
  report.outcome = runtime.run(body);

  if (report.outcome.divergence_step) {
    report.diverged = true;
    report.divergence_step = *report.outcome.divergence_step;
    report.divergence_reason = report.outcome.divergence_reason;
    return report;
  }
  // A clean replay must consume the whole trace; leftovers mean divergence,
  // except when the original iteration ended in a violation mid-trace.
  if (!report.outcome.violation) {
    try {
      strategy.finish();
    } catch (const ReplayDivergence& d) {
      report.diverged = true;
      report.divergence_step = d.step();
      report.divergence_reason = d.what();
    }
  }
  return report;
}

std::vector<StrategySpec> portfolio_members(const PortfolioOptions& options) {
  std::vector<StrategySpec> members;
  members.push_back({"random", 0});
  members.push_back({"random", 0});
  members.push_back({"random", 0});
  members.push_back({"pct", 1});
  members.push_back({"pct", 2});
  members.push_back({"pct", 3});
  if (options.max_steps <= options.exhaustive_step_limit) {
    members.push_back({"exhaustive", 0});
  }
  return members;
}

TestReport run_portfolio(const TestBody& body, const PortfolioOptions& options) {
  const auto started = std::chrono::steady_clock::now();
  const auto members = portfolio_members(options);

  unsigned parallelism = options.parallelism != 0 ? options.parallelism
                                                  : std::max(1u, std::thread::hardware_concurrency());
  parallelism = std::min<unsigned>(parallelism, members.size());

  std::atomic<bool> stop{false};
  std::mutex mu;
  std::vector<std::pair<std::size_t, TestReport>> finished;
  std::atomic<std::size_t> next_member{0};

  auto worker = [&]() {
    while (true) {
      std::size_t index = next_member.fetch_add(1);
      if (index >= members.size()) return;
      TestOptions opts;
      opts.strategy = members[index];
      // Distinct seeds per member so the random instances differ.
      opts.seed = splitmix64(options.seed + index * 0x9e3779b97f4a7c15ull);
      opts.iterations = options.iterations_per_strategy;
      opts.max_steps = options.max_steps;
      opts.cool_down_steps = options.cool_down_steps;
      opts.stop_on_first_bug = options.stop_on_first_bug;
      opts.stop_flag = &stop;
      opts.on_iteration = options.on_iteration;
      TestReport r = run_test(body, opts);
      if (r.found_bug() && options.stop_on_first_bug) {
        stop.store(true, std::memory_order_relaxed);
      }
      std::lock_guard lk(mu);
      finished.emplace_back(index, std::move(r));
    }
  };

  std::vector<std::thread> threads;
  threads.reserve(parallelism);
  for (unsigned i = 0; i < parallelism; ++i) threads.emplace_back(worker);
  for (auto& t : threads) t.join();

  std::sort(finished.begin(), finished.end(),
            [](const auto& a, const auto& b) { return a.first < b.first; });

  TestReport report;
  report.strategy = "portfolio";
  report.seed = options.seed;
  bool all_complete = !finished.empty();
  for (auto& [index, r] : finished) {
    report.iterations_run += r.iterations_run;
    report.distinct_schedules += r.distinct_schedules;
    report.max_steps_seen = std::max(report.max_steps_seen, r.max_steps_seen);
    all_complete = all_complete && r.exploration_complete;
    if (report.bugs.empty() && r.found_bug()) {
      report.bugs = std::move(r.bugs);
    }
  }
  report.exploration_complete = all_complete;
  report.elapsed_seconds =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
  return report;
}

}  // namespace actorcheck
