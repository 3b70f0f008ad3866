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

#include "actorcheck/strategy.hpp"

#include <fmt/format.h>

#include <algorithm>

#include "actorcheck/violation.hpp"

namespace actorcheck {

// ---------------------------------------------------------------------------
// RandomStrategy
// ---------------------------------------------------------------------------

void RandomStrategy::begin_iteration(std::uint64_t, std::uint64_t seed, std::uint32_t) {
  rng_.seed(seed);
}

std::uint64_t RandomStrategy::choose_next(const std::vector<std::uint64_t>& enabled,
                                          const SchedulerView&) {
  std::uniform_int_distribution<std::size_t> dist(0, enabled.size() - 1);
  return enabled[dist(rng_)];
}

bool RandomStrategy::next_bool() { return (rng_() & 1) != 0; }

std::int64_t RandomStrategy::next_int(std::int64_t max) {
  std::uniform_int_distribution<std::int64_t> dist(0, max - 1);
  return dist(rng_);
}

// ---------------------------------------------------------------------------
// PctStrategy
// ---------------------------------------------------------------------------

void PctStrategy::begin_iteration(std::uint64_t, std::uint64_t seed, std::uint32_t max_steps) {
  rng_.seed(seed);
  priority_.clear();
  change_points_.clear();
  sched_steps_ = 0;
  low_water_ = 0;
  if (max_steps > 0) {
    std::uniform_int_distribution<std::uint32_t> dist(0, max_steps - 1);
    for (unsigned i = 0; i < depth_; ++i) change_points_.insert(dist(rng_));
  }
}

std::uint64_t PctStrategy::choose_next(const std::vector<std::uint64_t>& enabled,
                                       const SchedulerView&) {
  for (auto ordinal : enabled) {
    if (priority_.find(ordinal) == priority_.end()) {
      // Random distinct-ish priority on first sight; higher wins.
      priority_[ordinal] = (rng_() | 1u);
    }
  }
  auto best = std::max_element(enabled.begin(), enabled.end(),
                               [this](std::uint64_t a, std::uint64_t b) {
                                 auto pa = priority_[a], pb = priority_[b];
                                 if (pa != pb) return pa < pb;
                                 return a > b;  // tie: lower ordinal wins
                               });
  std::uint64_t pick = *best;
  if (change_points_.count(sched_steps_) != 0) {
    // Demote the currently running machine below everything seen so far.
    priority_[pick] = low_water_ == 0 ? 0 : low_water_ - 1;
    low_water_ = priority_[pick];
  }
  ++sched_steps_;
  return pick;
}

bool PctStrategy::next_bool() { return (rng_() & 1) != 0; }

std::int64_t PctStrategy::next_int(std::int64_t max) {
  std::uniform_int_distribution<std::int64_t> dist(0, max - 1);
  return dist(rng_);
}

// ---------------------------------------------------------------------------
// ExhaustiveStrategy: iterative depth-first enumeration. The current path
// through the decision tree is replayed up to the deepest node with an
// untried alternative, which is then advanced.
// ---------------------------------------------------------------------------

void ExhaustiveStrategy::begin_iteration(std::uint64_t, std::uint64_t, std::uint32_t) {
  cursor_ = 0;
}

std::size_t ExhaustiveStrategy::decide(std::size_t alternatives) {
  if (alternatives == 0) {
    throw SetupError("exhaustive strategy asked to decide over zero alternatives");
  }
  if (cursor_ < path_.size()) {
    Node& node = path_[cursor_];
    if (node.alternatives != alternatives) {
      throw SetupError(
          "program is nondeterministic outside declared choices: alternative count changed "
          "between exhaustive iterations");
    }
    return path_[cursor_++].chosen;
  }
  path_.push_back({0, alternatives});
  ++cursor_;
  return 0;
}

void ExhaustiveStrategy::end_iteration() {
  while (!path_.empty() && path_.back().chosen + 1 >= path_.back().alternatives) {
    path_.pop_back();
  }
  if (path_.empty()) {
    complete_ = true;
    return;
  }
  path_.back().chosen += 1;
}

std::uint64_t ExhaustiveStrategy::choose_next(const std::vector<std::uint64_t>& enabled,
                                              const SchedulerView&) {
  return enabled[decide(enabled.size())];
}

bool ExhaustiveStrategy::next_bool() { return decide(2) == 1; }

std::int64_t ExhaustiveStrategy::next_int(std::int64_t max) {
  return static_cast<std::int64_t>(decide(static_cast<std::size_t>(max)));
}

// ---------------------------------------------------------------------------
// ReplayStrategy
// ---------------------------------------------------------------------------

void ReplayStrategy::begin_iteration(std::uint64_t, std::uint64_t, std::uint32_t) {
  cursor_ = 0;
  sched_steps_ = 0;
}

const TraceRecord& ReplayStrategy::next(TraceRecord::Kind expected) {
  if (cursor_ >= trace_.records.size()) {
    throw ReplayDivergence(sched_steps_, "trace exhausted");
  }
  const TraceRecord& rec = trace_.records[cursor_];
  if (rec.kind != expected) {
    throw ReplayDivergence(sched_steps_, "record kind mismatch");
  }
  ++cursor_;
  return rec;
}

std::uint64_t ReplayStrategy::choose_next(const std::vector<std::uint64_t>& enabled,
                                          const SchedulerView&) {
  const TraceRecord& rec = next(TraceRecord::Kind::kSchedule);
  ++sched_steps_;
  auto ordinal = static_cast<std::uint64_t>(rec.value);
  if (!std::binary_search(enabled.begin(), enabled.end(), ordinal)) {
    throw ReplayDivergence(sched_steps_ - 1,
                           fmt::format("machine {} not enabled at this point", ordinal));
  }
  return ordinal;
}

bool ReplayStrategy::next_bool() { return next(TraceRecord::Kind::kBool).value != 0; }

std::int64_t ReplayStrategy::next_int(std::int64_t max) {
  std::int64_t v = next(TraceRecord::Kind::kInt).value;
  if (v < 0 || v >= max) {
    throw ReplayDivergence(sched_steps_, fmt::format("ni value {} out of range [0,{})", v, max));
  }
  return v;
}

void ReplayStrategy::finish() const {
  if (cursor_ != trace_.records.size()) {
    throw ReplayDivergence(sched_steps_,
                           fmt::format("{} unconsumed trace records", trace_.records.size() - cursor_));
  }
}

// ---------------------------------------------------------------------------

std::unique_ptr<Strategy> make_strategy(const StrategySpec& spec) {
  if (spec.name == "random") return std::make_unique<RandomStrategy>();
  if (spec.name == "pct") return std::make_unique<PctStrategy>(spec.pct_depth);
  if (spec.name == "exhaustive") return std::make_unique<ExhaustiveStrategy>();
  throw SetupError("unknown strategy '" + spec.name + "'");
}

}  // namespace actorcheck
