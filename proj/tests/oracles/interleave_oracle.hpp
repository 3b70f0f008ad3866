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

// Brute-force interleaving enumerators, independent of the scheduler they
// check. Everything here is plain combinatorics over small inputs.

#pragma once

#include <set>
#include <string>
#include <vector>

namespace oracles {

// All merges of the given sequences that preserve each sequence's internal
// order. Returns the set of distinct merged sequences.
inline void enumerate_merges(std::vector<std::vector<std::string>>& seqs,
                             std::vector<std::size_t>& pos, std::vector<std::string>& acc,
                             std::set<std::vector<std::string>>& out) {
  bool advanced = false;
  for (std::size_t i = 0; i < seqs.size(); ++i) {
    if (pos[i] < seqs[i].size()) {
      advanced = true;
      acc.push_back(seqs[i][pos[i]]);
      ++pos[i];
      enumerate_merges(seqs, pos, acc, out);
      --pos[i];
      acc.pop_back();
    }
  }
  if (!advanced) out.insert(acc);
}

inline std::set<std::vector<std::string>> fifo_merges(
    std::vector<std::vector<std::string>> seqs) {
  std::set<std::vector<std::string>> out;
  std::vector<std::size_t> pos(seqs.size(), 0);
  std::vector<std::string> acc;
  enumerate_merges(seqs, pos, acc, out);
  return out;
}

// Distinct outcomes of a straight-line program making `n` boolean choices.
inline std::size_t boolean_outcomes(unsigned n) {
  std::size_t r = 1;
  for (unsigned i = 0; i < n; ++i) r *= 2;
  return r;
}

// Model of the one-shot timer race: an owner machine starts a timer, then in
// a later handler cancels it. The timer may fire at any scheduling point
// while armed; cancellation consumes it. The observable execution is the
// owner's handler-start sequence. Enumerated by brute force over the abstract
// schedule:
//
//   owner actions: [arm] ... handler(go) ends; dequeue("later") cancels.
//   timer action:  fire (enqueues "timeout") possible while armed.
//
// Events queued to the owner dequeue in FIFO order.
inline std::set<std::vector<std::string>> timer_cancel_executions() {
  std::set<std::vector<std::string>> out;
  // Decision: at which of the scheduling points after arming does the timer
  // fire? Points: 0 = before the owner's self-send of "later", 1 = after the
  // self-send but before handler(go) returns... any point up to the cancel;
  // or never (cancel wins). Firing enqueues "timeout" into the owner inbox.
  //
  // Case A: fire before the self-send  -> inbox [timeout, later]
  //         sequence: go, timeout, later(cancel is a no-op)
  out.insert({"go", "timeout", "later"});
  // Case B: fire after the self-send but before "later" is handled
  //         -> inbox [later, timeout]; sequence: go, later, timeout
  out.insert({"go", "later", "timeout"});
  // Case C: cancel executes first; the timer never fires.
  out.insert({"go", "later"});
  return out;
}

}  // namespace oracles
