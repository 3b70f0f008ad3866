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
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace actorcheck {

// One scheduling or nondeterministic decision.
struct TraceRecord {
  enum class Kind : std::uint8_t { kSchedule, kBool, kInt };
  Kind kind;
  std::int64_t value;

  friend bool operator==(const TraceRecord&, const TraceRecord&) = default;
};

// The complete, replayable record of one explored execution. Serialized as a
// line-oriented text file:
//
//   actorcheck-trace v1
//   seed:<u64 decimal>
//   strategy:<name>
//   max-steps:<u32 decimal>
//   sch,<ordinal>
//   nb,<0|1>
//   ni,<integer>
//
// One record per line, LF-terminated, no trailing whitespace.
struct Trace {
  std::uint64_t seed = 0;
  std::string strategy;
  std::uint32_t max_steps = 0;
  std::vector<TraceRecord> records;

  std::string serialize() const;
  std::uint64_t hash() const;

  static constexpr std::string_view kMagic = "actorcheck-trace v1";

  // Throws TraceParseError on any malformed input, including a bad header.
  static Trace parse(std::string_view text);
  static Trace load_file(const std::string& path);
  void save_file(const std::string& path) const;
};

class TraceParseError : public std::runtime_error {
 public:
  explicit TraceParseError(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace actorcheck
