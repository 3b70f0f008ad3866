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

#include "actorcheck/trace.hpp"

#include <fmt/format.h>

#include <charconv>
#include <fstream>
#include <sstream>

namespace actorcheck {

namespace {

std::string_view take_line(std::string_view& rest) {
  auto pos = rest.find('\n');
  std::string_view line;
  if (pos == std::string_view::npos) {
    line = rest;
    rest = {};
  } else {
    line = rest.substr(0, pos);
    rest = rest.substr(pos + 1);
  }
  return line;
}

std::int64_t parse_int(std::string_view text, const char* what) {
  std::int64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw TraceParseError(fmt::format("malformed {} '{}'", what, text));
  }
  return value;
}

std::uint64_t parse_uint(std::string_view text, const char* what) {
  std::uint64_t value = 0;
  auto [ptr, ec] = std::from_chars(text.data(), text.data() + text.size(), value);
  if (ec != std::errc{} || ptr != text.data() + text.size()) {
    throw TraceParseError(fmt::format("malformed {} '{}'", what, text));
  }
  return value;
}

std::string_view expect_prefix(std::string_view line, std::string_view prefix) {
  if (!line.starts_with(prefix)) {
    throw TraceParseError(fmt::format("expected '{}' line, got '{}'", prefix, line));
  }
  return line.substr(prefix.size());
}

}  // namespace

std::string Trace::serialize() const {
  std::string out;
  out.reserve(64 + records.size() * 8);
  fmt::format_to(std::back_inserter(out), "{}\n", kMagic);
  fmt::format_to(std::back_inserter(out), "seed:{}\n", seed);
  fmt::format_to(std::back_inserter(out), "strategy:{}\n", strategy);
  fmt::format_to(std::back_inserter(out), "max-steps:{}\n", max_steps);
  for (const auto& rec : records) {
    switch (rec.kind) {
      case TraceRecord::Kind::kSchedule:
        fmt::format_to(std::back_inserter(out), "sch,{}\n", rec.value);
        break;
      case TraceRecord::Kind::kBool:
        fmt::format_to(std::back_inserter(out), "nb,{}\n", rec.value);
        break;
      case TraceRecord::Kind::kInt:
        fmt::format_to(std::back_inserter(out), "ni,{}\n", rec.value);
        break;
    }
  }
  return out;
}

std::uint64_t Trace::hash() const {
  std::uint64_t h = 1469598103934665603ull;  // FNV-1a
  auto mix = [&h](std::uint64_t v) {
    for (int i = 0; i < 8; ++i) {
      h ^= (v >> (i * 8)) & 0xff;
      h *= 1099511628211ull;
    }
  };
  for (const auto& rec : records) {
    mix(static_cast<std::uint64_t>(rec.kind));
    mix(static_cast<std::uint64_t>(rec.value));
  }
  return h;
}

Trace Trace::parse(std::string_view text) {
  Trace trace;
  std::string_view rest = text;

  if (take_line(rest) != kMagic) {
    throw TraceParseError("bad trace header: expected '" + std::string(kMagic) + "'");
  }
  trace.seed = parse_uint(expect_prefix(take_line(rest), "seed:"), "seed");
  trace.strategy = std::string(expect_prefix(take_line(rest), "strategy:"));
  trace.max_steps =
      static_cast<std::uint32_t>(parse_uint(expect_prefix(take_line(rest), "max-steps:"), "max-steps"));

  while (!rest.empty()) {
    std::string_view line = take_line(rest);
    if (line.empty()) {
      if (rest.empty()) break;  // trailing newline
      throw TraceParseError("blank line inside trace body");
    }
    if (line.starts_with("sch,")) {
      trace.records.push_back({TraceRecord::Kind::kSchedule, parse_int(line.substr(4), "ordinal")});
    } else if (line.starts_with("nb,")) {
      auto v = parse_int(line.substr(3), "boolean");
      if (v != 0 && v != 1) throw TraceParseError("nb value must be 0 or 1");
      trace.records.push_back({TraceRecord::Kind::kBool, v});
    } else if (line.starts_with("ni,")) {
      trace.records.push_back({TraceRecord::Kind::kInt, parse_int(line.substr(3), "integer")});
    } else {
      throw TraceParseError(fmt::format("unknown record '{}'", line));
    }
  }
  return trace;
}

Trace Trace::load_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw TraceParseError("cannot open trace file '" + path + "'");
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse(buf.str());
}

void Trace::save_file(const std::string& path) const {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw TraceParseError("cannot write trace file '" + path + "'");
  out << serialize();
}

}  // namespace actorcheck
