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

#include "actorcheck/machine.hpp"

#include "actorcheck/runtime.hpp"

namespace actorcheck {

namespace detail {

MachineRecord::MachineRecord() = default;
MachineRecord::~MachineRecord() = default;

}  // namespace detail

Task<> Machine::internal_activation() { co_return; }

void Runtime::register_machine_type(std::string type_name,
                                    std::function<std::unique_ptr<Machine>()> factory) {
  std::lock_guard lk(factories_mu_);
  if (!factories_.emplace(std::move(type_name), std::move(factory)).second) {
    throw SetupError("machine type registered twice");
  }
}

MachineId Runtime::spawn_by_name(const std::string& type_name, std::optional<Event> init) {
  return create_by_name_from(nullptr, type_name, std::move(init));
}

MachineId Runtime::create_by_name_from(Machine* creator, const std::string& type_name,
                                       std::optional<Event> init) {
  std::function<std::unique_ptr<Machine>()> factory;
  {
    std::lock_guard lk(factories_mu_);
    auto it = factories_.find(type_name);
    if (it == factories_.end()) {
      throw SetupError("unknown machine type '" + type_name + "'");
    }
    factory = it->second;
  }
  return create_from(creator, factory(), type_name, MachineOptions{}, std::move(init));
}

}  // namespace actorcheck
