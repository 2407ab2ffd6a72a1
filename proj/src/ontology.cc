// Copyright 2026 The rulenet Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#include "rulenet/ontology.h"

#include <fstream>
#include <set>
#include <sstream>
#include <stdexcept>

#include "json.hpp"

namespace rulenet {

void Ontology::add_slot(SlotInfo slot) {
  const std::string key = slot.key();
  if (slot_index_.contains(key)) {
    throw std::invalid_argument("duplicate slot " + key);
  }
  std::set<std::string> seen;
  for (const auto& v : slot.values) {
    if (!seen.insert(v).second) {
      throw std::invalid_argument("duplicate value '" + v + "' in slot " + key);
    }
  }
  const std::size_t index = slots_.size();
  for (std::size_t v = 0; v < slot.values.size(); ++v) {
    state_index_.emplace(key + "-" + slot.values[v], StateRef{index, v});
  }
  slot_index_.emplace(key, index);
  slots_.push_back(std::move(slot));
}

Ontology Ontology::parse(std::string_view json_text) {
  const auto doc = nlohmann::ordered_json::parse(json_text);
  if (!doc.is_object()) {
    throw std::invalid_argument("ontology must be a JSON object");
  }
  Ontology out;
  for (const auto& [domain, slots] : doc.items()) {
    if (!slots.is_object()) {
      throw std::invalid_argument("domain '" + domain + "' must map to an object");
    }
    for (const auto& [slot, values] : slots.items()) {
      SlotInfo info{domain, slot, values.get<std::vector<std::string>>()};
      out.add_slot(std::move(info));
    }
  }
  return out;
}

Ontology Ontology::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open ontology file " + path);
  std::stringstream buffer;
  buffer << in.rdbuf();
  return parse(buffer.str());
}

std::string Ontology::to_json() const {
  nlohmann::ordered_json doc = nlohmann::ordered_json::object();
  for (const auto& s : slots_) doc[s.domain][s.slot] = s.values;
  return doc.dump(2);
}

std::optional<std::size_t> Ontology::find_slot(std::string_view key) const {
  auto it = slot_index_.find(key);
  if (it == slot_index_.end()) return std::nullopt;
  return it->second;
}

std::optional<StateRef> Ontology::find_state(std::string_view name) const {
  auto it = state_index_.find(name);
  if (it == state_index_.end()) return std::nullopt;
  return it->second;
}

std::vector<std::size_t> Ontology::slots_named(std::string_view slot_name) const {
  std::vector<std::size_t> out;
  for (std::size_t i = 0; i < slots_.size(); ++i) {
    if (slots_[i].slot == slot_name) out.push_back(i);
  }
  return out;
}

std::vector<std::string> Ontology::domains() const {
  std::vector<std::string> out;
  for (const auto& s : slots_) {
    if (out.empty() || out.back() != s.domain) out.push_back(s.domain);
  }
  return out;
}

std::size_t Ontology::state_count() const { return state_index_.size(); }

}  // namespace rulenet
