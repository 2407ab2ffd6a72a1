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

#pragma once

#include <cstddef>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace rulenet {

// One (domain, slot) pair and its values. Belief vectors for the slot hold
// one entry per value followed by NONE.
struct SlotInfo {
  std::string domain;
  std::string slot;
  std::vector<std::string> values;

  std::string key() const { return domain + "-" + slot; }
  std::size_t none_index() const { return values.size(); }
  std::size_t width() const { return values.size() + 1; }
};

struct StateRef {
  std::size_t slot = 0;
  std::size_t value = 0;
  friend bool operator==(const StateRef&, const StateRef&) = default;
};

// Catalogue of domain-slot-value triples. Slot order follows the order of
// the source document and is stable.
class Ontology {
 public:
  Ontology() = default;

  // Throws std::invalid_argument on duplicate values within a slot.
  void add_slot(SlotInfo slot);

  // JSON layout: {"domain": {"slot": ["value", ...]}}.
  static Ontology parse(std::string_view json_text);
  static Ontology load(const std::string& path);
  std::string to_json() const;

  const std::vector<SlotInfo>& slots() const { return slots_; }
  std::size_t slot_count() const { return slots_.size(); }
  const SlotInfo& slot(std::size_t i) const { return slots_.at(i); }

  std::optional<std::size_t> find_slot(std::string_view key) const;
  // Looks up "domain-slot-value".
  std::optional<StateRef> find_state(std::string_view name) const;
  // Indices of every slot with the given slot name (e.g. all "pricerange").
  std::vector<std::size_t> slots_named(std::string_view slot_name) const;

  std::vector<std::string> domains() const;
  std::size_t state_count() const;

  friend bool operator==(const Ontology& a, const Ontology& b) {
    return a.to_json() == b.to_json();
  }

 private:
  std::vector<SlotInfo> slots_;
  std::map<std::string, std::size_t, std::less<>> slot_index_;
  std::map<std::string, StateRef, std::less<>> state_index_;
};

}  // namespace rulenet
