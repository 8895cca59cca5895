// Copyright 2026 The FieldFuzz Authors.
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//      http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#ifndef FIELDFUZZ_SEED_HPP_
#define FIELDFUZZ_SEED_HPP_

#include <cstdint>
#include <optional>
#include <vector>

namespace fieldfuzz {

// One corpus entry.
struct Seed {
  uint32_t id = 0;
  std::vector<uint8_t> input;          // full layout, never the raw view
  uint64_t exec_time_us = 1;           // duration of the discovery run
  uint32_t bucket_popcount = 0;        // classified-coverage popcount
  uint32_t last_depth = 0;             // max call depth of the most recent run
  bool deterministic_done = false;
  uint64_t discovered_at_execs = 0;
  uint64_t fingerprint = 0;            // classified-coverage hash at save time
  std::optional<uint32_t> parent_id;   // empty for initial corpus seeds
};

}  // namespace fieldfuzz

#endif  // FIELDFUZZ_SEED_HPP_
