/* Copyright 2026 The dmrsim Authors
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
 *
 */

#pragma once

#include <algorithm>
#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "dmrsim/error.hpp"

namespace dmrsim {

using Rank = int;
using ElementIndex = std::int64_t;

/// Uniform contiguous chunks: rank r owns [r*chunk, (r+1)*chunk).
struct Default1D {
  ElementIndex total_elements = 0;
  int procs = 1;
};

/// Blocks of `block_size` elements dealt round-robin: block b lives on
/// rank b mod procs.
struct BlockCyclic {
  ElementIndex num_blocks = 0;
  ElementIndex block_size = 1;
  int procs = 1;
};

using Layout = std::variant<Default1D, BlockCyclic>;

/// Throws on a layout that breaks its invariants (IndivisibleData for a
/// non-uniform Default1D, IncompatibleGroups for too few blocks).
void validate(const Layout& layout);

[[nodiscard]] ElementIndex total_elements(const Layout& layout);
[[nodiscard]] int procs(const Layout& layout);

[[nodiscard]] Rank owner_of(const Layout& layout, ElementIndex global_index);
/// Position of `global_index` inside its owner's local array.
[[nodiscard]] ElementIndex local_index_of(const Layout& layout, ElementIndex global_index);
[[nodiscard]] ElementIndex local_size(const Layout& layout, Rank rank);

struct Transfer {
  Rank src_rank = 0;
  Rank dst_rank = 0;
  ElementIndex global_start = 0;
  ElementIndex count = 0;

  friend bool operator==(const Transfer&, const Transfer&) = default;
};

enum class Direction { Expand, Shrink, None };

struct RedistributionPlan {
  Direction direction = Direction::None;
  int old_procs = 1;
  int new_procs = 1;
  ElementIndex total_elements = 0;
  std::vector<Transfer> transfers;
};

/// Integer k with new = k*old or old = k*new. Throws IncompatibleGroups.
[[nodiscard]] int resize_factor(int old_procs, int new_procs);

/// Default 1D pattern. Expansion: parent r sends sub-chunk i to child
/// r*factor + i. Shrink: child c gathers parents c*factor .. c*factor+factor-1
/// in ascending order.
[[nodiscard]] RedistributionPlan plan_default(ElementIndex total_elements, int old_procs,
                                              int new_procs);

/// Block-cyclic pattern with constant block size, computed as the block
/// owner-map difference between the two layouts. Runs of consecutive blocks
/// with the same (src, dst) are coalesced.
[[nodiscard]] RedistributionPlan plan_blockcyclic(ElementIndex num_blocks, ElementIndex block_size,
                                                  int old_procs, int new_procs);

struct LinkModel {
  double bytes_per_element = 8.0;
  double bandwidth_bytes_per_s = 12.5e9;
  double latency_s_per_transfer = 0.0;
};

/// latency * transfers + bytes / bandwidth over transfers with src != dst.
[[nodiscard]] double transfer_cost(const RedistributionPlan& plan, const LinkModel& link);

/// One `src dst start count` line per transfer.
[[nodiscard]] std::string to_text(const RedistributionPlan& plan);
[[nodiscard]] std::vector<Transfer> parse_transfers(std::string_view text);

/// Scatters a global array with the plan: each destination rank's local
/// array holds its received ranges in ascending global order. Throws
/// ShapeError when the array length is not the plan's element count.
template <typename T>
[[nodiscard]] std::vector<std::vector<T>> apply_plan(std::span<const T> global,
                                                     const RedistributionPlan& plan) {
  if (static_cast<ElementIndex>(global.size()) != plan.total_elements) {
    throw ShapeError("global array length " + std::to_string(global.size()) +
                     " does not match plan element count " +
                     std::to_string(plan.total_elements));
  }
  std::vector<std::vector<const Transfer*>> incoming(static_cast<std::size_t>(plan.new_procs));
  for (const auto& t : plan.transfers) {
    incoming.at(static_cast<std::size_t>(t.dst_rank)).push_back(&t);
  }
  std::vector<std::vector<T>> locals(incoming.size());
  for (std::size_t r = 0; r < incoming.size(); ++r) {
    auto& in = incoming[r];
    std::sort(in.begin(), in.end(),
              [](const Transfer* a, const Transfer* b) { return a->global_start < b->global_start; });
    for (const Transfer* t : in) {
      auto first = global.begin() + t->global_start;
      locals[r].insert(locals[r].end(), first, first + t->count);
    }
  }
  return locals;
}

/// Executes the plan rank-to-rank: every transfer reads its elements from the
/// source rank's local array (laid out per `from`) and writes them into the
/// destination's local array (laid out per `to`).
template <typename T>
[[nodiscard]] std::vector<std::vector<T>> redistribute(const std::vector<std::vector<T>>& old_locals,
                                                       const RedistributionPlan& plan,
                                                       const Layout& from, const Layout& to) {
  if (static_cast<int>(old_locals.size()) != procs(from) || procs(from) != plan.old_procs ||
      procs(to) != plan.new_procs || total_elements(from) != plan.total_elements ||
      total_elements(to) != plan.total_elements) {
    throw ShapeError("local arrays, layouts and plan disagree on shape");
  }
  for (Rank r = 0; r < procs(from); ++r) {
    if (static_cast<ElementIndex>(old_locals[static_cast<std::size_t>(r)].size()) !=
        local_size(from, r)) {
      throw ShapeError("local array of rank " + std::to_string(r) + " has the wrong length");
    }
  }
  std::vector<std::vector<T>> locals(static_cast<std::size_t>(plan.new_procs));
  for (Rank r = 0; r < plan.new_procs; ++r) {
    locals[static_cast<std::size_t>(r)].resize(static_cast<std::size_t>(local_size(to, r)));
  }
  for (const auto& t : plan.transfers) {
    const auto& src = old_locals.at(static_cast<std::size_t>(t.src_rank));
    auto& dst = locals.at(static_cast<std::size_t>(t.dst_rank));
    for (ElementIndex g = t.global_start; g < t.global_start + t.count; ++g) {
      dst[static_cast<std::size_t>(local_index_of(to, g))] =
          src[static_cast<std::size_t>(local_index_of(from, g))];
    }
  }
  return locals;
}

}  // namespace dmrsim
