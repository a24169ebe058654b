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

#include "dmrsim/redistribution.hpp"

#include <sstream>

#include <fmt/core.h>

namespace dmrsim {

namespace {

template <class... Ts>
struct Overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
Overloaded(Ts...) -> Overloaded<Ts...>;

void check_index(const Layout& layout, ElementIndex global_index) {
  if (global_index < 0 || global_index >= total_elements(layout)) {
    throw OutOfBounds(fmt::format("element {} outside [0, {})", global_index,
                                  total_elements(layout)));
  }
}

Direction direction_of(int old_procs, int new_procs) {
  if (new_procs > old_procs) return Direction::Expand;
  if (new_procs < old_procs) return Direction::Shrink;
  return Direction::None;
}

}  // namespace

void validate(const Layout& layout) {
  std::visit(Overloaded{
                 [](const Default1D& l) {
                   if (l.procs < 1) throw IncompatibleGroups("layout needs at least one process");
                   if (l.total_elements < 0 || l.total_elements % l.procs != 0) {
                     throw IndivisibleData(fmt::format("{} elements do not split evenly over {} "
                                                       "processes",
                                                       l.total_elements, l.procs));
                   }
                 },
                 [](const BlockCyclic& l) {
                   if (l.procs < 1) throw IncompatibleGroups("layout needs at least one process");
                   if (l.block_size < 1) throw IndivisibleData("block size must be >= 1");
                   if (l.num_blocks < l.procs) {
                     throw IncompatibleGroups(fmt::format(
                         "{} blocks cannot cover {} processes", l.num_blocks, l.procs));
                   }
                 },
             },
             layout);
}

ElementIndex total_elements(const Layout& layout) {
  return std::visit(Overloaded{
                        [](const Default1D& l) { return l.total_elements; },
                        [](const BlockCyclic& l) { return l.num_blocks * l.block_size; },
                    },
                    layout);
}

int procs(const Layout& layout) {
  return std::visit([](const auto& l) { return l.procs; }, layout);
}

Rank owner_of(const Layout& layout, ElementIndex global_index) {
  check_index(layout, global_index);
  return std::visit(Overloaded{
                        [&](const Default1D& l) {
                          return static_cast<Rank>(global_index / (l.total_elements / l.procs));
                        },
                        [&](const BlockCyclic& l) {
                          return static_cast<Rank>((global_index / l.block_size) % l.procs);
                        },
                    },
                    layout);
}

ElementIndex local_index_of(const Layout& layout, ElementIndex global_index) {
  check_index(layout, global_index);
  return std::visit(Overloaded{
                        [&](const Default1D& l) {
                          return global_index % (l.total_elements / l.procs);
                        },
                        [&](const BlockCyclic& l) {
                          const ElementIndex block = global_index / l.block_size;
                          return (block / l.procs) * l.block_size + global_index % l.block_size;
                        },
                    },
                    layout);
}

ElementIndex local_size(const Layout& layout, Rank rank) {
  if (rank < 0 || rank >= procs(layout)) {
    throw OutOfBounds(fmt::format("rank {} outside group of {}", rank, procs(layout)));
  }
  return std::visit(Overloaded{
                        [](const Default1D& l) { return l.total_elements / l.procs; },
                        [&](const BlockCyclic& l) {
                          const ElementIndex blocks =
                              l.num_blocks / l.procs + (rank < l.num_blocks % l.procs ? 1 : 0);
                          return blocks * l.block_size;
                        },
                    },
                    layout);
}

int resize_factor(int old_procs, int new_procs) {
  if (old_procs < 1 || new_procs < 1) {
    throw IncompatibleGroups(
        fmt::format("process groups must be non-empty ({} -> {})", old_procs, new_procs));
  }
  const int big = std::max(old_procs, new_procs);
  const int small = std::min(old_procs, new_procs);
  if (big % small != 0) {
    throw IncompatibleGroups(fmt::format(
        "{} -> {} is neither a multiple nor a divisor of the parent group", old_procs, new_procs));
  }
  return big / small;
}

RedistributionPlan plan_default(ElementIndex total_elements, int old_procs, int new_procs) {
  const int factor = resize_factor(old_procs, new_procs);
  const int big = std::max(old_procs, new_procs);
  if (total_elements < 0 || total_elements % big != 0) {
    throw IndivisibleData(
        fmt::format("{} elements do not split evenly over {} processes", total_elements, big));
  }

  RedistributionPlan plan;
  plan.direction = direction_of(old_procs, new_procs);
  plan.old_procs = old_procs;
  plan.new_procs = new_procs;
  plan.total_elements = total_elements;
  if (total_elements == 0) return plan;

  const ElementIndex small_chunk = total_elements / big;
  plan.transfers.reserve(static_cast<std::size_t>(big));
  if (new_procs >= old_procs) {
    const ElementIndex parent_chunk = total_elements / old_procs;
    for (Rank parent = 0; parent < old_procs; ++parent) {
      for (int i = 0; i < factor; ++i) {
        plan.transfers.push_back({parent, parent * factor + i,
                                  parent * parent_chunk + i * small_chunk, small_chunk});
      }
    }
  } else {
    for (Rank child = 0; child < new_procs; ++child) {
      for (int i = 0; i < factor; ++i) {
        const Rank parent = child * factor + i;
        plan.transfers.push_back({parent, child, parent * small_chunk, small_chunk});
      }
    }
  }
  return plan;
}

RedistributionPlan plan_blockcyclic(ElementIndex num_blocks, ElementIndex block_size,
                                    int old_procs, int new_procs) {
  (void)resize_factor(old_procs, new_procs);
  if (block_size < 1) throw IndivisibleData("block size must be >= 1");
  if (num_blocks < std::max(old_procs, new_procs)) {
    throw IndivisibleData(fmt::format("{} blocks cannot cover {} processes", num_blocks,
                                      std::max(old_procs, new_procs)));
  }

  RedistributionPlan plan;
  plan.direction = direction_of(old_procs, new_procs);
  plan.old_procs = old_procs;
  plan.new_procs = new_procs;
  plan.total_elements = num_blocks * block_size;

  for (ElementIndex b = 0; b < num_blocks; ++b) {
    const auto src = static_cast<Rank>(b % old_procs);
    const auto dst = static_cast<Rank>(b % new_procs);
    if (!plan.transfers.empty()) {
      auto& last = plan.transfers.back();
      if (last.src_rank == src && last.dst_rank == dst &&
          last.global_start + last.count == b * block_size) {
        last.count += block_size;
        continue;
      }
    }
    plan.transfers.push_back({src, dst, b * block_size, block_size});
  }
  return plan;
}

double transfer_cost(const RedistributionPlan& plan, const LinkModel& link) {
  if (!(link.bandwidth_bytes_per_s > 0.0)) throw InvalidSpec("bandwidth must be > 0");
  double bytes = 0.0;
  std::size_t messages = 0;
  for (const auto& t : plan.transfers) {
    if (t.src_rank == t.dst_rank) continue;
    bytes += static_cast<double>(t.count) * link.bytes_per_element;
    ++messages;
  }
  return link.latency_s_per_transfer * static_cast<double>(messages) +
         bytes / link.bandwidth_bytes_per_s;
}

std::string to_text(const RedistributionPlan& plan) {
  std::string out;
  for (const auto& t : plan.transfers) {
    out += fmt::format("{} {} {} {}\n", t.src_rank, t.dst_rank, t.global_start, t.count);
  }
  return out;
}

std::vector<Transfer> parse_transfers(std::string_view text) {
  std::vector<Transfer> out;
  std::istringstream in{std::string(text)};
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    std::istringstream fields(line);
    Transfer t;
    std::string extra;
    if (!(fields >> t.src_rank >> t.dst_rank >> t.global_start >> t.count) || (fields >> extra) ||
        t.count < 1 || t.src_rank < 0 || t.dst_rank < 0 || t.global_start < 0) {
      throw ParseError(fmt::format("plan line {}: expected 'src dst start count'", lineno));
    }
    out.push_back(t);
  }
  return out;
}

}  // namespace dmrsim
