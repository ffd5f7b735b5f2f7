/*
 * Copyright 2026 The ocss Authors.
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

#ifndef CSS_CF_HPP
#define CSS_CF_HPP

#include <cstdint>
#include <map>
#include <utility>
#include <vector>

#include <json.hpp>

#include "css/network.hpp"
#include "css/ocf.hpp"
#include "css/sensing.hpp"

namespace css {

/// Disjoint partition of the SUs with per-coalition heads and the merge
/// tags held between neighboring heads.  A tag entry exists only while
/// both endpoints are live heads; tags are never reset to 1.
struct Partition {
    std::vector<std::vector<int>> coalitions;       // sorted member lists
    std::vector<int> head;                          // per coalition, an SU id
    std::vector<int> coalition_of;                  // per SU -> coalition index
    std::map<std::pair<int, int>, int> tags;        // (head, neighbor head) -> 0/1

    int n_su() const { return static_cast<int>(coalition_of.size()); }
    void check_valid() const;  // disjoint cover, heads in own coalitions
};

/// All three merge conditions of the pair (c1, c2): per-member power over
/// the union, union bandwidth, and every pair in the union being neighbors.
bool merge_feasible(const std::vector<int>& c1, const std::vector<int>& c2,
                    const Scenario& scenario);

double partition_welfare(const Partition& partition, const UtilityTable& table);

struct MergeFormationResult {
    Partition partition;
    RunTrace trace;
    long long attempt_count = 0;
};

/// Merge dynamics from all-singletons: a seeded-random head with a live
/// tag sends its full coalition info to the tagged head, which merges on
/// success (becoming the merged head) or zeroes the tag pair on failure.
MergeFormationResult run_merge_formation(const Scenario& scenario,
                                         const UtilityTable& table,
                                         std::uint64_t seed, long long tau = 1);

/// Every member of a coalition C receives the size-|C| optimal threshold.
std::vector<double> decide_thresholds_partition(const Partition& partition,
                                                const UtilityTable& table);

nlohmann::json partition_to_json(const Partition& partition,
                                 const std::vector<double>& thresholds,
                                 const Scenario& scenario);

}  // namespace css

#endif
