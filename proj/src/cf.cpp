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

#include "css/cf.hpp"

#include <algorithm>
#include <stdexcept>

#include "css/rng.hpp"

namespace css {

void Partition::check_valid() const {
    std::vector<int> seen(n_su(), 0);
    for (std::size_t c = 0; c < coalitions.size(); ++c) {
        if (coalitions[c].empty()) throw std::runtime_error("Partition: empty coalition");
        bool head_in = false;
        for (int m : coalitions[c]) {
            if (seen[m]++) throw std::runtime_error("Partition: SU in two coalitions");
            if (coalition_of[m] != static_cast<int>(c)) {
                throw std::runtime_error("Partition: coalition_of mismatch");
            }
            if (m == head[c]) head_in = true;
        }
        if (!head_in) throw std::runtime_error("Partition: head outside its coalition");
    }
    for (int i = 0; i < n_su(); ++i) {
        if (!seen[i]) throw std::runtime_error("Partition: SU not covered");
    }
}

bool merge_feasible(const std::vector<int>& c1, const std::vector<int>& c2,
                    const Scenario& scenario) {
    std::vector<int> merged(c1);
    merged.insert(merged.end(), c2.begin(), c2.end());
    int size = static_cast<int>(merged.size());
    if ((size - 1) * scenario.config.theta0 > scenario.config.theta_su) return false;
    for (int a = 0; a < size; ++a) {
        for (int b = a + 1; b < size; ++b) {
            if (scenario.dist[merged[a]][merged[b]] > scenario.radius_m) return false;
        }
    }
    for (int i : merged) {
        double power = 0.0;
        for (int j : merged) {
            if (j != i) power += report_cost_w(scenario, i, j);
        }
        if (power > scenario.config.p_su_w + 1e-12) return false;
    }
    return true;
}

double partition_welfare(const Partition& partition, const UtilityTable& table) {
    double w = 0.0;
    for (const auto& c : partition.coalitions) {
        w += static_cast<double>(c.size()) * table.utility(static_cast<int>(c.size()));
    }
    return w;
}

MergeFormationResult run_merge_formation(const Scenario& scenario,
                                         const UtilityTable& table,
                                         std::uint64_t seed, long long tau) {
    int n = scenario.config.n_su;
    MergeFormationResult res;
    Partition& p = res.partition;
    p.coalitions.resize(n);
    p.head.resize(n);
    p.coalition_of.resize(n);
    for (int i = 0; i < n; ++i) {
        p.coalitions[i] = {i};
        p.head[i] = i;
        p.coalition_of[i] = i;
    }
    for (int i = 0; i < n; ++i) {
        for (int j : scenario.neighbors[i]) p.tags[{i, j}] = 1;
    }
    res.trace.append(EventKind::kInit, 0, partition_welfare(p, table));

    Rng rng(seed);
    for (;;) {
        std::vector<std::pair<int, int>> live;
        for (const auto& [key, val] : p.tags) {
            if (val == 1) live.push_back(key);
        }
        if (live.empty()) break;
        auto [i, j] = live[rng.below(live.size())];
        ++res.attempt_count;
        int ci = p.coalition_of[i];
        int cj = p.coalition_of[j];
        const std::vector<int>& src = p.coalitions[ci];
        const std::vector<int>& dst = p.coalitions[cj];

        // Head i transmits its full coalition description regardless of the
        // outcome.
        long long t_try = 0;
        for (int k : src) {
            t_try += (2LL * static_cast<long long>(scenario.neighbors[k].size()) + 1) * tau;
        }
        res.trace.append(EventKind::kTry, t_try, partition_welfare(p, table));

        if (merge_feasible(src, dst, scenario)) {
            long long t_merge =
                (2LL * static_cast<long long>(dst.size()) - 1) *
                static_cast<long long>(src.size()) * tau;
            // Receiver j heads the merged coalition; head i retires.
            std::vector<int> merged(dst);
            merged.insert(merged.end(), src.begin(), src.end());
            std::sort(merged.begin(), merged.end());
            p.coalitions[cj] = std::move(merged);
            for (int k : p.coalitions[cj]) p.coalition_of[k] = cj;
            // compact: drop coalition ci
            int last = static_cast<int>(p.coalitions.size()) - 1;
            if (ci != last) {
                p.coalitions[ci] = std::move(p.coalitions[last]);
                p.head[ci] = p.head[last];
                for (int k : p.coalitions[ci]) p.coalition_of[k] = ci;
            }
            p.coalitions.pop_back();
            p.head.pop_back();
            // Tags of the retired head and any tags toward it are deleted;
            // other heads keep their existing tags toward j.
            for (auto it = p.tags.begin(); it != p.tags.end();) {
                if (it->first.first == i || it->first.second == i) {
                    it = p.tags.erase(it);
                } else {
                    ++it;
                }
            }
            res.trace.append(EventKind::kMerge, t_merge, partition_welfare(p, table));
            res.trace.op_count += 1;
        } else {
            p.tags[{i, j}] = 0;
            auto back = p.tags.find({j, i});
            if (back != p.tags.end()) back->second = 0;
        }
    }
    p.check_valid();
    return res;
}

std::vector<double> decide_thresholds_partition(const Partition& partition,
                                                const UtilityTable& table) {
    std::vector<double> lambda(partition.n_su(), 0.0);
    for (const auto& c : partition.coalitions) {
        double l = table.threshold(static_cast<int>(c.size()));
        for (int m : c) lambda[m] = l;
    }
    return lambda;
}

nlohmann::json partition_to_json(const Partition& partition,
                                 const std::vector<double>& thresholds,
                                 const Scenario& scenario) {
    nlohmann::json coalitions = nlohmann::json::array();
    for (std::size_t c = 0; c < partition.coalitions.size(); ++c) {
        coalitions.push_back({{"members", partition.coalitions[c]},
                              {"head", partition.head[c]}});
    }
    nlohmann::json sus = nlohmann::json::array();
    for (int i = 0; i < partition.n_su(); ++i) {
        sus.push_back({{"id", i},
                       {"position", scenario.positions[i]},
                       {"lambda", thresholds.empty() ? 0.0 : thresholds[i]}});
    }
    return nlohmann::json{{"kind", "non_overlapping"}, {"coalitions", coalitions},
                          {"sus", sus}};
}

}  // namespace css
