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

#ifndef CSS_OCF_HPP
#define CSS_OCF_HPP

#include <cstdint>
#include <vector>

#include <json.hpp>

#include "css/network.hpp"
#include "css/sensing.hpp"

namespace css {

enum class EventKind { kInit, kSwitch, kMerge, kTry };

struct TraceEvent {
    EventKind kind;
    long long overhead_tau;  // cumulative, in tau units
    double welfare;          // social welfare after the event
};

struct RunTrace {
    std::vector<TraceEvent> events;
    long long total_overhead_tau = 0;
    int op_count = 0;  // applied switches (OCF) or merges (CF)

    void append(EventKind kind, long long overhead_delta_tau, double welfare);
};

/// The N overlapping coalitions as report-to sets S_i (rows of the
/// reporting matrix) with the derived report-from sets R_i = {i} union
/// {j : i in S_j} (columns) and the per-SU resource ledger.
struct OverlapStructure {
    std::vector<std::vector<int>> report_to;    // S_i, sorted ascending
    std::vector<std::vector<int>> report_from;  // R_i, sorted, always holds i
    ResourceLedger ledger;

    int n_su() const { return static_cast<int>(report_to.size()); }
    int coalition_size(int i) const { return static_cast<int>(report_from[i].size()); }
    long long sum_coalition_size() const;
};

struct SwitchOp {
    int actor = -1;
    int leave = -1;  // coalition id x (actor currently reports to x)
    int join = -1;   // coalition id y
    double gain = 0.0;
    double power_delta_w = 0.0;
};

double social_welfare(const OverlapStructure& structure, const UtilityTable& table);

/// Greedy initialization: each SU joins its neighbor coalitions from
/// nearest to farthest, stopping at the first one that does not fit both
/// budgets.  The trace records the initialization overhead
/// sum_i 2(|R_i|-1) tau.
OverlapStructure initialize_structure(const Scenario& scenario,
                                      const UtilityTable& table, RunTrace& trace,
                                      long long tau = 1);

/// All currently feasible, strictly improving switches of SU i.
std::vector<SwitchOp> enumerate_switches(const OverlapStructure& structure, int i,
                                         const UtilityTable& table,
                                         const Scenario& scenario);

/// Applies a switch after re-validating it; returns false when the op went
/// stale.  Overhead 2 tau (|R_x| + |R_y| - 1) with sizes taken before the
/// switch.
bool apply_switch(OverlapStructure& structure, const SwitchOp& op,
                  const UtilityTable& table, const Scenario& scenario,
                  RunTrace& trace, long long tau = 1);

struct ConvergenceBoundDetail {
    double e_printed = 0.0;  // gap with U evaluated at |N_i|
    double e_plus = 0.0;     // variant with U at |N_i|+1
    double epsilon = 0.0;    // minimum welfare gain per switch
    long long bound = 0;     // ceil(max(E)/epsilon)
};

ConvergenceBoundDetail convergence_bound_detail(const OverlapStructure& initial,
                                                const UtilityTable& table,
                                                const Scenario& scenario);

long long convergence_bound(const OverlapStructure& initial,
                            const UtilityTable& table, const Scenario& scenario);

bool is_switch_stable(const OverlapStructure& structure, const UtilityTable& table,
                      const Scenario& scenario);

struct FormationResult {
    OverlapStructure initial;
    OverlapStructure final;
    RunTrace trace;
    long long bound = 0;
};

/// Runs the switch dynamics to switch-stability.  Each round visits the
/// SUs in a fresh seeded permutation; a visited SU executes its single
/// best-gain switch, ties broken by smaller join id then smaller power
/// delta.  Throws if the switch count ever exceeds the convergence bound.
FormationResult run_formation(const Scenario& scenario, const UtilityTable& table,
                              std::uint64_t seed, long long tau = 1);

/// Per-SU sensing thresholds: mean of coalition-optimal thresholds under
/// the sum-error criterion, max under the constrained-miss criterion.
std::vector<double> decide_thresholds_overlap(const OverlapStructure& structure,
                                              const UtilityTable& table);

/// Snapshot dump: per-SU report-to set, coalition, threshold, budgets.
nlohmann::json overlap_structure_to_json(const OverlapStructure& structure,
                                         const std::vector<double>& thresholds,
                                         const Scenario& scenario);

}  // namespace css

#endif
