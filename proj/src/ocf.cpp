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

#include "css/ocf.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <numeric>
#include <sstream>
#include <stdexcept>

#include "css/rng.hpp"

namespace css {

namespace {

void sorted_insert(std::vector<int>& v, int x) {
    v.insert(std::lower_bound(v.begin(), v.end(), x), x);
}

void sorted_erase(std::vector<int>& v, int x) {
    auto it = std::lower_bound(v.begin(), v.end(), x);
    if (it != v.end() && *it == x) v.erase(it);
}

bool sorted_contains(const std::vector<int>& v, int x) {
    return std::binary_search(v.begin(), v.end(), x);
}

}  // namespace

void RunTrace::append(EventKind kind, long long overhead_delta_tau, double welfare) {
    total_overhead_tau += overhead_delta_tau;
    events.push_back({kind, total_overhead_tau, welfare});
}

long long OverlapStructure::sum_coalition_size() const {
    long long s = 0;
    for (const auto& r : report_from) s += static_cast<long long>(r.size());
    return s;
}

double social_welfare(const OverlapStructure& structure, const UtilityTable& table) {
    double w = 0.0;
    for (int i = 0; i < structure.n_su(); ++i) {
        w += table.utility(structure.coalition_size(i));
    }
    return w;
}

OverlapStructure initialize_structure(const Scenario& scenario,
                                      const UtilityTable& table, RunTrace& trace,
                                      long long tau) {
    int n = scenario.config.n_su;
    if (table.n_max() < n) {
        throw std::invalid_argument("initialize_structure: utility table too small");
    }
    OverlapStructure st;
    st.report_to.assign(n, {});
    st.report_from.assign(n, {});
    st.ledger = ResourceLedger(n);
    for (int i = 0; i < n; ++i) st.report_from[i].push_back(i);

    // One trace event per join message (2 tau each, Sum_i 2(|R_i|-1) tau in
    // total), starting from the no-cooperation welfare.
    double welfare = n * table.utility(1);
    trace.append(EventKind::kInit, 0, welfare);
    for (int i = 0; i < n; ++i) {
        for (int nb : scenario.neighbors[i]) {
            double cost = report_cost_w(scenario, i, nb);
            if (!can_afford(st.ledger, scenario.config, i, cost, scenario.config.theta0)) {
                break;  // stop at the first infeasible neighbor
            }
            st.ledger.used_power_w[i] += cost;
            st.ledger.used_slots[i] += scenario.config.theta0;
            sorted_insert(st.report_to[i], nb);
            sorted_insert(st.report_from[nb], i);
            welfare += table.phi(st.coalition_size(nb));
            trace.append(EventKind::kInit, 2 * tau, welfare);
        }
    }
    return st;
}

std::vector<SwitchOp> enumerate_switches(const OverlapStructure& structure, int i,
                                         const UtilityTable& table,
                                         const Scenario& scenario) {
    std::vector<SwitchOp> ops;
    const auto& s_i = structure.report_to[i];
    double remaining = scenario.config.p_su_w - structure.ledger.used_power_w[i];
    for (int x : s_i) {
        double cost_x = report_cost_w(scenario, i, x);
        double phi_leave = table.phi(structure.coalition_size(x));
        for (int y : scenario.neighbors[i]) {
            if (y == i || sorted_contains(s_i, y)) continue;
            double cost_y = report_cost_w(scenario, i, y);
            double delta = cost_y - cost_x;
            if (delta > remaining + 1e-12) continue;
            double gain = table.phi(structure.coalition_size(y) + 1) - phi_leave;
            if (gain > 0.0) {
                ops.push_back({i, x, y, gain, delta});
            }
        }
    }
    return ops;
}

bool apply_switch(OverlapStructure& structure, const SwitchOp& op,
                  const UtilityTable& table, const Scenario& scenario,
                  RunTrace& trace, long long tau) {
    int i = op.actor, x = op.leave, y = op.join;
    if (x == y || y == i || x == i) return false;
    if (!sorted_contains(structure.report_to[i], x)) return false;
    if (sorted_contains(structure.report_to[i], y)) return false;
    const auto& nbrs = scenario.neighbors[i];  // sorted by distance, not id
    if (std::find(nbrs.begin(), nbrs.end(), y) == nbrs.end()) return false;
    double cost_x = report_cost_w(scenario, i, x);
    double cost_y = report_cost_w(scenario, i, y);
    double remaining = scenario.config.p_su_w - structure.ledger.used_power_w[i];
    if (cost_y - cost_x > remaining + 1e-12) return false;
    int size_x = structure.coalition_size(x);
    int size_y = structure.coalition_size(y);
    double gain = table.phi(size_y + 1) - table.phi(size_x);
    if (!(gain > 0.0)) return false;

    sorted_erase(structure.report_to[i], x);
    sorted_insert(structure.report_to[i], y);
    sorted_erase(structure.report_from[x], i);
    sorted_insert(structure.report_from[y], i);
    structure.ledger.used_power_w[i] += cost_y - cost_x;
    // bandwidth unchanged: one report out, one in

    long long overhead = 2LL * tau * (size_x + size_y - 1);
    double welfare = trace.events.empty() ? social_welfare(structure, table)
                                          : trace.events.back().welfare + gain;
    trace.append(EventKind::kSwitch, overhead, welfare);
    trace.op_count += 1;
    return true;
}

ConvergenceBoundDetail convergence_bound_detail(const OverlapStructure& initial,
                                                const UtilityTable& table,
                                                const Scenario& scenario) {
    int n = scenario.config.n_su;
    if (n < 3) throw std::domain_error("convergence_bound: needs N >= 3");
    ConvergenceBoundDetail d;
    d.epsilon = 2.0 * table.utility(n - 1) - table.utility(n) - table.utility(n - 2);
    double welfare0 = social_welfare(initial, table);
    double cap_printed = 0.0, cap_plus = 0.0;
    for (int i = 0; i < n; ++i) {
        int deg = static_cast<int>(scenario.neighbors[i].size());
        // |N_i| = 0 leaves R_i = {i} forever; clamp the printed formula to
        // U(1) so the upper bound stays well defined.
        cap_printed += table.utility(std::max(deg, 1));
        cap_plus += table.utility(std::min(deg + 1, table.n_max()));
    }
    d.e_printed = cap_printed - welfare0;
    d.e_plus = cap_plus - welfare0;
    double e = std::max({d.e_printed, d.e_plus, 0.0});
    d.bound = static_cast<long long>(std::ceil(e / d.epsilon));
    return d;
}

long long convergence_bound(const OverlapStructure& initial,
                            const UtilityTable& table, const Scenario& scenario) {
    return convergence_bound_detail(initial, table, scenario).bound;
}

bool is_switch_stable(const OverlapStructure& structure, const UtilityTable& table,
                      const Scenario& scenario) {
    for (int i = 0; i < structure.n_su(); ++i) {
        if (!enumerate_switches(structure, i, table, scenario).empty()) return false;
    }
    return true;
}

namespace {

// Best-gain switch with deterministic tie-breaks: smaller join coalition
// id, then smaller power delta.
const SwitchOp* pick_best(const std::vector<SwitchOp>& ops) {
    const SwitchOp* best = nullptr;
    for (const auto& op : ops) {
        if (!best || op.gain > best->gain ||
            (op.gain == best->gain &&
             (op.join < best->join ||
              (op.join == best->join && op.power_delta_w < best->power_delta_w)))) {
            best = &op;
        }
    }
    return best;
}

void reconcile_ledger(const OverlapStructure& st, const Scenario& scenario) {
    for (int i = 0; i < st.n_su(); ++i) {
        double power = 0.0;
        for (int j : st.report_to[i]) power += report_cost_w(scenario, i, j);
        if (std::fabs(power - st.ledger.used_power_w[i]) > 1e-9) {
            throw std::runtime_error("OCF ledger drifted from recomputed power use");
        }
        int slots = static_cast<int>(st.report_to[i].size()) * scenario.config.theta0;
        if (slots != st.ledger.used_slots[i]) {
            throw std::runtime_error("OCF ledger slot count mismatch");
        }
        if (power > scenario.config.p_su_w + 1e-9 || slots > scenario.config.theta_su) {
            throw std::runtime_error("OCF budget violated");
        }
    }
}

}  // namespace

FormationResult run_formation(const Scenario& scenario, const UtilityTable& table,
                              std::uint64_t seed, long long tau) {
    FormationResult res;
    res.final = initialize_structure(scenario, table, res.trace, tau);
    res.initial = res.final;
    int n = scenario.config.n_su;
    res.bound = n >= 3 ? convergence_bound(res.final, table, scenario)
                       : std::numeric_limits<long long>::max();

    Rng rng(seed);
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    bool changed = true;
    while (changed) {
        changed = false;
        rng.shuffle(order);
        for (int i : order) {
            auto ops = enumerate_switches(res.final, i, table, scenario);
            const SwitchOp* best = pick_best(ops);
            if (!best) continue;
            if (!apply_switch(res.final, *best, table, scenario, res.trace, tau)) {
                continue;  // stale; will be re-enumerated next visit
            }
            changed = true;
            if (res.trace.op_count > res.bound) {
                std::ostringstream os;
                os << "run_formation: switch count " << res.trace.op_count
                   << " exceeded convergence bound " << res.bound;
                for (const auto& ev : res.trace.events) {
                    std::fprintf(stderr, "trace: kind=%d overhead=%lld welfare=%.12g\n",
                                 static_cast<int>(ev.kind), ev.overhead_tau, ev.welfare);
                }
                throw std::runtime_error(os.str());
            }
        }
        reconcile_ledger(res.final, scenario);
    }
    return res;
}

std::vector<double> decide_thresholds_overlap(const OverlapStructure& structure,
                                              const UtilityTable& table) {
    int n = structure.n_su();
    std::vector<double> lambda(n, 0.0);
    for (int i = 0; i < n; ++i) {
        // SU i belongs to R_j for j in S_i and to its own R_i.
        double sum = 0.0, mx = -1.0;
        int count = 0;
        auto absorb = [&](int j) {
            double l = table.threshold(structure.coalition_size(j));
            sum += l;
            mx = std::max(mx, l);
            ++count;
        };
        absorb(i);
        for (int j : structure.report_to[i]) absorb(j);
        lambda[i] = table.criterion() == Criterion::kSumError ? sum / count : mx;
    }
    return lambda;
}

nlohmann::json overlap_structure_to_json(const OverlapStructure& structure,
                                         const std::vector<double>& thresholds,
                                         const Scenario& scenario) {
    nlohmann::json sus = nlohmann::json::array();
    for (int i = 0; i < structure.n_su(); ++i) {
        sus.push_back({
            {"id", i},
            {"position", scenario.positions[i]},
            {"report_to", structure.report_to[i]},
            {"coalition", structure.report_from[i]},
            {"lambda", thresholds.empty() ? 0.0 : thresholds[i]},
            {"used_power_w", structure.ledger.used_power_w[i]},
            {"used_slots", structure.ledger.used_slots[i]},
        });
    }
    return nlohmann::json{{"kind", "overlapping"}, {"sus", sus}};
}

}  // namespace css
