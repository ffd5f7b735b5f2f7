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

#include "css/evaluator.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace css {

SuMetrics realized_su_metrics(std::span<const int> coalition,
                              std::span<const double> thresholds,
                              const SensingParams& params) {
    if (coalition.empty()) throw std::domain_error("realized_su_metrics: empty coalition");
    std::vector<double> miss, fa;
    miss.reserve(coalition.size());
    fa.reserve(coalition.size());
    for (int j : coalition) {
        if (j < 0 || j >= static_cast<int>(thresholds.size())) {
            throw std::out_of_range("realized_su_metrics: missing threshold");
        }
        miss.push_back(local_miss_prob(thresholds[j], params));
        fa.push_back(local_false_alarm_prob(thresholds[j], params));
    }
    SuMetrics m;
    m.qm = fused_and_miss(miss);
    m.qf = fused_and_false_alarm(fa);
    m.total_error = 0.5 * (m.qm + m.qf);
    return m;
}

namespace {

double realized_welfare(Criterion criterion, double qm, double qf) {
    return criterion == Criterion::kSumError ? 2.0 - (qm + qf) : 1.0 - qm;
}

}  // namespace

NetworkMetrics network_metrics(const OverlapStructure& structure,
                               const std::vector<double>& thresholds,
                               const UtilityTable& table, const RunTrace& trace,
                               const Scenario& scenario) {
    int n = structure.n_su();
    NetworkMetrics m;
    long long size_sum = 0;
    for (int i = 0; i < n; ++i) {
        auto su = realized_su_metrics(structure.report_from[i], thresholds,
                                      table.params());
        m.mean_total_error += su.total_error;
        m.mean_miss += su.qm;
        m.max_qf = std::max(m.max_qf, su.qf);
        m.social_welfare_realized += realized_welfare(table.criterion(), su.qm, su.qf);
        int size = structure.coalition_size(i);
        size_sum += size;
        m.coalition_size_histogram[size] += 1;
        m.report_count += static_cast<long long>(structure.report_to[i].size());
        m.power_utilization += structure.ledger.used_power_w[i] / scenario.config.p_su_w;
        m.bandwidth_utilization +=
            static_cast<double>(structure.ledger.used_slots[i]) / scenario.config.theta_su;
    }
    m.mean_total_error /= n;
    m.mean_miss /= n;
    m.power_utilization /= n;
    m.bandwidth_utilization /= n;
    m.mean_coalition_size = static_cast<double>(size_sum) / n;
    m.social_welfare_table = social_welfare(structure, table);
    m.total_overhead_tau = trace.total_overhead_tau;
    m.op_count = trace.op_count;
    return m;
}

NetworkMetrics network_metrics(const Partition& partition,
                               const std::vector<double>& thresholds,
                               const UtilityTable& table, const RunTrace& trace,
                               const Scenario& scenario) {
    int n = partition.n_su();
    NetworkMetrics m;
    for (const auto& c : partition.coalitions) {
        int size = static_cast<int>(c.size());
        m.report_count += static_cast<long long>(size) * (size - 1);
        for (int i : c) {
            auto su = realized_su_metrics(c, thresholds, table.params());
            m.mean_total_error += su.total_error;
            m.mean_miss += su.qm;
            m.max_qf = std::max(m.max_qf, su.qf);
            m.social_welfare_realized +=
                realized_welfare(table.criterion(), su.qm, su.qf);
            m.mean_coalition_size += size;  // coalition size per SU
            m.coalition_size_histogram[size] += 1;
            double power = 0.0;
            for (int j : c) {
                if (j != i) power += report_cost_w(scenario, i, j);
            }
            m.power_utilization += power / scenario.config.p_su_w;
            m.bandwidth_utilization +=
                static_cast<double>((size - 1) * scenario.config.theta0) /
                scenario.config.theta_su;
        }
    }
    m.mean_total_error /= n;
    m.mean_miss /= n;
    m.mean_coalition_size /= n;
    m.power_utilization /= n;
    m.bandwidth_utilization /= n;
    m.social_welfare_table = partition_welfare(partition, table);
    m.total_overhead_tau = trace.total_overhead_tau;
    m.op_count = trace.op_count;
    return m;
}

Proposition2Report proposition2_report(const OverlapStructure& cs0,
                                       const OverlapStructure& csf,
                                       const UtilityTable& table) {
    int n = cs0.n_su();
    long long sum0 = cs0.sum_coalition_size();
    int cap_size = static_cast<int>((sum0 + n - 1) / n);  // ceil(sum0 / N)
    double denom = n * table.utility(std::max(cap_size, 1));
    Proposition2Report r;
    r.lhs_ratio = social_welfare(csf, table) / denom;
    r.rhs_bound = social_welfare(cs0, table) / denom;
    r.holds = r.lhs_ratio >= r.rhs_bound - 1e-12;
    return r;
}

}  // namespace css
