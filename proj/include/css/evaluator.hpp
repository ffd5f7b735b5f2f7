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

#ifndef CSS_EVALUATOR_HPP
#define CSS_EVALUATOR_HPP

#include <map>
#include <span>
#include <vector>

#include "css/cf.hpp"
#include "css/network.hpp"
#include "css/ocf.hpp"
#include "css/sensing.hpp"

namespace css {

/// Realized fused error probabilities at one SU, with the equal-prior
/// total error (qm + qf) / 2.
struct SuMetrics {
    double qm = 0.0;
    double qf = 0.0;
    double total_error = 0.0;
};

/// Fused AND-rule performance of the coalition reporting to one SU under
/// the actual (possibly heterogeneous) thresholds.
SuMetrics realized_su_metrics(std::span<const int> coalition,
                              std::span<const double> thresholds,
                              const SensingParams& params);

struct NetworkMetrics {
    double mean_total_error = 0.0;
    double mean_miss = 0.0;
    double max_qf = 0.0;
    double social_welfare_table = 0.0;
    double social_welfare_realized = 0.0;
    double mean_coalition_size = 0.0;
    std::map<int, int> coalition_size_histogram;
    double power_utilization = 0.0;
    double bandwidth_utilization = 0.0;
    long long report_count = 0;
    long long total_overhead_tau = 0;
    int op_count = 0;
};

NetworkMetrics network_metrics(const OverlapStructure& structure,
                               const std::vector<double>& thresholds,
                               const UtilityTable& table, const RunTrace& trace,
                               const Scenario& scenario);

NetworkMetrics network_metrics(const Partition& partition,
                               const std::vector<double>& thresholds,
                               const UtilityTable& table, const RunTrace& trace,
                               const Scenario& scenario);

struct Proposition2Report {
    double lhs_ratio = 0.0;   // final welfare over the size-capped welfare proxy
    double rhs_bound = 0.0;   // initial welfare over the same proxy
    bool holds = false;
};

/// Computable proxy for the worst-case welfare ratio guarantee: both sides
/// are normalized by N * U(ceil(sum_0 |R_i| / N)).
Proposition2Report proposition2_report(const OverlapStructure& cs0,
                                       const OverlapStructure& csf,
                                       const UtilityTable& table);

}  // namespace css

#endif
