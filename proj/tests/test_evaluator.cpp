#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "css/evaluator.hpp"

using namespace css;

namespace {

const SensingParams kDefaults{};

OverlapStructure singleton_structure(int n) {
    OverlapStructure st;
    st.report_to.assign(n, {});
    st.report_from.resize(n);
    for (int i = 0; i < n; ++i) st.report_from[i] = {i};
    st.ledger = ResourceLedger(n);
    return st;
}

}  // namespace

TEST_CASE("singleton at the constrained threshold hits alpha exactly") {
    std::vector<int> coalition{0};
    std::vector<double> thresholds{lambda_b(1, kDefaults)};
    auto m = realized_su_metrics(coalition, thresholds, kDefaults);
    CHECK(std::abs(m.qf - 0.1) < 1e-6);
    CHECK(m.total_error == doctest::Approx(0.5 * (m.qm + m.qf)).epsilon(1e-15));
}

TEST_CASE("homogeneous coalition at lambda_a recovers the utility") {
    for (int n : {1, 2, 5, 10}) {
        double l = lambda_a(n, kDefaults);
        std::vector<int> coalition(n);
        std::vector<double> thresholds(n, l);
        for (int j = 0; j < n; ++j) coalition[j] = j;
        auto m = realized_su_metrics(coalition, thresholds, kDefaults);
        CHECK(std::abs((m.qm + m.qf) - (2.0 - f_a(n, kDefaults))) <= 1e-9);
    }
}

TEST_CASE("fused false alarm is bounded by the best member") {
    std::vector<int> coalition{0, 1, 2};
    std::vector<double> thresholds{1.002, 1.011, 1.0204};
    auto m = realized_su_metrics(coalition, thresholds, kDefaults);
    double best = 1.0;
    for (double l : thresholds) {
        best = std::min(best, local_false_alarm_prob(l, kDefaults));
    }
    CHECK(m.qf <= best + 1e-15);
}

TEST_CASE("realized metrics error paths") {
    std::vector<double> thresholds{1.01};
    CHECK_THROWS_AS(realized_su_metrics(std::vector<int>{}, thresholds, kDefaults),
                    std::domain_error);
    CHECK_THROWS_AS(realized_su_metrics(std::vector<int>{0, 1}, thresholds, kDefaults),
                    std::out_of_range);
}

TEST_CASE("all-singleton network metrics") {
    NetworkConfig config;
    config.n_su = 5;
    Scenario s = generate_scenario(config, 8);
    auto table = UtilityTable::build(Criterion::kSumError, 5, kDefaults);
    auto st = singleton_structure(5);
    RunTrace trace;
    trace.append(EventKind::kInit, 0, social_welfare(st, table));
    std::vector<double> thresholds(5, table.threshold(1));
    auto m = network_metrics(st, thresholds, table, trace, s);
    CHECK(m.report_count == 0);
    CHECK(m.power_utilization == 0.0);
    CHECK(m.bandwidth_utilization == 0.0);
    CHECK(m.mean_coalition_size == 1.0);
    CHECK(m.coalition_size_histogram.at(1) == 5);
    CHECK(m.social_welfare_table ==
          doctest::Approx(5.0 * table.utility(1)).epsilon(1e-12));
    CHECK(m.social_welfare_realized ==
          doctest::Approx(m.social_welfare_table).epsilon(1e-9));
}

TEST_CASE("partition welfare equals realized welfare") {
    NetworkConfig config;
    config.n_su = 25;
    Scenario s = generate_scenario(config, 14);
    for (Criterion c : {Criterion::kSumError, Criterion::kConstrainedMiss}) {
        auto table = UtilityTable::build(c, 25, kDefaults);
        auto res = run_merge_formation(s, table, 14, 1);
        auto thresholds = decide_thresholds_partition(res.partition, table);
        auto m = network_metrics(res.partition, thresholds, table, res.trace, s);
        double expected = 0.0;
        for (const auto& coal : res.partition.coalitions) {
            expected += coal.size() * table.utility(static_cast<int>(coal.size()));
        }
        CHECK(std::abs(m.social_welfare_table - expected) < 1e-12);
        CHECK(std::abs(m.social_welfare_realized - expected) < 1e-9);
    }
}

TEST_CASE("overlap metrics internals agree") {
    NetworkConfig config;
    config.n_su = 30;
    Scenario s = generate_scenario(config, 21);
    auto table = UtilityTable::build(Criterion::kSumError, 30, kDefaults);
    auto res = run_formation(s, table, 21, 1);
    auto thresholds = decide_thresholds_overlap(res.final, table);
    auto m = network_metrics(res.final, thresholds, table, res.trace, s);

    long long via_report_to = 0, via_report_from = 0;
    for (int i = 0; i < 30; ++i) {
        via_report_to += static_cast<long long>(res.final.report_to[i].size());
        via_report_from += res.final.coalition_size(i) - 1;
    }
    CHECK(via_report_to == via_report_from);
    CHECK(m.report_count == via_report_to);
    CHECK(m.total_overhead_tau == res.trace.total_overhead_tau);
    CHECK(m.op_count == res.trace.op_count);
    CHECK(m.power_utilization >= 0.0);
    CHECK(m.power_utilization <= 1.0);
    CHECK(m.bandwidth_utilization <= 1.0);
}

TEST_CASE("constrained overlap thresholds keep every SU under alpha") {
    NetworkConfig config;
    config.n_su = 30;
    auto table = UtilityTable::build(Criterion::kConstrainedMiss, 30, kDefaults);
    for (std::uint64_t seed : {1, 5, 17}) {
        Scenario s = generate_scenario(config, seed);
        auto res = run_formation(s, table, seed, 1);
        auto thresholds = decide_thresholds_overlap(res.final, table);
        for (int i = 0; i < 30; ++i) {
            auto m = realized_su_metrics(res.final.report_from[i], thresholds,
                                         kDefaults);
            CHECK(m.qf <= kDefaults.alpha + 1e-9);
        }
    }
}

TEST_CASE("welfare ratio report") {
    NetworkConfig config;
    config.n_su = 20;
    Scenario s = generate_scenario(config, 33);
    auto table = UtilityTable::build(Criterion::kSumError, 20, kDefaults);
    auto res = run_formation(s, table, 33, 1);

    auto same = proposition2_report(res.initial, res.initial, table);
    CHECK(same.lhs_ratio == doctest::Approx(same.rhs_bound).epsilon(1e-15));
    CHECK(same.holds);

    auto report = proposition2_report(res.initial, res.final, table);
    CHECK(report.holds);
    if (res.trace.op_count > 0) CHECK(report.lhs_ratio > report.rhs_bound);

    auto singles = singleton_structure(20);
    auto trivial = proposition2_report(singles, singles, table);
    CHECK(trivial.rhs_bound == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(trivial.holds);
}
