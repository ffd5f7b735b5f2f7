#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <array>
#include <cmath>
#include <vector>

#include "css/evaluator.hpp"
#include "css/ocf.hpp"
#include "css/sensing.hpp"

using namespace css;

namespace {

Scenario fixed_scenario(NetworkConfig config,
                        std::vector<std::array<double, 2>> positions) {
    config.n_su = static_cast<int>(positions.size());
    Scenario base = generate_scenario(config, 0);
    nlohmann::json j = base.to_json();
    j["positions"] = positions;
    return Scenario::from_json(j);
}

UtilityTable table_for(const Scenario& s, Criterion c = Criterion::kSumError) {
    return UtilityTable::build(c, std::max(s.config.n_su, 2), SensingParams{});
}

}  // namespace

TEST_CASE("initialization: mutual triangle fills up") {
    Scenario s = fixed_scenario(NetworkConfig{},
                                {{0.0, 0.0}, {500.0, 0.0}, {250.0, 400.0}});
    auto table = table_for(s);
    RunTrace trace;
    auto st = initialize_structure(s, table, trace, 1);
    for (int i = 0; i < 3; ++i) CHECK(st.coalition_size(i) == 3);
    CHECK(trace.total_overhead_tau == 12);
    // baseline event plus one event per join, 2 tau each
    CHECK(trace.events.size() == 7);
    CHECK(trace.events[0].kind == EventKind::kInit);
    CHECK(trace.events[0].overhead_tau == 0);
    CHECK(trace.events[0].welfare ==
          doctest::Approx(3.0 * table.utility(1)).epsilon(1e-12));
    CHECK(trace.events.back().welfare ==
          doctest::Approx(social_welfare(st, table)).epsilon(1e-12));
}

TEST_CASE("initialization: isolated SU stays alone") {
    Scenario s = fixed_scenario(NetworkConfig{},
                                {{0.0, 0.0}, {9000.0, 9000.0}});
    auto table = table_for(s);
    RunTrace trace;
    auto st = initialize_structure(s, table, trace, 1);
    CHECK(st.report_to[0].empty());
    CHECK(st.report_from[0] == std::vector<int>{0});
    CHECK(trace.total_overhead_tau == 0);
    CHECK(trace.events.size() == 1);
}

TEST_CASE("initialization: single slot joins only the nearest") {
    NetworkConfig config;
    config.theta_su = 1;
    Scenario s = fixed_scenario(config,
                                {{0.0, 0.0}, {400.0, 0.0}, {0.0, 600.0}});
    auto table = table_for(s);
    RunTrace trace;
    auto st = initialize_structure(s, table, trace, 1);
    CHECK(st.report_to[0] == std::vector<int>{1});
    CHECK(st.report_to[1] == std::vector<int>{0});
    CHECK(st.report_to[2] == std::vector<int>{0});
    CHECK(st.ledger.used_slots[0] == 1);
}

TEST_CASE("initialization: power budget cuts the greedy fill") {
    // costs 8e-3, 2.7e-2 and 9.11e-2 W; the third join would exceed 0.1 W
    Scenario s = fixed_scenario(NetworkConfig{},
                                {{0.0, 0.0},
                                 {2000.0, 0.0},
                                 {0.0, 3000.0},
                                 {4500.0, 0.0}});
    auto table = table_for(s);
    RunTrace trace;
    auto st = initialize_structure(s, table, trace, 1);
    CHECK(st.report_to[0] == std::vector<int>{1, 2});
    CHECK(st.ledger.used_power_w[0] ==
          doctest::Approx(8e-3 + 2.7e-2).epsilon(1e-9));
}

TEST_CASE("convergence bound is zero for a saturated start") {
    Scenario s = fixed_scenario(NetworkConfig{},
                                {{0.0, 0.0}, {500.0, 0.0}, {250.0, 400.0}});
    auto table = table_for(s);
    RunTrace trace;
    auto st = initialize_structure(s, table, trace, 1);
    CHECK(convergence_bound(st, table, s) == 0);
    auto detail = convergence_bound_detail(st, table, s);
    CHECK(detail.epsilon > 0.0);
}

TEST_CASE("convergence bound needs three SUs") {
    Scenario s = fixed_scenario(NetworkConfig{}, {{0.0, 0.0}, {500.0, 0.0}});
    auto table = table_for(s);
    RunTrace trace;
    auto st = initialize_structure(s, table, trace, 1);
    CHECK_THROWS_AS(convergence_bound(st, table, s), std::domain_error);
}

TEST_CASE("epsilon positive at N=10 defaults") {
    NetworkConfig config;
    config.n_su = 10;
    Scenario s = generate_scenario(config, 5);
    auto table = table_for(s);
    RunTrace trace;
    auto st = initialize_structure(s, table, trace, 1);
    CHECK(convergence_bound_detail(st, table, s).epsilon > 0.0);
}

TEST_CASE("a lopsided single-slot start is not switch-stable") {
    NetworkConfig config;
    config.theta_su = 1;
    // scalene triangle: SU2's nearest is SU0, so R_0 grows to 3 while R_2
    // stays a singleton
    Scenario s = fixed_scenario(config,
                                {{0.0, 0.0}, {400.0, 0.0}, {120.0, 430.0}});
    auto table = table_for(s);
    RunTrace trace;
    auto st = initialize_structure(s, table, trace, 1);
    CHECK(st.coalition_size(0) == 3);
    CHECK(st.coalition_size(2) == 1);
    CHECK_FALSE(is_switch_stable(st, table, s));

    auto ops = enumerate_switches(st, 1, table, s);
    REQUIRE(!ops.empty());
    for (const auto& op : ops) {
        CHECK(op.gain > 0.0);
        CHECK(op.actor == 1);
    }
}

TEST_CASE("apply_switch updates structure, trace and ledger") {
    NetworkConfig config;
    config.theta_su = 1;
    Scenario s = fixed_scenario(config,
                                {{0.0, 0.0}, {400.0, 0.0}, {120.0, 430.0}});
    auto table = table_for(s);
    RunTrace trace;
    auto st = initialize_structure(s, table, trace, 1);
    long long sum_before = st.sum_coalition_size();
    double welfare_before = social_welfare(st, table);

    auto ops = enumerate_switches(st, 1, table, s);
    REQUIRE(!ops.empty());
    SwitchOp op = ops.front();  // leave R_0 (size 3), join R_2 (size 1)
    int size_x = st.coalition_size(op.leave);
    int size_y = st.coalition_size(op.join);
    long long overhead_before = trace.total_overhead_tau;

    REQUIRE(apply_switch(st, op, table, s, trace, 1));
    CHECK(trace.total_overhead_tau - overhead_before ==
          2 * (size_x + size_y - 1));
    CHECK(st.sum_coalition_size() == sum_before);
    CHECK(social_welfare(st, table) ==
          doctest::Approx(welfare_before + op.gain).epsilon(1e-12));
    CHECK(trace.op_count == 1);

    // replaying the same op must be rejected as stale
    CHECK_FALSE(apply_switch(st, op, table, s, trace, 1));
}

TEST_CASE("formation reaches a stable structure") {
    NetworkConfig config;
    config.n_su = 20;
    for (std::uint64_t seed : {1, 7, 23}) {
        Scenario s = generate_scenario(config, seed);
        auto table = table_for(s);
        auto res = run_formation(s, table, seed, 1);

        CHECK(is_switch_stable(res.final, table, s));
        CHECK(res.trace.op_count <= res.bound);
        CHECK(res.final.sum_coalition_size() == res.initial.sum_coalition_size());

        double prev = res.trace.events.front().welfare;
        long long prev_overhead = 0;
        bool seen_switch = false;
        for (std::size_t k = 1; k < res.trace.events.size(); ++k) {
            const auto& ev = res.trace.events[k];
            if (ev.kind == EventKind::kSwitch) {
                seen_switch = true;
            } else {
                CHECK(ev.kind == EventKind::kInit);
                CHECK_FALSE(seen_switch);  // all joins precede the dynamics
            }
            CHECK(ev.welfare > prev);
            CHECK(ev.overhead_tau >= prev_overhead);
            prev = ev.welfare;
            prev_overhead = ev.overhead_tau;
        }
        for (int i = 0; i < config.n_su; ++i) {
            CHECK(res.final.ledger.used_power_w[i] <= config.p_su_w + 1e-12);
            CHECK(res.final.ledger.used_slots[i] <= config.theta_su);
        }
    }
}

TEST_CASE("formation is deterministic per seed") {
    NetworkConfig config;
    config.n_su = 15;
    Scenario s = generate_scenario(config, 9);
    auto table = table_for(s);
    auto a = run_formation(s, table, 9, 1);
    auto b = run_formation(s, table, 9, 1);
    CHECK(a.final.report_to == b.final.report_to);
    CHECK(a.trace.total_overhead_tau == b.trace.total_overhead_tau);
    CHECK(a.trace.op_count == b.trace.op_count);
}

TEST_CASE("overlap thresholds follow the per-criterion aggregation") {
    Scenario s = fixed_scenario(NetworkConfig{},
                                {{0.0, 0.0}, {500.0, 0.0}, {9000.0, 9000.0}});
    // hand-built structure: SU0 reports to SU1 only
    OverlapStructure st;
    st.report_to = {{1}, {}, {}};
    st.report_from = {{0}, {0, 1}, {2}};
    st.ledger = ResourceLedger(3);
    st.ledger.used_power_w[0] = report_cost_w(s, 0, 1);
    st.ledger.used_slots[0] = 1;

    auto sum_table = table_for(s, Criterion::kSumError);
    auto l = decide_thresholds_overlap(st, sum_table);
    CHECK(l[0] == doctest::Approx(0.5 * (sum_table.threshold(1) +
                                         sum_table.threshold(2))).epsilon(1e-12));
    CHECK(l[1] == sum_table.threshold(2));
    CHECK(l[2] == sum_table.threshold(1));

    auto miss_table = table_for(s, Criterion::kConstrainedMiss);
    auto lm = decide_thresholds_overlap(st, miss_table);
    // lambda_b decreases with size, so the max picks the smaller coalition
    CHECK(lm[0] == miss_table.threshold(1));
    CHECK(lm[1] == miss_table.threshold(2));
}

TEST_CASE("structure snapshot json") {
    NetworkConfig config;
    config.n_su = 6;
    Scenario s = generate_scenario(config, 4);
    auto table = table_for(s);
    auto res = run_formation(s, table, 4, 1);
    auto thresholds = decide_thresholds_overlap(res.final, table);
    auto j = overlap_structure_to_json(res.final, thresholds, s);
    CHECK(j.at("kind") == "overlapping");
    CHECK(j.at("sus").size() == 6);
    for (const auto& su : j.at("sus")) {
        CHECK(su.contains("report_to"));
        CHECK(su.contains("coalition"));
        CHECK(su.contains("lambda"));
    }
}
