// Command-line front end: experiment sweeps, Monte Carlo replication and
// CSV/JSON emission.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "css/cf.hpp"
#include "css/experiment.hpp"
#include "css/ocf.hpp"

namespace {

void write_snapshots(const css::ExperimentConfig& config, const std::string& prefix) {
    std::string sweep_param = config.sweep ? config.sweep->param : "none";
    std::vector<double> values =
        config.sweep ? config.sweep->values : std::vector<double>{0.0};
    for (double v : values) {
        css::NetworkConfig net = css::apply_sweep(config.network, sweep_param, v);
        auto table = css::UtilityTable::build(config.criterion,
                                              std::max(net.n_su, 2), config.sensing);
        css::Scenario scenario = css::generate_scenario(net, config.base_seed);
        nlohmann::json snap;
        snap["scenario"] = scenario.to_json();
        if (config.algorithm == css::Algorithm::kCf) {
            auto res = css::run_merge_formation(scenario, table, config.base_seed,
                                                config.tau);
            auto thresholds = css::decide_thresholds_partition(res.partition, table);
            snap["structure"] = css::partition_to_json(res.partition, thresholds, scenario);
        } else {
            auto res = css::run_formation(scenario, table, config.base_seed, config.tau);
            auto thresholds = css::decide_thresholds_overlap(res.final, table);
            snap["structure"] =
                css::overlap_structure_to_json(res.final, thresholds, scenario);
        }
        std::string path = prefix;
        if (config.sweep) path += "_" + std::to_string(v);
        path += ".json";
        std::ofstream out(path);
        if (!out) throw std::runtime_error("cannot open snapshot path " + path);
        out << snap.dump(2) << '\n';
    }
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Distributed cooperative spectrum sensing simulator"};

    std::string config_path, criterion_str, algorithm_str, out_path, format = "csv";
    std::string snapshot_prefix;
    int n_su = -1, theta_su = -1, runs = -1;
    double power_dbm = std::nan("");
    long long seed = -1;
    bool serial = false;

    app.add_option("--config", config_path, "JSON experiment config file");
    app.add_option("--n-su", n_su, "Number of SUs (override)");
    app.add_option("--power-dbm", power_dbm, "Per-SU power budget in dBm (override)");
    app.add_option("--theta-su", theta_su, "Per-SU slot budget (override)");
    app.add_option("--criterion", criterion_str,
                   "Sensing criterion: sum | constrained");
    app.add_option("--algorithm", algorithm_str, "Algorithm: ocf | cf | local");
    app.add_option("--runs", runs, "Monte Carlo runs per sweep point");
    app.add_option("--seed", seed, "Base seed");
    app.add_option("--out", out_path, "Output path (default: stdout)");
    app.add_option("--format", format, "Output format: csv | json");
    app.add_option("--snapshot", snapshot_prefix,
                   "Dump a structure snapshot for the first run of each sweep point");
    app.add_flag("--serial", serial, "Run single-threaded (reference path)");

    CLI11_PARSE(app, argc, argv);

    try {
        css::ExperimentConfig config;
        if (!config_path.empty()) {
            std::ifstream in(config_path);
            if (!in) throw std::runtime_error("cannot open config " + config_path);
            nlohmann::json j;
            in >> j;
            config = css::ExperimentConfig::from_json(j);
        }
        if (n_su > 0) config.network.n_su = n_su;
        if (!std::isnan(power_dbm)) {
            config.network.p_su_w = std::pow(10.0, (power_dbm - 30.0) / 10.0);
        }
        if (theta_su > 0) config.network.theta_su = theta_su;
        if (!criterion_str.empty()) {
            config.criterion = css::criterion_from_string(criterion_str);
        }
        if (!algorithm_str.empty()) {
            config.algorithm = css::algorithm_from_string(algorithm_str);
        }
        if (runs > 0) config.runs = runs;
        if (seed >= 0) config.base_seed = static_cast<std::uint64_t>(seed);
        config.validate();

        auto rows = css::run_experiment(
            config, serial ? css::ExecMode::kSerial : css::ExecMode::kParallel);

        if (!snapshot_prefix.empty()) write_snapshots(config, snapshot_prefix);

        if (out_path.empty()) {
            if (format == "csv") {
                css::emit_csv(rows, std::cout);
            } else {
                css::emit_json(rows, std::cout);
            }
        } else {
            css::emit(rows, format, out_path);
        }
    } catch (const std::exception& e) {
        std::fprintf(stderr, "error: %s\n", e.what());
        return 1;
    }
    return 0;
}
