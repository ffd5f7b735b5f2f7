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

#include "css/experiment.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <memory>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "css/cf.hpp"
#include "css/ocf.hpp"

namespace css {

std::string to_string(Algorithm a) {
    switch (a) {
        case Algorithm::kOcf: return "ocf";
        case Algorithm::kCf: return "cf";
        case Algorithm::kLocal: return "local";
    }
    return "?";
}

Algorithm algorithm_from_string(const std::string& s) {
    if (s == "ocf") return Algorithm::kOcf;
    if (s == "cf") return Algorithm::kCf;
    if (s == "local") return Algorithm::kLocal;
    throw std::invalid_argument("unknown algorithm: " + s);
}

void ExperimentConfig::validate() const {
    network.validate();
    sensing.validate();
    if (runs < 1) throw std::invalid_argument("ExperimentConfig: runs must be >= 1");
    if (tau < 1) throw std::invalid_argument("ExperimentConfig: tau must be >= 1");
    if (sweep) {
        if (sweep->param != "n_su" && sweep->param != "p_su_w" &&
            sweep->param != "theta_su") {
            throw std::invalid_argument("ExperimentConfig: unknown sweep param " +
                                        sweep->param);
        }
        if (sweep->values.empty()) {
            throw std::invalid_argument("ExperimentConfig: empty sweep values");
        }
        for (double v : sweep->values) {
            if (!(v > 0.0)) throw std::invalid_argument("ExperimentConfig: sweep values must be positive");
        }
    }
}

ExperimentConfig ExperimentConfig::from_json(const nlohmann::json& j) {
    ExperimentConfig c;
    if (j.contains("network")) {
        const auto& jn = j.at("network");
        auto get = [&](const char* key, auto& field) {
            if (jn.contains(key)) field = jn.at(key).get<std::decay_t<decltype(field)>>();
        };
        get("n_su", c.network.n_su);
        get("side_m", c.network.side_m);
        get("pu_distance_m", c.network.pu_distance_m);
        get("kappa", c.network.kappa);
        get("mu", c.network.mu);
        get("noise_w", c.network.noise_w);
        get("gamma0", c.network.gamma0);
        get("theta0", c.network.theta0);
        get("p_su_w", c.network.p_su_w);
        get("theta_su", c.network.theta_su);
    }
    if (j.contains("sensing")) {
        const auto& js = j.at("sensing");
        if (js.contains("gamma")) c.sensing.gamma = js.at("gamma").get<double>();
        if (js.contains("n_samples")) c.sensing.n_samples = js.at("n_samples").get<int>();
        if (js.contains("alpha")) c.sensing.alpha = js.at("alpha").get<double>();
    }
    if (j.contains("criterion")) {
        c.criterion = criterion_from_string(j.at("criterion").get<std::string>());
    }
    if (j.contains("algorithm")) {
        c.algorithm = algorithm_from_string(j.at("algorithm").get<std::string>());
    }
    if (j.contains("runs")) c.runs = j.at("runs").get<int>();
    if (j.contains("base_seed")) c.base_seed = j.at("base_seed").get<std::uint64_t>();
    if (j.contains("tau")) c.tau = j.at("tau").get<long long>();
    if (j.contains("sweep")) {
        Sweep s;
        s.param = j.at("sweep").at("param").get<std::string>();
        s.values = j.at("sweep").at("values").get<std::vector<double>>();
        c.sweep = s;
    }
    c.validate();
    return c;
}

NetworkConfig apply_sweep(const NetworkConfig& base, const std::string& param,
                          double value) {
    NetworkConfig c = base;
    if (param == "n_su") {
        c.n_su = static_cast<int>(std::lround(value));
    } else if (param == "p_su_w") {
        c.p_su_w = value;
    } else if (param == "theta_su") {
        c.theta_su = static_cast<int>(std::lround(value));
    } else if (param != "none") {
        throw std::invalid_argument("apply_sweep: unknown param " + param);
    }
    return c;
}

ResultRow run_single(const ExperimentConfig& config, const NetworkConfig& network,
                     const UtilityTable& table, const std::string& sweep_param,
                     double sweep_value, int run_index) {
    ResultRow row;
    row.sweep_param = sweep_param;
    row.sweep_value = sweep_value;
    row.run = run_index;
    row.seed = config.base_seed + static_cast<std::uint64_t>(run_index);
    row.algorithm = config.algorithm;
    row.criterion = config.criterion;

    Scenario scenario = generate_scenario(network, row.seed);
    switch (config.algorithm) {
        case Algorithm::kOcf: {
            auto res = run_formation(scenario, table, row.seed, config.tau);
            auto thresholds = decide_thresholds_overlap(res.final, table);
            row.metrics = network_metrics(res.final, thresholds, table, res.trace, scenario);
            row.convergence_bound = res.bound;
            break;
        }
        case Algorithm::kCf: {
            auto res = run_merge_formation(scenario, table, row.seed, config.tau);
            auto thresholds = decide_thresholds_partition(res.partition, table);
            row.metrics =
                network_metrics(res.partition, thresholds, table, res.trace, scenario);
            break;
        }
        case Algorithm::kLocal: {
            OverlapStructure st;
            int n = network.n_su;
            st.report_to.assign(n, {});
            st.report_from.resize(n);
            for (int i = 0; i < n; ++i) st.report_from[i] = {i};
            st.ledger = ResourceLedger(n);
            RunTrace trace;
            trace.append(EventKind::kInit, 0, social_welfare(st, table));
            std::vector<double> thresholds(n, table.threshold(1));
            row.metrics = network_metrics(st, thresholds, table, trace, scenario);
            break;
        }
    }
    return row;
}

std::vector<ResultRow> run_experiment(const ExperimentConfig& config, ExecMode mode) {
    config.validate();

    std::string sweep_param = config.sweep ? config.sweep->param : "none";
    std::vector<double> values =
        config.sweep ? config.sweep->values : std::vector<double>{0.0};

    // Utility tables are immutable and shared across runs; build them up
    // front (one per sweep value at most, cached by key).
    std::vector<NetworkConfig> networks;
    std::vector<const UtilityTable*> tables;
    std::vector<std::unique_ptr<UtilityTable>> owned;
    std::map<std::string, const UtilityTable*> cache;
    for (double v : values) {
        NetworkConfig net = apply_sweep(config.network, sweep_param, v);
        net.validate();
        if (net.theta_su < net.theta0) {
            std::fprintf(stderr,
                         "run_experiment: warning: theta_su < theta0, no "
                         "cooperation possible; results degrade to singletons\n");
        }
        int n_max = std::max(net.n_su, 2);
        std::ostringstream key;
        key.precision(17);
        key << to_string(config.criterion) << "/g=" << config.sensing.gamma
            << "/ns=" << config.sensing.n_samples << "/a=" << config.sensing.alpha
            << "/nmax=" << n_max;
        auto it = cache.find(key.str());
        if (it == cache.end()) {
            owned.push_back(std::make_unique<UtilityTable>(
                UtilityTable::build(config.criterion, n_max, config.sensing)));
            it = cache.emplace(key.str(), owned.back().get()).first;
        }
        networks.push_back(net);
        tables.push_back(it->second);
    }

    int n_points = static_cast<int>(values.size());
    int total = n_points * config.runs;
    std::vector<ResultRow> rows(total);
    auto body = [&](int flat) {
        int point = flat / config.runs;
        int run = flat % config.runs;
        rows[flat] = run_single(config, networks[point], *tables[point], sweep_param,
                                values[point], run);
    };
    if (mode == ExecMode::kParallel) {
#ifdef CSS_HAVE_OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
        for (int flat = 0; flat < total; ++flat) body(flat);
    } else {
        for (int flat = 0; flat < total; ++flat) body(flat);
    }
    return rows;
}

namespace {

std::string fmt(double v) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

}  // namespace

void emit_csv(const std::vector<ResultRow>& rows, std::ostream& os) {
    if (rows.empty()) throw std::invalid_argument("emit_csv: no rows");
    os << "sweep_param,sweep_value,run,seed,algorithm,criterion,mean_total_error,"
          "mean_miss,max_qf,social_welfare_table,social_welfare_realized,"
          "mean_coalition_size,power_util,bandwidth_util,report_count,overhead_tau,"
          "op_count,convergence_bound\n";
    for (const auto& r : rows) {
        const auto& m = r.metrics;
        os << r.sweep_param << ',' << fmt(r.sweep_value) << ',' << r.run << ','
           << r.seed << ',' << to_string(r.algorithm) << ',' << to_string(r.criterion)
           << ',' << fmt(m.mean_total_error) << ',' << fmt(m.mean_miss) << ','
           << fmt(m.max_qf) << ',' << fmt(m.social_welfare_table) << ','
           << fmt(m.social_welfare_realized) << ',' << fmt(m.mean_coalition_size)
           << ',' << fmt(m.power_utilization) << ',' << fmt(m.bandwidth_utilization)
           << ',' << m.report_count << ',' << m.total_overhead_tau << ','
           << m.op_count << ',' << r.convergence_bound << '\n';
    }
}

void emit_json(const std::vector<ResultRow>& rows, std::ostream& os) {
    if (rows.empty()) throw std::invalid_argument("emit_json: no rows");
    nlohmann::json arr = nlohmann::json::array();
    for (const auto& r : rows) {
        const auto& m = r.metrics;
        nlohmann::json hist = nlohmann::json::object();
        for (const auto& [size, count] : m.coalition_size_histogram) {
            hist[std::to_string(size)] = count;
        }
        arr.push_back({
            {"sweep_param", r.sweep_param},
            {"sweep_value", r.sweep_value},
            {"run", r.run},
            {"seed", r.seed},
            {"algorithm", to_string(r.algorithm)},
            {"criterion", to_string(r.criterion)},
            {"mean_total_error", m.mean_total_error},
            {"mean_miss", m.mean_miss},
            {"max_qf", m.max_qf},
            {"social_welfare_table", m.social_welfare_table},
            {"social_welfare_realized", m.social_welfare_realized},
            {"mean_coalition_size", m.mean_coalition_size},
            {"power_util", m.power_utilization},
            {"bandwidth_util", m.bandwidth_utilization},
            {"report_count", m.report_count},
            {"overhead_tau", m.total_overhead_tau},
            {"op_count", m.op_count},
            {"convergence_bound", r.convergence_bound},
            {"coalition_size_histogram", hist},
        });
    }
    os << arr.dump(2) << '\n';
}

void emit(const std::vector<ResultRow>& rows, const std::string& format,
          const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("emit: cannot open " + path);
    if (format == "csv") {
        emit_csv(rows, out);
    } else if (format == "json") {
        emit_json(rows, out);
    } else {
        throw std::invalid_argument("emit: unknown format " + format);
    }
    out.flush();
    if (!out) throw std::runtime_error("emit: write failed for " + path);
}

}  // namespace css
