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

#ifndef CSS_EXPERIMENT_HPP
#define CSS_EXPERIMENT_HPP

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "css/evaluator.hpp"
#include "css/network.hpp"
#include "css/sensing.hpp"

namespace css {

enum class Algorithm { kOcf, kCf, kLocal };

std::string to_string(Algorithm a);
Algorithm algorithm_from_string(const std::string& s);

struct Sweep {
    std::string param;  // one of n_su, p_su_w, theta_su
    std::vector<double> values;
};

struct ExperimentConfig {
    NetworkConfig network;
    SensingParams sensing;
    Criterion criterion = Criterion::kSumError;
    Algorithm algorithm = Algorithm::kOcf;
    int runs = 100;
    std::uint64_t base_seed = 1;
    std::optional<Sweep> sweep;
    long long tau = 1;

    void validate() const;
    static ExperimentConfig from_json(const nlohmann::json& j);
};

struct ResultRow {
    std::string sweep_param = "none";
    double sweep_value = 0.0;
    int run = 0;
    std::uint64_t seed = 0;
    Algorithm algorithm = Algorithm::kOcf;
    Criterion criterion = Criterion::kSumError;
    NetworkMetrics metrics;
    long long convergence_bound = 0;  // OCF only, 0 otherwise
};

enum class ExecMode { kSerial, kParallel };

/// Executes one run: scenario from (config with the sweep value applied,
/// seed), the selected formation algorithm, thresholds and metrics.
ResultRow run_single(const ExperimentConfig& config, const NetworkConfig& network,
                     const UtilityTable& table, const std::string& sweep_param,
                     double sweep_value, int run_index);

/// Full experiment grid.  Runs are independent; the parallel mode executes
/// them with OpenMP while emitting rows in deterministic (sweep, run)
/// order, byte-identical to the serial reference.
std::vector<ResultRow> run_experiment(const ExperimentConfig& config,
                                      ExecMode mode = ExecMode::kParallel);

void emit_csv(const std::vector<ResultRow>& rows, std::ostream& os);
void emit_json(const std::vector<ResultRow>& rows, std::ostream& os);

/// Writes rows to a file; format is "csv" or "json".
void emit(const std::vector<ResultRow>& rows, const std::string& format,
          const std::string& path);

/// Applies a sweep assignment to a network config.
NetworkConfig apply_sweep(const NetworkConfig& base, const std::string& param,
                          double value);

}  // namespace css

#endif
