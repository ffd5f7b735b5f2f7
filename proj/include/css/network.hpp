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

#ifndef CSS_NETWORK_HPP
#define CSS_NETWORK_HPP

#include <array>
#include <cstdint>
#include <vector>

#include <json.hpp>

namespace css {

/// Geometry, path loss and per-SU resource budgets.  All quantities are
/// linear: meters and watts.  dB/dBm conversions happen once at CLI parse.
struct NetworkConfig {
    int n_su = 30;
    double side_m = 10000.0;          // side of the deployment square
    double pu_distance_m = 150000.0;  // PU distance D
    double kappa = 1.0;               // path loss constant
    double mu = 3.0;                  // path loss exponent
    double noise_w = 1e-12;           // noise power (-90 dBm)
    double gamma0 = 1.0;              // minimum report SNR (0 dB)
    int theta0 = 1;                   // slots per report
    double p_su_w = 0.1;              // power budget P_SU
    int theta_su = 10;                // slot budget theta_SU

    void validate() const;

    /// Neighbor-discovery radius: the distance at which a full-power report
    /// still meets gamma0, (kappa P_SU / (gamma0 sigma_u^2))^(1/mu).
    double discovery_radius_m() const;
};

struct Scenario {
    NetworkConfig config;
    std::uint64_t seed = 0;
    std::vector<std::array<double, 2>> positions;
    std::vector<std::vector<double>> dist;      // symmetric, zero diagonal
    std::vector<std::vector<int>> neighbors;    // per SU, ascending distance
    double radius_m = 0.0;

    nlohmann::json to_json() const;
    static Scenario from_json(const nlohmann::json& j);
};

/// Positions i.i.d. uniform on the square; distances and neighbor sets
/// fully populated.  Identical (config, seed) yields identical scenarios.
Scenario generate_scenario(const NetworkConfig& config, std::uint64_t seed);

/// Power needed for SU i to report to SU j: gamma0 sigma_u^2 d_{i,j}^mu / kappa.
double report_cost_w(const Scenario& scenario, int i, int j);

/// Per-SU consumed power and reporting slots.
struct ResourceLedger {
    std::vector<double> used_power_w;
    std::vector<int> used_slots;

    explicit ResourceLedger(int n_su = 0)
        : used_power_w(n_su, 0.0), used_slots(n_su, 0) {}
};

/// True iff SU i's budgets still hold after adding the given deltas
/// (negative deltas are refunds from a leave).
bool can_afford(const ResourceLedger& ledger, const NetworkConfig& config,
                int i, double extra_power_w, int extra_slots);

}  // namespace css

#endif
