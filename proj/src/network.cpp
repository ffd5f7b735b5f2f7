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

#include "css/network.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <stdexcept>

#include "css/rng.hpp"

namespace css {

void NetworkConfig::validate() const {
    if (n_su < 1) throw std::invalid_argument("NetworkConfig: n_su must be >= 1");
    if (!(side_m > 0.0 && pu_distance_m > 0.0 && kappa > 0.0 && mu > 0.0 &&
          noise_w > 0.0 && gamma0 > 0.0 && p_su_w > 0.0)) {
        throw std::invalid_argument("NetworkConfig: all physical parameters must be positive");
    }
    if (theta0 < 1 || theta_su < 1) {
        throw std::invalid_argument("NetworkConfig: slot parameters must be positive");
    }
    if (pu_distance_m < 10.0 * side_m) {
        std::fprintf(stderr,
                     "NetworkConfig: warning: pu_distance_m < 10*side_m; the "
                     "common-SNR assumption may be poor\n");
    }
}

double NetworkConfig::discovery_radius_m() const {
    return std::pow(kappa * p_su_w / (gamma0 * noise_w), 1.0 / mu);
}

Scenario generate_scenario(const NetworkConfig& config, std::uint64_t seed) {
    config.validate();
    Scenario s;
    s.config = config;
    s.seed = seed;
    s.radius_m = config.discovery_radius_m();

    Rng rng(seed);
    int n = config.n_su;
    s.positions.resize(n);
    for (int i = 0; i < n; ++i) {
        s.positions[i][0] = rng.uniform01() * config.side_m;
        s.positions[i][1] = rng.uniform01() * config.side_m;
    }
    s.dist.assign(n, std::vector<double>(n, 0.0));
    for (int i = 0; i < n; ++i) {
        for (int j = i + 1; j < n; ++j) {
            double dx = s.positions[i][0] - s.positions[j][0];
            double dy = s.positions[i][1] - s.positions[j][1];
            double d = std::hypot(dx, dy);
            s.dist[i][j] = d;
            s.dist[j][i] = d;
        }
    }
    s.neighbors.resize(n);
    for (int i = 0; i < n; ++i) {
        for (int j = 0; j < n; ++j) {
            if (j != i && s.dist[i][j] <= s.radius_m) s.neighbors[i].push_back(j);
        }
        // ascending distance; equidistant neighbors by ascending id
        std::stable_sort(s.neighbors[i].begin(), s.neighbors[i].end(),
                         [&](int a, int b) { return s.dist[i][a] < s.dist[i][b]; });
    }
    return s;
}

double report_cost_w(const Scenario& scenario, int i, int j) {
    if (i == j) throw std::domain_error("report_cost_w: an SU never reports to itself");
    const NetworkConfig& c = scenario.config;
    return c.gamma0 * c.noise_w * std::pow(scenario.dist[i][j], c.mu) / c.kappa;
}

bool can_afford(const ResourceLedger& ledger, const NetworkConfig& config,
                int i, double extra_power_w, int extra_slots) {
    double power = ledger.used_power_w[i] + extra_power_w;
    int slots = ledger.used_slots[i] + extra_slots;
    return power <= config.p_su_w + 1e-12 && power >= -1e-12 && slots >= 0 &&
           slots <= config.theta_su;
}

nlohmann::json Scenario::to_json() const {
    nlohmann::json jc{
        {"n_su", config.n_su},         {"side_m", config.side_m},
        {"pu_distance_m", config.pu_distance_m},
        {"kappa", config.kappa},       {"mu", config.mu},
        {"noise_w", config.noise_w},   {"gamma0", config.gamma0},
        {"theta0", config.theta0},     {"p_su_w", config.p_su_w},
        {"theta_su", config.theta_su},
    };
    return nlohmann::json{{"config", jc}, {"seed", seed}, {"positions", positions}};
}

Scenario Scenario::from_json(const nlohmann::json& j) {
    NetworkConfig c;
    const auto& jc = j.at("config");
    c.n_su = jc.at("n_su").get<int>();
    c.side_m = jc.at("side_m").get<double>();
    c.pu_distance_m = jc.at("pu_distance_m").get<double>();
    c.kappa = jc.at("kappa").get<double>();
    c.mu = jc.at("mu").get<double>();
    c.noise_w = jc.at("noise_w").get<double>();
    c.gamma0 = jc.at("gamma0").get<double>();
    c.theta0 = jc.at("theta0").get<int>();
    c.p_su_w = jc.at("p_su_w").get<double>();
    c.theta_su = jc.at("theta_su").get<int>();
    Scenario s = generate_scenario(c, j.at("seed").get<std::uint64_t>());
    // Positions in the snapshot win over the regenerated ones so that an
    // edited snapshot stays usable; distances are recomputed either way.
    auto pos = j.at("positions").get<std::vector<std::array<double, 2>>>();
    if (static_cast<int>(pos.size()) != c.n_su) {
        throw std::invalid_argument("Scenario::from_json: positions size mismatch");
    }
    if (pos != s.positions) {
        s.positions = std::move(pos);
        int n = c.n_su;
        for (int i = 0; i < n; ++i) {
            for (int k = i + 1; k < n; ++k) {
                double d = std::hypot(s.positions[i][0] - s.positions[k][0],
                                      s.positions[i][1] - s.positions[k][1]);
                s.dist[i][k] = d;
                s.dist[k][i] = d;
            }
        }
        for (int i = 0; i < n; ++i) {
            s.neighbors[i].clear();
            for (int k = 0; k < n; ++k) {
                if (k != i && s.dist[i][k] <= s.radius_m) s.neighbors[i].push_back(k);
            }
            std::stable_sort(s.neighbors[i].begin(), s.neighbors[i].end(),
                             [&](int a, int b) { return s.dist[i][a] < s.dist[i][b]; });
        }
    }
    return s;
}

}  // namespace css
