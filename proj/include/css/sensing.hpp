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

#ifndef CSS_SENSING_HPP
#define CSS_SENSING_HPP

#include <span>
#include <string>
#include <vector>

#include <json.hpp>

namespace css {

/// Energy-detector parameters shared by all SUs.
struct SensingParams {
    double gamma = 0.031622776601683791;  // average received SNR, linear (-15 dB)
    int n_samples = 10000;                // sensing samples N_s
    double alpha = 0.1;                   // false-alarm cap, miss-minimizing criterion

    void validate() const;
};

enum class Criterion {
    kSumError,        // minimize Q_m + Q_f
    kConstrainedMiss  // minimize Q_m subject to Q_f <= alpha
};

std::string to_string(Criterion c);
Criterion criterion_from_string(const std::string& s);

/// Probability that a single detector misses the primary signal at
/// normalized threshold lambda:  1 - Q((lambda/(1+gamma) - 1) sqrt(N_s)).
double local_miss_prob(double lambda, const SensingParams& params);

/// Single-detector false alarm probability: Q((lambda - 1) sqrt(N_s)).
double local_false_alarm_prob(double lambda, const SensingParams& params);

/// AND-rule fused miss: 1 - prod_j (1 - P_m,j).
double fused_and_miss(std::span<const double> miss_probs);

/// AND-rule fused false alarm: prod_j P_f,j.  Products are taken in log
/// space when a factor underflow threatens.
double fused_and_false_alarm(std::span<const double> fa_probs);

/// Optimal homogeneous threshold for a coalition of n detectors under the
/// sum-error criterion: the stationary point of the fused error objective,
/// found by bisection on the first-order condition.
double lambda_a(int n, const SensingParams& params);

/// Direct golden-section argmin of the sum-error objective; independent
/// check of lambda_a that does not trust the derivative algebra.
double lambda_a_argmin(int n, const SensingParams& params);

/// Coalition utility under the sum-error criterion, 2 - min(Q_m + Q_f),
/// evaluated at lambda_a(n).
double f_a(int n, const SensingParams& params);

/// Closed-form optimal threshold under the constrained-miss criterion:
/// 1 + Qinv(alpha^{1/n}) / sqrt(N_s).
double lambda_b(int n, const SensingParams& params);

/// Coalition utility under the constrained-miss criterion,
/// 1 - min Q_m s.t. Q_f <= alpha, in closed form.
double f_b(int n, const SensingParams& params);

/// Per-size utility, payoff and threshold tables for one criterion.
/// Immutable after construction; construction validates monotonicity,
/// concavity and payoff positivity and throws on the first offending size.
class UtilityTable {
  public:
    static UtilityTable build(Criterion criterion, int n_max,
                              const SensingParams& params);

    Criterion criterion() const { return criterion_; }
    const SensingParams& params() const { return params_; }
    int n_max() const { return static_cast<int>(u_.size()); }

    double utility(int n) const;    // U(n), 1 <= n <= n_max
    double phi(int n) const;        // U(n) - U(n-1), 2 <= n <= n_max
    double threshold(int n) const;  // optimal lambda for size n

    nlohmann::json to_json() const;
    static UtilityTable from_json(const nlohmann::json& j);

    /// Cache key over (criterion, gamma, N_s, alpha, n_max).
    std::string cache_key() const;

  private:
    UtilityTable() = default;
    Criterion criterion_ = Criterion::kSumError;
    SensingParams params_;
    std::vector<double> u_;           // u_[n-1] = U(n)
    std::vector<double> phi_;         // phi_[n-2] = phi(n)
    std::vector<double> lambda_opt_;  // lambda_opt_[n-1]
};

/// phi(n) for a joining member, 2 <= n <= n_max.
double member_payoff(const UtilityTable& table, int n);

/// U(n) - (n-1) phi(n), the residual kept by the coalition's own SU.
double originator_payoff(const UtilityTable& table, int n);

}  // namespace css

#endif
