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

#include "css/sensing.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>
#include <stdexcept>

#include "css/math_kernel.hpp"

namespace css {

void SensingParams::validate() const {
    if (!(gamma > 0.0)) throw std::invalid_argument("SensingParams: gamma must be > 0");
    if (n_samples < 1) throw std::invalid_argument("SensingParams: n_samples must be >= 1");
    if (!(alpha > 0.0 && alpha < 1.0)) {
        throw std::invalid_argument("SensingParams: alpha must lie in (0,1)");
    }
}

std::string to_string(Criterion c) {
    return c == Criterion::kSumError ? "sum_error" : "constrained_miss";
}

Criterion criterion_from_string(const std::string& s) {
    if (s == "sum_error" || s == "sum") return Criterion::kSumError;
    if (s == "constrained_miss" || s == "constrained") return Criterion::kConstrainedMiss;
    throw std::invalid_argument("unknown criterion: " + s);
}

double local_miss_prob(double lambda, const SensingParams& params) {
    if (!(lambda > 0.0)) throw std::domain_error("local_miss_prob: lambda must be > 0");
    double root_ns = std::sqrt(static_cast<double>(params.n_samples));
    return 1.0 - q_tail((lambda / (1.0 + params.gamma) - 1.0) * root_ns);
}

double local_false_alarm_prob(double lambda, const SensingParams& params) {
    if (!(lambda > 0.0)) throw std::domain_error("local_false_alarm_prob: lambda must be > 0");
    double root_ns = std::sqrt(static_cast<double>(params.n_samples));
    return q_tail((lambda - 1.0) * root_ns);
}

double fused_and_miss(std::span<const double> miss_probs) {
    if (miss_probs.empty()) throw std::domain_error("fused_and_miss: empty coalition");
    double prod = 1.0;
    for (double pm : miss_probs) prod *= 1.0 - pm;
    return 1.0 - prod;
}

double fused_and_false_alarm(std::span<const double> fa_probs) {
    if (fa_probs.empty()) throw std::domain_error("fused_and_false_alarm: empty coalition");
    bool tiny = false;
    for (double pf : fa_probs) {
        if (pf == 0.0) return 0.0;
        if (pf < 1e-300) tiny = true;
    }
    if (tiny) {
        double log_sum = 0.0;
        for (double pf : fa_probs) log_sum += std::log(pf);
        return std::exp(log_sum);
    }
    double prod = 1.0;
    for (double pf : fa_probs) prod *= pf;
    return prod;
}

namespace {

// Fused sum-error objective for a homogeneous coalition of size n,
// Qf - "Qd" form: Q((l-1)rNs)^n - Q((l/(1+g)-1)rNs)^n.  The coalition
// utility is 1 minus this value at its minimum.
double sum_error_objective(double lambda, int n, const SensingParams& p) {
    double root_ns = std::sqrt(static_cast<double>(p.n_samples));
    double q1 = q_tail((lambda - 1.0) * root_ns);
    double qg = q_tail((lambda / (1.0 + p.gamma) - 1.0) * root_ns);
    return std::exp(n * std::log(q1)) - std::exp(n * std::log(qg));
}

// First-order stationarity condition for the objective above:
// (Q1/Qg)^{n-1} - exp{(Ns/2)[(l-1)^2 - (l/(1+g)-1)^2]} / (1+g) = 0.
double stationarity(double lambda, int n, const SensingParams& p) {
    double root_ns = std::sqrt(static_cast<double>(p.n_samples));
    double q1 = q_tail((lambda - 1.0) * root_ns);
    double qg = q_tail((lambda / (1.0 + p.gamma) - 1.0) * root_ns);
    double a1 = (lambda - 1.0) * root_ns;
    double ag = (lambda / (1.0 + p.gamma) - 1.0) * root_ns;
    double ratio = std::exp((n - 1) * (std::log(q1) - std::log(qg)));
    double rhs = std::exp(0.5 * (a1 * a1 - ag * ag)) / (1.0 + p.gamma);
    return ratio - rhs;
}

// Scans [lo,hi] for a sign change of the stationarity condition and
// bisects it.  Returns false when no bracket exists on the interval.
bool root_on_interval(int n, const SensingParams& p, double lo, double hi,
                      double* out) {
    constexpr int kScan = 256;
    double step = (hi - lo) / kScan;
    double prev = stationarity(lo, n, p);
    for (int k = 1; k <= kScan; ++k) {
        double x = lo + k * step;
        double cur = stationarity(x, n, p);
        if (prev == 0.0) {
            *out = lo + (k - 1) * step;
            return true;
        }
        if ((prev > 0.0) != (cur > 0.0)) {
            *out = find_root(
                [&](double l) { return stationarity(l, n, p); },
                lo + (k - 1) * step, x, 1e-13);
            return true;
        }
        prev = cur;
    }
    return false;
}

}  // namespace

double lambda_a_argmin(int n, const SensingParams& params) {
    if (n < 1) throw std::domain_error("lambda_a_argmin: n must be >= 1");
    params.validate();
    double g = params.gamma;
    double delta = 1e-9 * g;
    // The fused objective can attain its minimum below 1 for larger
    // coalitions, so the scan covers (1-gamma, 1+gamma).
    auto r = minimize_scalar(
        [&](double l) { return sum_error_objective(l, n, params); },
        1.0 - g + delta, 1.0 + g - delta, 1e-11);
    return r.argmin;
}

double lambda_a(int n, const SensingParams& params) {
    if (n < 1) throw std::domain_error("lambda_a: n must be >= 1");
    params.validate();
    double g = params.gamma;
    double delta = 1e-9 * g;
    double root = 0.0;
    bool found = root_on_interval(n, params, 1.0 + delta, 1.0 + g - delta, &root);
    if (!found) {
        // For larger coalitions the stationary point moves below 1; widen
        // the bracket to the full interval where both tail arguments stay
        // within gamma*sqrt(Ns) of zero.
        found = root_on_interval(n, params, 1.0 - g + delta, 1.0 + g - delta, &root);
    }
    if (!found) {
        std::fprintf(stderr,
                     "lambda_a: no stationary point bracketed for n=%d; "
                     "falling back to direct minimization\n", n);
        root = lambda_a_argmin(n, params);
    }
    double check = lambda_a_argmin(n, params);
    if (std::fabs(root - check) > 1e-6) {
        std::ostringstream os;
        os << "lambda_a: stationarity root " << root << " disagrees with argmin "
           << check << " for n=" << n;
        throw std::runtime_error(os.str());
    }
    return root;
}

double f_a(int n, const SensingParams& params) {
    double lam = lambda_a(n, params);
    return 1.0 - sum_error_objective(lam, n, params);
}

double lambda_b(int n, const SensingParams& params) {
    if (n < 1) throw std::domain_error("lambda_b: n must be >= 1");
    params.validate();
    double root_ns = std::sqrt(static_cast<double>(params.n_samples));
    return 1.0 + q_tail_inv(std::pow(params.alpha, 1.0 / n)) / root_ns;
}

double f_b(int n, const SensingParams& params) {
    if (n < 1) throw std::domain_error("f_b: n must be >= 1");
    params.validate();
    double root_ns = std::sqrt(static_cast<double>(params.n_samples));
    double qinv = q_tail_inv(std::pow(params.alpha, 1.0 / n));
    double q = q_tail((qinv - params.gamma * root_ns) / (1.0 + params.gamma));
    return std::exp(n * std::log(q));
}

UtilityTable UtilityTable::build(Criterion criterion, int n_max,
                                 const SensingParams& params) {
    if (n_max < 2) throw std::invalid_argument("UtilityTable: n_max must be >= 2");
    params.validate();
    UtilityTable t;
    t.criterion_ = criterion;
    t.params_ = params;
    t.u_.resize(n_max);
    t.lambda_opt_.resize(n_max);
    for (int n = 1; n <= n_max; ++n) {
        if (criterion == Criterion::kSumError) {
            t.lambda_opt_[n - 1] = lambda_a(n, params);
            t.u_[n - 1] = 1.0 - sum_error_objective(t.lambda_opt_[n - 1], n, params);
        } else {
            t.lambda_opt_[n - 1] = lambda_b(n, params);
            t.u_[n - 1] = f_b(n, params);
        }
    }
    t.phi_.resize(n_max - 1);
    for (int n = 2; n <= n_max; ++n) t.phi_[n - 2] = t.u_[n - 1] - t.u_[n - 2];

    auto fail = [](int n, const char* what) {
        std::ostringstream os;
        os << "UtilityTable: " << what << " violated at n=" << n;
        throw std::runtime_error(os.str());
    };
    double upper = criterion == Criterion::kSumError ? 2.0 : 1.0;
    for (int n = 1; n <= n_max; ++n) {
        if (!(t.u_[n - 1] > 0.0 && t.u_[n - 1] < upper)) fail(n, "utility bounds");
        if (n >= 2 && !(t.u_[n - 1] > t.u_[n - 2])) fail(n, "utility monotonicity");
    }
    for (int n = 2; n <= n_max; ++n) {
        if (!(t.phi_[n - 2] > 0.0)) fail(n, "payoff positivity");
        if (n >= 3 && !(t.phi_[n - 2] < t.phi_[n - 3])) fail(n, "payoff monotonicity");
    }
    for (int n = 3; n < n_max; ++n) {
        // phi convexity: second difference positive
        if (!(t.phi_[n - 1] - 2.0 * t.phi_[n - 2] + t.phi_[n - 3] > 0.0)) {
            fail(n, "payoff convexity");
        }
    }
    return t;
}

double UtilityTable::utility(int n) const {
    if (n < 1 || n > n_max()) throw std::domain_error("UtilityTable::utility: n out of range");
    return u_[n - 1];
}

double UtilityTable::phi(int n) const {
    if (n < 2 || n > n_max()) throw std::domain_error("UtilityTable::phi: n out of range");
    return phi_[n - 2];
}

double UtilityTable::threshold(int n) const {
    if (n < 1 || n > n_max()) throw std::domain_error("UtilityTable::threshold: n out of range");
    return lambda_opt_[n - 1];
}

nlohmann::json UtilityTable::to_json() const {
    return nlohmann::json{
        {"criterion", to_string(criterion_)},
        {"params", {{"gamma", params_.gamma},
                    {"n_samples", params_.n_samples},
                    {"alpha", params_.alpha}}},
        {"u", u_},
        {"phi", phi_},
        {"lambda_opt", lambda_opt_},
    };
}

UtilityTable UtilityTable::from_json(const nlohmann::json& j) {
    UtilityTable t;
    t.criterion_ = criterion_from_string(j.at("criterion").get<std::string>());
    t.params_.gamma = j.at("params").at("gamma").get<double>();
    t.params_.n_samples = j.at("params").at("n_samples").get<int>();
    t.params_.alpha = j.at("params").at("alpha").get<double>();
    t.params_.validate();
    t.u_ = j.at("u").get<std::vector<double>>();
    t.phi_ = j.at("phi").get<std::vector<double>>();
    t.lambda_opt_ = j.at("lambda_opt").get<std::vector<double>>();
    if (t.u_.size() < 2 || t.phi_.size() != t.u_.size() - 1 ||
        t.lambda_opt_.size() != t.u_.size()) {
        throw std::invalid_argument("UtilityTable::from_json: inconsistent arrays");
    }
    return t;
}

std::string UtilityTable::cache_key() const {
    std::ostringstream os;
    os.precision(17);
    os << to_string(criterion_) << "/g=" << params_.gamma << "/ns=" << params_.n_samples
       << "/a=" << params_.alpha << "/nmax=" << n_max();
    return os.str();
}

double member_payoff(const UtilityTable& table, int n) { return table.phi(n); }

double originator_payoff(const UtilityTable& table, int n) {
    if (n < 1 || n > table.n_max()) {
        throw std::domain_error("originator_payoff: n out of range");
    }
    if (n == 1) return table.utility(1);
    return table.utility(n) - (n - 1) * table.phi(n);
}

}  // namespace css
