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

#include "css/math_kernel.hpp"

#include <cmath>
#include <stdexcept>

namespace css {

namespace {

constexpr double kSqrt2 = 1.4142135623730951;
constexpr double kInvSqrt2Pi = 0.3989422804014327;

double std_normal_pdf(double x) { return kInvSqrt2Pi * std::exp(-0.5 * x * x); }

// Acklam's rational approximation to the inverse normal CDF,
// accurate to ~1e-9 before refinement.
double inv_cdf_guess(double p) {
    static const double a[] = {-3.969683028665376e+01, 2.209460984245205e+02,
                               -2.759285104469687e+02, 1.383577518672690e+02,
                               -3.066479806614716e+01, 2.506628277459239e+00};
    static const double b[] = {-5.447609879822406e+01, 1.615858368580409e+02,
                               -1.556989798598866e+02, 6.680131188771972e+01,
                               -1.328068155288572e+01};
    static const double c[] = {-7.784894002430293e-03, -3.223964580411365e-01,
                               -2.400758277161838e+00, -2.549732539343734e+00,
                               4.374664141464968e+00,  2.938163982698783e+00};
    static const double d[] = {7.784695709041462e-03, 3.224671290700398e-01,
                               2.445134137142996e+00, 3.754408661907416e+00};
    const double plow = 0.02425;
    if (p < plow) {
        double q = std::sqrt(-2.0 * std::log(p));
        return (((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    if (p > 1.0 - plow) {
        double q = std::sqrt(-2.0 * std::log(1.0 - p));
        return -(((((c[0] * q + c[1]) * q + c[2]) * q + c[3]) * q + c[4]) * q + c[5]) /
               ((((d[0] * q + d[1]) * q + d[2]) * q + d[3]) * q + 1.0);
    }
    double q = p - 0.5;
    double r = q * q;
    return (((((a[0] * r + a[1]) * r + a[2]) * r + a[3]) * r + a[4]) * r + a[5]) * q /
           (((((b[0] * r + b[1]) * r + b[2]) * r + b[3]) * r + b[4]) * r + 1.0);
}

}  // namespace

double q_tail(double x) {
    if (!std::isfinite(x)) {
        throw std::domain_error("q_tail: non-finite input");
    }
    return 0.5 * std::erfc(x / kSqrt2);
}

double q_tail_inv(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw std::domain_error("q_tail_inv: p must lie in (0,1)");
    }
    // Q(x) = CDF(-x), so Q^{-1}(p) = -CDF^{-1}(p).
    double x = -inv_cdf_guess(p);
    for (int iter = 0; iter < 50; ++iter) {
        double dens = std_normal_pdf(x);
        if (dens <= 0.0) break;
        double step = (q_tail(x) - p) / dens;  // Q'(x) = -pdf(x)
        x += step;
        if (std::fabs(step) < 1e-12) break;
    }
    return x;
}

double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double abs_tol) {
    if (!(lo < hi) || !(abs_tol > 0.0)) {
        throw std::invalid_argument("find_root: bad bracket or tolerance");
    }
    double flo = f(lo);
    double fhi = f(hi);
    if (flo == 0.0) return lo;
    if (fhi == 0.0) return hi;
    if ((flo > 0.0) == (fhi > 0.0)) {
        throw std::invalid_argument("find_root: no sign change on bracket");
    }
    while (hi - lo > abs_tol) {
        double mid = 0.5 * (lo + hi);
        if (mid <= lo || mid >= hi) break;  // hit double resolution
        double fmid = f(mid);
        if (fmid == 0.0) return mid;
        if ((fmid > 0.0) == (flo > 0.0)) {
            lo = mid;
            flo = fmid;
        } else {
            hi = mid;
        }
    }
    return 0.5 * (lo + hi);
}

MinimizeResult minimize_scalar(const std::function<double(double)>& f,
                               double lo, double hi, double abs_tol) {
    if (!(lo < hi) || !(abs_tol > 0.0)) {
        throw std::domain_error("minimize_scalar: bad interval or tolerance");
    }
    // Coarse scan to bracket the minimum of a function that is unimodal
    // up to the scan resolution.
    constexpr int kScan = 256;
    int best = 0;
    double best_val = f(lo);
    double step = (hi - lo) / kScan;
    for (int k = 1; k <= kScan; ++k) {
        double v = f(lo + k * step);
        if (v < best_val) {
            best_val = v;
            best = k;
        }
    }
    double a = lo + (best > 0 ? (best - 1) * step : 0.0);
    double b = lo + (best < kScan ? (best + 1) * step : kScan * step);

    constexpr double kGolden = 0.6180339887498949;
    double x1 = b - kGolden * (b - a);
    double x2 = a + kGolden * (b - a);
    double f1 = f(x1);
    double f2 = f(x2);
    while (b - a > abs_tol) {
        if (f1 <= f2) {
            b = x2;
            x2 = x1;
            f2 = f1;
            x1 = b - kGolden * (b - a);
            f1 = f(x1);
        } else {
            a = x1;
            x1 = x2;
            f1 = f2;
            x2 = a + kGolden * (b - a);
            f2 = f(x2);
        }
        if (x2 <= x1) break;  // interval below double resolution
    }
    double xm = 0.5 * (a + b);
    return {xm, f(xm)};
}

}  // namespace css
