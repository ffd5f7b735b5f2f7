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

#ifndef CSS_MATH_KERNEL_HPP
#define CSS_MATH_KERNEL_HPP

#include <functional>

namespace css {

/// Right-tail probability of the standard normal distribution,
/// Q(x) = P[Z > x].  Strictly decreasing; Q(x) + Q(-x) = 1.
double q_tail(double x);

/// Inverse of q_tail on (0,1).  Rational initial guess refined by Newton
/// steps until the update falls below 1e-12.
double q_tail_inv(double p);

/// Bisection root finder.  f(lo) and f(hi) must have opposite signs;
/// the returned abscissa brackets the root to an interval of width <= abs_tol.
double find_root(const std::function<double(double)>& f, double lo, double hi,
                 double abs_tol);

struct MinimizeResult {
    double argmin;
    double min;
};

/// Golden-section minimization of a unimodal function on [lo,hi], preceded
/// by a 256-point coarse scan to locate the bracket.
MinimizeResult minimize_scalar(const std::function<double(double)>& f,
                               double lo, double hi, double abs_tol);

}  // namespace css

#endif
