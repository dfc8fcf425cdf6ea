#pragma once

// Upper-tail Erlang probability
//
//   H(x, n) = e^{-x} * sum_{k=0..n} x^k / k!
//
// i.e. the probability that a sum of n+1 unit-rate exponentials exceeds x,
// equal to the regularized upper incomplete gamma function Q(n+1, x). This
// single function carries every exact combined-P formula in the library.

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "pcomb/accumulate.hpp"

namespace pcomb {

// Above this x the partial sums x^k/k! span enough orders of magnitude that
// the evaluation switches to log space. Below it, direct accumulation is
// safe: terms stay under e^30 ~ 1.1e13 and the sum is single-signed.
inline constexpr double h_direct_max_x = 30.0;

namespace detail {

inline void check_h_args(double x, int n) {
    if (!(x >= 0.0)) {
        throw std::invalid_argument("h_function: x must be non-negative");
    }
    if (n < 0) {
        throw std::invalid_argument("h_function: n must be non-negative");
    }
}

} // namespace detail

// ln H(x, n), stable for any x >= 0. The truncated exponential series is
// summed in log space around its largest term.
inline double log_h_function(double x, int n) {
    detail::check_h_args(x, n);
    if (x == 0.0) {
        return 0.0;
    }
    // log of term k is k*ln(x) - lgamma(k+1); the sequence is unimodal with
    // its peak near k = min(n, x).
    const double lx = std::log(x);
    std::vector<double> lt(static_cast<std::size_t>(n) + 1);
    double peak = -std::numeric_limits<double>::infinity();
    for (int k = 0; k <= n; ++k) {
        lt[static_cast<std::size_t>(k)] = k * lx - std::lgamma(static_cast<double>(k) + 1.0);
        peak = std::max(peak, lt[static_cast<std::size_t>(k)]);
    }
    NeumaierSum acc;
    for (int k = 0; k <= n; ++k) {
        acc.add(std::exp(lt[static_cast<std::size_t>(k)] - peak));
    }
    return -x + peak + std::log(acc.value());
}

// H(x, n) itself, clamped into [0, 1] against last-ulp spill.
inline double h_function(double x, int n) {
    detail::check_h_args(x, n);
    if (x <= h_direct_max_x) {
        NeumaierSum acc;
        double term = 1.0;
        acc.add(term);
        for (int k = 1; k <= n; ++k) {
            term *= x / static_cast<double>(k);
            acc.add(term);
        }
        return std::min(1.0, std::exp(-x) * acc.value());
    }
    // exp underflows to 0 for hopeless tails (log H < ~-745), which is the
    // honest double-precision answer.
    return std::min(1.0, std::exp(log_h_function(x, n)));
}

} // namespace pcomb
