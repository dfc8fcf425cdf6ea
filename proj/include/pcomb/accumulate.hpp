#pragma once

// Compensated summation primitives. Every series accumulation in this
// library runs through one of these: controlling the rounding behavior of
// alternating-sign sums is the central concern of the whole package.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <numeric>
#include <span>
#include <vector>

namespace pcomb {

// Running compensated sum, Neumaier's variant of Kahan's algorithm. The
// correction term is kept correct even when an addend exceeds the running
// total, which plain Kahan loses.
class NeumaierSum {
public:
    void add(double x) {
        const double s = sum_ + x;
        if (std::abs(sum_) >= std::abs(x)) {
            comp_ += (sum_ - s) + x;
        } else {
            comp_ += (x - s) + sum_;
        }
        sum_ = s;
    }

    double value() const { return sum_ + comp_; }

private:
    double sum_ = 0.0;
    double comp_ = 0.0;
};

// Compensated sum with the terms reordered by ascending magnitude, so the
// largest contributions land last. Ties keep their original relative order,
// which makes the reduction deterministic for any input arrangement.
inline double sum_by_magnitude(std::span<const double> terms) {
    std::vector<std::size_t> order(terms.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return std::abs(terms[a]) < std::abs(terms[b]);
    });
    NeumaierSum acc;
    for (std::size_t i : order) {
        acc.add(terms[i]);
    }
    return acc.value();
}

} // namespace pcomb
