#pragma once

// Enumeration of weak compositions: every vector (g_1..g_m) of non-negative
// integers with sum g_i = total, visited in ascending lexicographic order.
// These index the inner sums of the general combined-P formula; fixing the
// order fixes the floating-point reduction, so results are reproducible.

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace pcomb {

namespace detail {

template <typename Visit>
void compose_rec(std::vector<int>& g, std::size_t pos, int remaining, Visit& visit) {
    if (pos + 1 == g.size()) {
        g[pos] = remaining;
        visit(const_cast<const std::vector<int>&>(g));
        g[pos] = 0;
        return;
    }
    for (int v = 0; v <= remaining; ++v) {
        g[pos] = v;
        compose_rec(g, pos + 1, remaining - v, visit);
    }
    g[pos] = 0;
}

} // namespace detail

template <typename Visit>
void for_each_composition(int m, int total, Visit&& visit) {
    if (m < 1) {
        throw std::invalid_argument("composition length m must be at least 1");
    }
    if (total < 0) {
        throw std::invalid_argument("composition total must be non-negative");
    }
    std::vector<int> g(static_cast<std::size_t>(m), 0);
    detail::compose_rec(g, 0, total, visit);
}

inline std::vector<std::vector<int>> enumerate_compositions(int m, int total) {
    std::vector<std::vector<int>> out;
    for_each_composition(m, total, [&](const std::vector<int>& g) { out.push_back(g); });
    return out;
}

} // namespace pcomb
