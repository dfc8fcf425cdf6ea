#pragma once

// Greedy closest-pair merging of normalized inverse weights into clusters of
// radius eta, plus the per-cluster deviation moments that drive the series
// expansion.
//
// Protocol: starting from one cluster per distinct value, repeatedly find the
// closest pair of current centers and merge it while the gap is <= eta. A
// merged center is the occurrence-weighted mean of the original member
// values, never a mean of means, which keeps the deviations mean-zero at the
// rounding level. Gap ties merge the pair with the smaller lower center, so
// the output is deterministic for any input order.

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

#include "pcomb/accumulate.hpp"
#include "pcomb/normalize.hpp"

namespace pcomb {

struct Cluster {
    double center = 0.0;               // occurrence-weighted mean of values
    std::vector<double> values;        // original normalized inverse weights, ascending
    std::vector<double> deviations;    // values[j] - center; sums to 0 per cluster
    std::vector<std::size_t> source;   // input item index per member
    double spread = 0.0;               // max(values) - min(values)

    std::size_t size() const { return values.size(); }
};

struct ClusterSet {
    std::vector<Cluster> clusters;     // centers strictly ascending
    double eta = 0.0;                  // radius the set was built with
    std::size_t total = 0;             // sum of cluster sizes

    std::size_t count() const { return clusters.size(); }

    bool zero_deviation() const {
        for (const Cluster& c : clusters) {
            for (double d : c.deviations) {
                if (d != 0.0) {
                    return false;
                }
            }
        }
        return true;
    }
};

inline ClusterSet cluster(const NormalizedInverseWeights& r, double eta) {
    if (std::isnan(eta) || eta < 0.0) {
        throw std::invalid_argument("clustering radius eta must be non-negative");
    }
    if (r.size() == 0) {
        throw std::invalid_argument("cannot cluster an empty weight list");
    }

    struct Group {
        double center;
        std::vector<double> values;
        std::vector<std::size_t> source;
    };

    // Seed with one group per run of bitwise-identical values. Setting the
    // center to the shared value directly (instead of sum/count) keeps the
    // deviations of never-merged groups exactly zero.
    std::vector<Group> groups;
    for (std::size_t i = 0; i < r.size(); ++i) {
        if (groups.empty() || r.r[i] != groups.back().center) {
            groups.push_back(Group{r.r[i], {}, {}});
        }
        groups.back().values.push_back(r.r[i]);
        groups.back().source.push_back(r.source[i]);
    }

    // Merge the closest adjacent pair while it is within radius. Centers stay
    // sorted because a merged center lies strictly between the two old ones.
    while (groups.size() > 1) {
        std::size_t best = 0;
        double best_gap = groups[1].center - groups[0].center;
        for (std::size_t i = 1; i + 1 < groups.size(); ++i) {
            const double gap = groups[i + 1].center - groups[i].center;
            if (gap < best_gap) {
                best_gap = gap;
                best = i;
            }
        }
        if (!(best_gap <= eta)) {
            break;
        }
        Group& lo = groups[best];
        const Group& hi = groups[best + 1];
        lo.values.insert(lo.values.end(), hi.values.begin(), hi.values.end());
        lo.source.insert(lo.source.end(), hi.source.begin(), hi.source.end());
        NeumaierSum sum;
        for (double v : lo.values) {
            sum.add(v);
        }
        lo.center = sum.value() / static_cast<double>(lo.values.size());
        groups.erase(groups.begin() + static_cast<std::ptrdiff_t>(best) + 1);
    }

    ClusterSet out;
    out.eta = eta;
    out.total = r.size();
    out.clusters.reserve(groups.size());
    for (Group& g : groups) {
        Cluster c;
        c.center = g.center;
        c.values = std::move(g.values);
        c.source = std::move(g.source);
        c.deviations.reserve(c.values.size());
        for (double v : c.values) {
            c.deviations.push_back(v - c.center);
        }
        c.spread = c.values.back() - c.values.front();
        out.clusters.push_back(std::move(c));
    }
    for (std::size_t k = 0; k + 1 < out.clusters.size(); ++k) {
        if (!(out.clusters[k].center < out.clusters[k + 1].center)) {
            throw std::logic_error("cluster centers failed to stay strictly ascending");
        }
    }
    return out;
}

// Deviation moments Y[k][g] = sum_j (-eta_{k;j})^g / g for g = 2..g_max.
// The first moment vanishes by the mean-zero construction and is not stored.
struct MomentTable {
    std::vector<std::vector<double>> y; // y[k][g - 2]
    int g_max = 1;

    double operator()(std::size_t k, int g) const { return y[k][static_cast<std::size_t>(g - 2)]; }
};

namespace detail {

// Integer power by repeated multiplication. Sign handling is exact, so
// mirrored deviations +d / -d cancel bit-for-bit in odd moments.
inline double int_pow(double base, int n) {
    double out = 1.0;
    for (int i = 0; i < n; ++i) {
        out *= base;
    }
    return out;
}

} // namespace detail

inline MomentTable moments(const ClusterSet& cs, int g_max) {
    if (g_max < 2) {
        throw std::invalid_argument("moment order g_max must be at least 2");
    }
    MomentTable table;
    table.g_max = g_max;
    table.y.reserve(cs.count());
    for (const Cluster& c : cs.clusters) {
        std::vector<double> row;
        row.reserve(static_cast<std::size_t>(g_max - 1));
        for (int g = 2; g <= g_max; ++g) {
            NeumaierSum acc;
            for (double d : c.deviations) {
                acc.add(detail::int_pow(-d, g));
            }
            row.push_back(acc.value() / static_cast<double>(g));
        }
        table.y.push_back(std::move(row));
    }
    return table;
}

} // namespace pcomb
